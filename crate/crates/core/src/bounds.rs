//! Size guards for the exhaustive stages.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding [`Bounds::max_field`].
pub const MAX_FIELD_ENV: &str = "TRACECODE_MAX_FIELD";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest `p^m` for code enumeration.
    pub max_field: u64,
    /// Largest code length for dual triple counting.
    pub max_triple_n: usize,
    /// Largest `p^m` for the pairwise minimality check.
    pub max_minimality: u64,
    /// Largest `|Omega|` for sum-set counting with `s = 3`.
    pub max_omega: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_field: 59049,
            max_triple_n: 1000,
            max_minimality: 2187,
            max_omega: 10_000,
        }
    }
}

impl Bounds {
    /// Defaults with `max_field` taken from the environment when set.
    pub fn from_env() -> Result<Self> {
        let mut b = Bounds::default();
        if let Ok(v) = std::env::var(MAX_FIELD_ENV) {
            b.max_field = v.trim().parse().map_err(|_| {
                Error::Config(format!("{MAX_FIELD_ENV}={v:?} is not a positive integer"))
            })?;
        }
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_field == 0
            || self.max_triple_n == 0
            || self.max_minimality == 0
            || self.max_omega == 0
        {
            return Err(Error::Config("bounds must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn guard(size: u64, bound: u64) -> Result<()> {
    if size > bound {
        return Err(Error::TooLarge { size, bound });
    }
    Ok(())
}
