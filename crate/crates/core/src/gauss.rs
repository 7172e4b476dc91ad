//! Exact symbolic Gauss-sum values and the floating point complex numbers
//! used only for numeric cross-checks.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rat = Ratio<i128>;

/// Relative tolerance for numeric character-sum checks, scaled by `p^(m/2)`.
pub const REL_TOL: f64 = 1e-6;

/// The exact complex number `i^unit * p^(half_exp / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussValue {
    pub p: u32,
    /// Exponent of `i`, in `0..4`.
    pub unit: u8,
    pub half_exp: i32,
}

impl GaussValue {
    pub fn new(p: u32, unit: u8, half_exp: i32) -> Self {
        GaussValue {
            p,
            unit: unit % 4,
            half_exp,
        }
    }

    /// Closed form of the quadratic Gauss sum over `GF(p^m)`:
    /// `(-1)^(m-1) * i^((p-1)^2 m / 4) * p^(m/2)`.
    pub fn closed(p: u32, m: usize) -> Self {
        let h = ((p as u64 - 1) / 2) % 4;
        let i_exp = (h * h % 4) * (m as u64 % 4) % 4;
        let sign = if m.is_multiple_of(2) { 2 } else { 0 };
        GaussValue::new(p, ((i_exp + sign) % 4) as u8, m as i32)
    }

    /// Multiplies by `p^k`.
    pub fn scale_p(self, k: i32) -> Self {
        GaussValue {
            half_exp: self.half_exp + 2 * k,
            ..self
        }
    }

    /// Multiplies by `+1` or `-1`.
    pub fn signed(self, sign: i64) -> Self {
        if sign < 0 {
            -self
        } else {
            self
        }
    }

    /// The value as a rational number, if it is one.
    pub fn to_rational(self) -> Option<Rat> {
        if !self.unit.is_multiple_of(2) || self.half_exp % 2 != 0 {
            return None;
        }
        let e = self.half_exp / 2;
        let mag = Rat::from_integer(self.p as i128).pow(e);
        Some(if self.unit == 2 { -mag } else { mag })
    }

    /// Like [`GaussValue::to_rational`] but fails with the given context.
    pub fn rational(self, what: &str) -> Result<Rat> {
        self.to_rational()
            .ok_or_else(|| Error::NonIntegerFormula(format!("{what}: {self} is not rational")))
    }

    pub fn to_complex(self) -> ComplexApprox {
        let mag = (self.p as f64).powf(self.half_exp as f64 / 2.0);
        let (re, im) = match self.unit {
            0 => (mag, 0.0),
            1 => (0.0, mag),
            2 => (-mag, 0.0),
            _ => (0.0, -mag),
        };
        ComplexApprox { re, im }
    }
}

impl Mul for GaussValue {
    type Output = GaussValue;

    fn mul(self, rhs: GaussValue) -> GaussValue {
        debug_assert_eq!(self.p, rhs.p);
        GaussValue::new(self.p, self.unit + rhs.unit, self.half_exp + rhs.half_exp)
    }
}

impl Neg for GaussValue {
    type Output = GaussValue;

    fn neg(self) -> GaussValue {
        GaussValue::new(self.p, self.unit + 2, self.half_exp)
    }
}

impl fmt::Display for GaussValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = ["1", "i", "-1", "-i"][self.unit as usize];
        write!(f, "{u}*{}^({}/2)", self.p, self.half_exp)
    }
}

/// Double precision complex number.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
}

impl ComplexApprox {
    pub const ZERO: ComplexApprox = ComplexApprox { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        ComplexApprox { re, im }
    }

    pub fn real(re: f64) -> Self {
        ComplexApprox { re, im: 0.0 }
    }

    /// `zeta_p^k = exp(2 pi i k / p)`.
    pub fn zeta(p: u32, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as f64;
        let t = 2.0 * PI * k / p as f64;
        ComplexApprox {
            re: t.cos(),
            im: t.sin(),
        }
    }

    /// `sum_k counts[k] * zeta_p^k`.
    pub fn from_zeta_histogram(p: u32, counts: &[i64]) -> Self {
        counts
            .iter()
            .enumerate()
            .fold(ComplexApprox::ZERO, |acc, (k, &c)| {
                acc + ComplexApprox::zeta(p, k as i64).scale(c as f64)
            })
    }

    pub fn scale(self, s: f64) -> Self {
        ComplexApprox {
            re: self.re * s,
            im: self.im * s,
        }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// `|self - other| <= tol * scale`.
    pub fn approx_eq(self, other: ComplexApprox, tol: f64, scale: f64) -> bool {
        (self - other).abs() <= tol * scale
    }
}

impl Add for ComplexApprox {
    type Output = ComplexApprox;

    fn add(self, o: ComplexApprox) -> ComplexApprox {
        ComplexApprox {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for ComplexApprox {
    type Output = ComplexApprox;

    fn sub(self, o: ComplexApprox) -> ComplexApprox {
        ComplexApprox {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for ComplexApprox {
    type Output = ComplexApprox;

    fn mul(self, o: ComplexApprox) -> ComplexApprox {
        ComplexApprox {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.6}{:+.6}i", self.re, self.im)
    }
}

/// Converts a rational known to be integral.
pub fn rat_to_int(r: Rat, what: &str) -> Result<i128> {
    if !r.denom().is_one() {
        return Err(Error::NonIntegerFormula(format!("{what} = {r}")));
    }
    Ok(*r.numer())
}

pub fn rat(n: i128) -> Rat {
    Rat::from_integer(n)
}

pub fn pow_i(p: u32, e: u32) -> i128 {
    (p as i128).pow(e)
}

/// `p^e` for possibly negative `e`, as a rational.
pub fn pow_rat(p: u32, e: i32) -> Rat {
    if e >= 0 {
        rat(pow_i(p, e as u32))
    } else {
        Rat::one() / rat(pow_i(p, (-e) as u32))
    }
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_small_values() {
        assert_eq!(GaussValue::closed(3, 1), GaussValue::new(3, 1, 1));
        assert_eq!(GaussValue::closed(3, 2).to_rational(), Some(rat(3)));
        assert_eq!(GaussValue::closed(5, 1).to_rational(), None);
        assert_eq!(GaussValue::closed(5, 1).unit, 0);
        assert_eq!(GaussValue::closed(5, 2).to_rational(), Some(rat(-5)));
    }

    #[test]
    fn direct_three_term_sum() {
        // G_1 over F_3: eta(1) zeta + eta(2) zeta^2 = zeta - zeta^2 = i sqrt 3
        let g = ComplexApprox::zeta(3, 1) - ComplexApprox::zeta(3, 2);
        assert!(g.approx_eq(GaussValue::closed(3, 1).to_complex(), 1e-12, 1.0));
    }

    #[test]
    fn product_rules() {
        let g1 = GaussValue::closed(3, 1);
        let g3 = GaussValue::closed(3, 3);
        // p = eta_1(-1) G_1^2 with eta_1(-1) = -1 for p = 3
        assert_eq!((g1 * g1).signed(-1).to_rational(), Some(rat(3)));
        let r = (g3 * g1).scale_p(-2).to_rational().unwrap();
        assert!(r == Rat::one() || r == -Rat::one());
        assert_eq!((-g1 * g1).to_rational(), Some(rat(3)));
        assert_eq!(
            GaussValue::new(3, 0, -2).to_rational(),
            Some(Rat::new(1, 3))
        );
        assert!(GaussValue::new(3, 0, 3).rational("x").is_err());
    }

    #[test]
    fn complex_arithmetic() {
        let i = ComplexApprox::new(0.0, 1.0);
        assert!((i * i).approx_eq(ComplexApprox::real(-1.0), 1e-15, 1.0));
        let z = ComplexApprox::from_zeta_histogram(5, &[1, 1, 1, 1, 1]);
        assert!(z.abs() < 1e-12);
        assert!(ComplexApprox::zeta(7, -1).approx_eq(ComplexApprox::zeta(7, 6), 1e-15, 1.0));
    }

    #[test]
    fn rational_helpers() {
        assert_eq!(rat_to_int(rat(6) / rat(3), "x").unwrap(), 2);
        assert!(rat_to_int(rat(1) / rat(2), "x").is_err());
        assert_eq!(pow_rat(3, -1), Rat::new(1, 3));
        assert!(is_zero(&Rat::zero()));
    }
}
