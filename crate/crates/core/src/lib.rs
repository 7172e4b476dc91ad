//! Trace codes `C_{D_a}` over `GF(p)`.

pub mod apps;
pub mod bounds;
pub mod charsum;
pub mod closed_form;
pub mod code;
pub mod counting;
pub mod error;
pub mod field;
pub mod gauss;
pub mod job;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldElement, PrimeResidue};
pub use gauss::{ComplexApprox, GaussValue};
