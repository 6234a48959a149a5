//! Exact cyclotomic p-adic arithmetic and the computations built on it.

pub mod harness;
pub mod mahler;
pub mod norms;
pub mod padic;
pub mod qcalc;
pub mod rational;
pub mod scalar;
pub mod schwartz;

use num_bigint::BigInt;

/// Field with unbounded precision.
pub type Field = padic::CyclotomicField<BigInt>;
/// Element with unbounded precision.
pub type Element = padic::CycloElement<BigInt>;
/// Field on the fixed-width `i128` backend.
pub type FastField = padic::CyclotomicField<i128>;
/// Element on the fixed-width `i128` backend.
pub type FastElement = padic::CycloElement<i128>;

pub use padic::{PadicError, PadicScalar};
pub use rational::{ValuationQ, Q};
