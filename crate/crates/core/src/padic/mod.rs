//! Exact arithmetic in `Q_p` and in `K_N = Q_p(ζ_{p^N})`.

mod element;
mod field;
pub mod json;
pub mod parse;
mod qp;
mod resultant;

pub use element::CycloElement;
pub use field::{
    eisenstein_polynomial, is_prime, CyclotomicField, DEFAULT_PRECISION, MAX_DEGREE,
    MAX_PRECISION,
};
pub use qp::PadicScalar;
pub use resultant::valuation_by_resultant;

use crate::rational::ValuationQ;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("requested precision {requested} exceeds the maximum {max}")]
    PrecisionOverflow { requested: u32, max: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("element is zero at precision {precision}")]
    ZeroAtPrecision { precision: ValuationQ },
    #[error("cannot embed level {from} into level {to}")]
    EmbedDown { from: u32, to: u32 },
    #[error("resultant elimination ran out of p-adic digits ({digits})")]
    ResultantPrecision { digits: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}
