//! Locally constant compactly supported functions on `Q_p^d`, the
//! Schrödinger representation of the Heisenberg group, the Fourier
//! transform and intertwining operators for symplectic matrices.
//!
//! A function is stored on the grid of cosets of `p^n Z_p^d` inside
//! `p^{-m} Z_p^d`. Coordinate `i` of a coset is an integer
//! `0 <= u_i < p^{m+n}` standing for the representative `u_i / p^m`;
//! coordinate 0 varies fastest in the flat table.

mod character;
mod function;
mod heisenberg;
mod ops;
pub mod sample;
mod symplectic;
#[cfg(test)]
mod tests;

pub use character::{AdditiveCharacter, DEFAULT_WINDOW};
pub use function::{SchwartzFunction, MAX_TABLE};
pub use heisenberg::{heisenberg_act, HeisenbergElement};
pub use ops::{
    check_intertwining, chirp, fourier, intertwine, intertwine_sl2, linear_change, norm_growth_family,
    NormGrowth,
};
pub use symplectic::SymplecticMatrix;

use crate::padic::PadicError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchwartzError {
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("character values need zeta of order p^{required}, field has p^{available}")]
    InsufficientField { required: u32, available: u32 },
    #[error("grid exponents m = {m}, n = {n} exceed the window cap {cap}")]
    WindowCap { m: i64, n: i64, cap: i64 },
    #[error("table with {entries} entries is too large")]
    TableTooLarge { entries: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}
