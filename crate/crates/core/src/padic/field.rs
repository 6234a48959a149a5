use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::PadicError;
use crate::scalar::ResidueInt;

/// Working precision when the caller does not ask for one.
pub const DEFAULT_PRECISION: u32 = 64;
/// Hard ceiling on requested precision (p-digits) for unbounded backends.
pub const MAX_PRECISION: u32 = 4096;
/// Hard ceiling on the ramification degree.
pub const MAX_DEGREE: usize = 1 << 14;

/// The totally ramified extension `K_N = Q_p(ζ)` with `ζ` a primitive
/// `p^N`-th root of unity, presented by the Eisenstein polynomial
/// `E(T) = Φ_{p^N}(T + 1)` in the uniformizer `π = ζ - 1`.
pub struct CyclotomicField<I: ResidueInt> {
    p: u64,
    n: u32,
    e: usize,
    precision: u32,
    eisenstein: Vec<BigInt>,
    modulus: I,
    p_res: I,
    /// `E` coefficients `a_0..a_{e-1}` reduced mod `p^W`.
    eis_low: Vec<I>,
    /// `p^k mod p^W`, `k = 0..=W`.
    p_powers: Vec<I>,
}

impl<I: ResidueInt> CyclotomicField<I> {
    pub fn new(p: u64, n: u32, precision: u32) -> Result<Arc<Self>, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if n < 1 {
            return Err(PadicError::InvalidParameter("N must be at least 1".into()));
        }
        if precision < 1 {
            return Err(PadicError::InvalidParameter("precision must be at least 1".into()));
        }
        let max = I::max_digits(p).unwrap_or(MAX_PRECISION).min(MAX_PRECISION);
        if precision > max {
            return Err(PadicError::PrecisionOverflow {
                requested: precision,
                max,
            });
        }
        let e = ramification_degree(p, n).ok_or_else(|| {
            PadicError::InvalidParameter(format!("p^(N-1)(p-1) too large for p={p}, N={n}"))
        })?;
        let eisenstein = eisenstein_polynomial(p, n);
        debug_assert_eq!(eisenstein.len(), e + 1);

        let modulus = I::pow_u32(&I::of_u64(p), precision);
        let big_mod = modulus.to_bigint();
        let eis_low = eisenstein[..e]
            .iter()
            .map(|c| I::from_bigint(&c.mod_floor(&big_mod)).expect("reduced below modulus"))
            .collect();
        let mut p_powers = Vec::with_capacity(precision as usize + 1);
        let mut acc = I::one();
        for _ in 0..=precision {
            p_powers.push(acc.reduce(&modulus));
            acc = acc * I::of_u64(p);
        }
        Ok(Arc::new(CyclotomicField {
            p,
            n,
            e,
            precision,
            eisenstein,
            modulus,
            p_res: I::of_u64(p),
            eis_low,
            p_powers,
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Exponent `N` of the root of unity `ζ`.
    pub fn level(&self) -> u32 {
        self.n
    }

    /// Ramification degree `e = p^(N-1)(p-1)`; `v(π) = 1/e`.
    pub fn degree(&self) -> usize {
        self.e
    }

    /// Relative working precision `W` in p-digits.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Order `p^N` of `ζ`.
    pub fn root_order(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// Exact integer coefficients of `E(T)`, constant term first.
    pub fn eisenstein(&self) -> &[BigInt] {
        &self.eisenstein
    }

    pub(crate) fn modulus(&self) -> &I {
        &self.modulus
    }

    pub(crate) fn p_res(&self) -> &I {
        &self.p_res
    }

    pub(crate) fn eis_low(&self) -> &[I] {
        &self.eis_low
    }

    /// `p^k` reduced mod `p^W`; zero once `k >= W`.
    pub(crate) fn p_power(&self, k: i64) -> I {
        if k < 0 {
            panic!("negative power of p requested from the residue table");
        }
        self.p_powers
            .get(k as usize)
            .cloned()
            .unwrap_or_else(I::zero)
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.precision == other.precision
    }
}

impl<I: ResidueInt> fmt::Debug for CyclotomicField<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CyclotomicField")
            .field("p", &self.p)
            .field("N", &self.n)
            .field("e", &self.e)
            .field("precision", &self.precision)
            .finish()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn ramification_degree(p: u64, n: u32) -> Option<usize> {
    let e = p.checked_pow(n - 1)?.checked_mul(p - 1)?;
    let e = usize::try_from(e).ok()?;
    (e <= MAX_DEGREE).then_some(e)
}

/// `Φ_{p^N}(T + 1) = Σ_{j<p} (T + 1)^{j p^{N-1}}`, constant term first.
pub fn eisenstein_polynomial(p: u64, n: u32) -> Vec<BigInt> {
    let step = p.pow(n - 1) as usize;
    let e = step * (p as usize - 1);
    let mut out = vec![BigInt::zero(); e + 1];
    // binomial rows of (T+1)^{j*step}, built incrementally
    for j in 0..p as usize {
        let m = j * step;
        let mut c = BigInt::one();
        for (i, slot) in out.iter_mut().enumerate().take(m + 1) {
            *slot += &c;
            c = c * BigInt::from(m - i) / BigInt::from(i + 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_eisenstein_polynomials() {
        // Φ_2(T+1) = T + 2
        assert_eq!(eisenstein_polynomial(2, 1), ints(&[2, 1]));
        // Φ_4(T+1) = (T+1)^2 + 1
        assert_eq!(eisenstein_polynomial(2, 2), ints(&[2, 2, 1]));
        // Φ_3(T+1) = T^2 + 3T + 3
        assert_eq!(eisenstein_polynomial(3, 1), ints(&[3, 3, 1]));
    }

    #[test]
    fn eisenstein_criterion_holds() {
        for (p, n) in [(2, 3), (3, 2), (5, 2), (7, 1), (2, 6)] {
            let e = eisenstein_polynomial(p, n);
            let pb = BigInt::from(p);
            assert_eq!(e.len() as u64, p.pow(n - 1) * (p - 1) + 1);
            assert!(e.last().unwrap().is_one());
            for c in &e[..e.len() - 1] {
                assert!(c.is_multiple_of(&pb));
            }
            assert!(!e[0].is_multiple_of(&(&pb * &pb)));
            // constant term is Φ_{p^N}(1) = p
            assert_eq!(e[0], pb);
        }
    }

    #[test]
    fn field_construction_errors() {
        assert!(matches!(
            CyclotomicField::<i128>::new(4, 1, 10),
            Err(PadicError::NotPrime(4))
        ));
        assert!(matches!(
            CyclotomicField::<i128>::new(5, 1, 64),
            Err(PadicError::PrecisionOverflow { max: 26, .. })
        ));
        assert!(CyclotomicField::<BigInt>::new(5, 1, 64).is_ok());
        assert!(CyclotomicField::<BigInt>::new(2, 1, MAX_PRECISION + 1).is_err());
        assert!(CyclotomicField::<BigInt>::new(2, 0, 8).is_err());
    }

    #[test]
    fn degree_matches_examples() {
        let f = CyclotomicField::<BigInt>::new(3, 2, 32).unwrap();
        assert_eq!(f.degree(), 6);
        assert_eq!(f.eisenstein()[0], BigInt::from(3));
        let f = CyclotomicField::<BigInt>::new(2, 2, 32).unwrap();
        assert_eq!(f.degree(), 2);
    }
}
