//! Integer backends for p-adic residues.
//!
//! Every p-adic quantity in this crate is ultimately a vector of integers
//! reduced modulo some power of `p`. The kernel is written once against
//! [`ResidueInt`]; `i128` gives a fast fixed-width path for moderate
//! precision, `i64` a narrower one for small moduli, and [`BigInt`] removes the precision ceiling.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Integer type usable as a residue modulo `p^W`.
///
/// Values handed to the `*_mod` methods are always reduced into `[0, m)`.
pub trait ResidueInt:
    Clone + Debug + Display + PartialEq + Eq + Ord + Send + Sync + 'static
    + Integer + Signed + FromPrimitive + ToPrimitive
{
    /// Largest `W` with `p^W` small enough that products of two residues
    /// cannot overflow. `None` means unbounded.
    fn max_digits(p: u64) -> Option<u32>;

    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;

    fn add_mod(&self, other: &Self, m: &Self) -> Self;
    fn sub_mod(&self, other: &Self, m: &Self) -> Self;
    fn mul_mod(&self, other: &Self, m: &Self) -> Self;

    /// Reduce an arbitrary (possibly negative) value into `[0, m)`.
    fn reduce(&self, m: &Self) -> Self {
        self.mod_floor(m)
    }

    fn of_u64(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("u64 fits every residue backend")
    }

    fn pow_u32(base: &Self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * base.clone();
        }
        acc
    }

    /// `(self, k)` with `self = p^k * rest`, `p ∤ rest`. Zero returns `None`.
    fn p_split(&self, p: &Self) -> Option<(Self, u32)> {
        if self.is_zero() {
            return None;
        }
        let mut rest = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = rest.div_rem(p);
            if !r.is_zero() {
                return Some((rest, k));
            }
            rest = q;
            k += 1;
        }
    }

    /// Inverse modulo `m`; `None` if not invertible.
    fn inv_mod(&self, m: &Self) -> Option<Self> {
        let g = self.reduce(m).extended_gcd(m);
        if !g.gcd.is_one() {
            return None;
        }
        Some(g.x.reduce(m))
    }
}

impl ResidueInt for i128 {
    fn max_digits(p: u64) -> Option<u32> {
        // residues < 2^62 keep every product below 2^124
        let mut k = 0u32;
        let mut acc: u128 = 1;
        while acc * (p as u128) <= (1u128 << 62) {
            acc *= p as u128;
            k += 1;
        }
        Some(k)
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    #[inline]
    fn add_mod(&self, other: &Self, m: &Self) -> Self {
        let s = self + other;
        if s >= *m {
            s - m
        } else {
            s
        }
    }

    #[inline]
    fn sub_mod(&self, other: &Self, m: &Self) -> Self {
        let s = self - other;
        if s < 0 {
            s + m
        } else {
            s
        }
    }

    #[inline]
    fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        (self * other) % m
    }

    fn pow_u32(base: &Self, exp: u32) -> Self {
        base.pow(exp)
    }
}

impl ResidueInt for i64 {
    fn max_digits(p: u64) -> Option<u32> {
        // residues < 2^31 keep every product below 2^62
        let mut k = 0u32;
        let mut acc: u64 = 1;
        while acc * p <= (1u64 << 31) {
            acc *= p;
            k += 1;
        }
        Some(k)
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    #[inline]
    fn add_mod(&self, other: &Self, m: &Self) -> Self {
        let s = self + other;
        if s >= *m {
            s - m
        } else {
            s
        }
    }

    #[inline]
    fn sub_mod(&self, other: &Self, m: &Self) -> Self {
        let s = self - other;
        if s < 0 {
            s + m
        } else {
            s
        }
    }

    #[inline]
    fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        (self * other) % m
    }

    fn pow_u32(base: &Self, exp: u32) -> Self {
        base.pow(exp)
    }
}

impl ResidueInt for BigInt {
    fn max_digits(_p: u64) -> Option<u32> {
        None
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn add_mod(&self, other: &Self, m: &Self) -> Self {
        let s = self + other;
        if &s >= m {
            s - m
        } else {
            s
        }
    }

    fn sub_mod(&self, other: &Self, m: &Self) -> Self {
        let s = self - other;
        if s.is_negative() {
            s + m
        } else {
            s
        }
    }

    fn mul_mod(&self, other: &Self, m: &Self) -> Self {
        (self * other) % m
    }

    fn pow_u32(base: &Self, exp: u32) -> Self {
        num_traits::pow(base.clone(), exp as usize)
    }
}
