use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{CyclotomicField, PadicError, PadicScalar};
use crate::rational::{p_pow_q, residue_mod_pk, vp, Q, ValuationQ};
use crate::scalar::ResidueInt;

/// Precision marker of an exact zero.
pub(crate) const EXACT: i64 = i64::MAX / 4;

/// Element of `K_N`, written `p^shift · Σ c_i π^i` with `0 <= c_i < p^W`,
/// known modulo `π^prec` (`prec` counted in units of `v(π) = 1/e`).
///
/// Canonical form: digits at or beyond the precision are cleared, and a
/// nonzero element has some `c_i` prime to `p`. Two elements that agree at
/// a precision therefore have identical coefficient vectors there.
#[derive(Clone)]
pub struct CycloElement<I: ResidueInt> {
    field: Arc<CyclotomicField<I>>,
    shift: i64,
    coeffs: Vec<I>,
    prec: i64,
    /// Valuation in π-units; `None` when zero at precision.
    val: Option<i64>,
}

impl<I: ResidueInt> CycloElement<I> {
    // ----- construction --------------------------------------------------

    /// Exact zero.
    pub fn zero(field: &Arc<CyclotomicField<I>>) -> Self {
        Self::zero_at(field, EXACT)
    }

    /// Zero known only modulo `π^prec`.
    pub fn zero_at(field: &Arc<CyclotomicField<I>>, prec: i64) -> Self {
        CycloElement {
            field: field.clone(),
            shift: 0,
            coeffs: vec![I::zero(); field.degree()],
            prec,
            val: None,
        }
    }

    pub fn one(field: &Arc<CyclotomicField<I>>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CyclotomicField<I>>, n: i64) -> Self {
        Self::from_rational(field, &Q::from_integer(BigInt::from(n)))
    }

    /// Image of a rational number; the prime-to-p part of the denominator
    /// is inverted p-adically.
    pub fn from_rational(field: &Arc<CyclotomicField<I>>, x: &Q) -> Self {
        let Some(v) = vp(x, field.p()) else {
            return Self::zero(field);
        };
        let unit = x / p_pow_q(field.p(), v);
        let r = residue_mod_pk(&unit, field.p(), field.precision());
        let mut coeffs = vec![I::zero(); field.degree()];
        coeffs[0] = I::from_bigint(&r).expect("residue below modulus");
        let e = field.degree() as i64;
        Self::build(field.clone(), v, coeffs, e * (v + field.precision() as i64))
    }

    /// `Σ c_i π^i` for integer coefficients of any length, reduced mod `E(π)`.
    pub fn from_pi_poly(field: &Arc<CyclotomicField<I>>, poly: &[BigInt]) -> Self {
        let m = field.modulus().to_bigint();
        let mut wide: Vec<I> = poly
            .iter()
            .map(|c| I::from_bigint(&c.mod_floor(&m)).expect("reduced below modulus"))
            .collect();
        let e = field.degree();
        if wide.len() < e {
            wide.resize(e, I::zero());
        }
        reduce_mod_eisenstein(field, &mut wide);
        wide.truncate(e);
        let cap = e as i64 * field.precision() as i64;
        Self::build(field.clone(), 0, wide, cap)
    }

    /// `Σ b_j ζ^j` (the power-of-ζ basis).
    pub fn from_zeta_poly(field: &Arc<CyclotomicField<I>>, poly: &[BigInt]) -> Self {
        let zeta = Self::zeta(field);
        let mut acc = Self::zero(field);
        for b in poly.iter().rev() {
            acc = &(&acc * &zeta) + &Self::from_rational(field, &Q::from_integer(b.clone()));
        }
        acc
    }

    /// Uniformizer `π = ζ - 1`.
    pub fn pi(field: &Arc<CyclotomicField<I>>) -> Self {
        Self::from_pi_poly(field, &[BigInt::zero(), BigInt::one()])
    }

    /// The primitive `p^N`-th root of unity `ζ = 1 + π`.
    pub fn zeta(field: &Arc<CyclotomicField<I>>) -> Self {
        Self::from_pi_poly(field, &[BigInt::one(), BigInt::one()])
    }

    /// `π^k`, `k >= 0`.
    pub fn pi_pow(field: &Arc<CyclotomicField<I>>, k: u64) -> Self {
        Self::pi(field).pow(k)
    }

    /// `p^shift · Σ c_i π^i` known modulo `π^prec` (`None`: exact up to the
    /// working precision). Coefficients beyond degree `e - 1` are folded in.
    pub fn from_raw_parts(
        field: &Arc<CyclotomicField<I>>,
        shift: i64,
        coeffs: &[BigInt],
        prec: Option<i64>,
    ) -> Self {
        let base = Self::from_pi_poly(field, coeffs);
        let scaled = &base * &Self::from_rational(field, &p_pow_q(field.p(), shift));
        match prec {
            Some(pr) => scaled.with_precision_at_most(pr),
            None => scaled,
        }
    }

    /// Normalize raw parts into canonical form.
    fn build(field: Arc<CyclotomicField<I>>, shift: i64, mut coeffs: Vec<I>, prec: i64) -> Self {
        let e = field.degree() as i64;
        let w = field.precision() as i64;
        let p = field.p_res().clone();
        // clear digits at or beyond the precision
        if prec < EXACT {
            for (i, c) in coeffs.iter_mut().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let keep = cdiv(prec - i as i64, e) - shift;
                if keep <= 0 {
                    *c = I::zero();
                } else if keep < w {
                    *c = c.reduce(&field.p_power(keep));
                }
            }
        }
        let min_vp = coeffs
            .iter()
            .filter_map(|c| c.p_split(&p).map(|(_, k)| k))
            .min();
        let Some(t) = min_vp else {
            return CycloElement {
                field,
                shift: 0,
                coeffs,
                prec,
                val: None,
            };
        };
        let mut shift = shift;
        if t > 0 {
            let d = field.p_power(t as i64);
            for c in coeffs.iter_mut() {
                *c = c.div_floor(&d);
            }
            shift += t as i64;
        }
        let val = coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.p_split(&p).map(|(_, k)| e * (shift + k as i64) + i as i64))
            .min();
        CycloElement {
            field,
            shift,
            coeffs,
            prec,
            val,
        }
    }

    // ----- accessors -----------------------------------------------------

    pub fn field(&self) -> &Arc<CyclotomicField<I>> {
        &self.field
    }

    /// Common power of `p` factored out of the coefficients.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Raw residues `c_i` (the element is `p^shift Σ c_i π^i`).
    pub fn raw_coeffs(&self) -> &[I] {
        &self.coeffs
    }

    /// Absolute precision in π-units; `None` for an exact zero.
    pub fn precision_pi(&self) -> Option<i64> {
        (self.prec < EXACT).then_some(self.prec)
    }

    /// Absolute precision as a rational number of p-digits.
    pub fn precision(&self) -> ValuationQ {
        match self.precision_pi() {
            Some(pr) => ValuationQ::Finite(Q::new(
                BigInt::from(pr),
                BigInt::from(self.field.degree()),
            )),
            None => ValuationQ::Infinity,
        }
    }

    /// True when every coefficient vanishes at the tracked precision.
    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.val.is_none() && self.prec >= EXACT
    }

    /// Valuation in π-units; `None` when zero at precision.
    pub fn valuation_pi(&self) -> Option<i64> {
        self.val
    }

    /// `min_i (v_p(c_i) + i/e)` as an exact rational. `Infinity` flags an
    /// element that is zero at its precision, not a proven zero.
    pub fn valuation(&self) -> ValuationQ {
        match self.val {
            Some(w) => ValuationQ::Finite(Q::new(
                BigInt::from(w),
                BigInt::from(self.field.degree()),
            )),
            None => ValuationQ::Infinity,
        }
    }

    /// Valuation, or an error when the element is zero at precision.
    pub fn valuation_checked(&self) -> Result<Q, PadicError> {
        match self.valuation() {
            ValuationQ::Finite(v) => Ok(v),
            ValuationQ::Infinity => Err(PadicError::ZeroAtPrecision {
                precision: self.precision(),
            }),
        }
    }

    /// Coefficient of `π^i` as a p-adic scalar.
    pub fn coefficient(&self, i: usize) -> PadicScalar {
        let e = self.field.degree() as i64;
        let digits = if self.prec >= EXACT {
            None
        } else {
            Some(cdiv(self.prec - i as i64, e))
        };
        let c = self.coeffs[i].to_bigint();
        PadicScalar::from_parts(self.field.p(), self.shift, &c, digits)
    }

    /// Exact rational representative of each coefficient.
    pub fn coeffs_rational(&self) -> Vec<Q> {
        let scale = p_pow_q(self.field.p(), self.shift);
        self.coeffs
            .iter()
            .map(|c| Q::from_integer(c.to_bigint()) * &scale)
            .collect()
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field.same_as(&other.field)
    }

    /// Equality modulo the smaller of the two precisions.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Lower the precision to `prec` (π-units) if it is currently higher.
    pub fn with_precision_at_most(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::build(self.field.clone(), self.shift, self.coeffs.clone(), prec)
    }

    // ----- arithmetic ----------------------------------------------------

    pub fn try_add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_field(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn check_field(&self, other: &Self) -> Result<(), PadicError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(PadicError::FieldMismatch)
        }
    }

    fn neg_ref(&self) -> Self {
        let m = self.field.modulus();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| if c.is_zero() { I::zero() } else { m.clone() - c.clone() })
            .collect();
        Self::build(self.field.clone(), self.shift, coeffs, self.prec)
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.with_precision_at_most(self.prec);
        }
        if other.is_zero() {
            return self.with_precision_at_most(other.prec);
        }
        let f = &self.field;
        let e = f.degree() as i64;
        let w = f.precision() as i64;
        let m = f.modulus();
        let s = self.shift.min(other.shift);
        let scale = |x: &Self| -> Vec<I> {
            let d = x.shift - s;
            if d == 0 {
                return x.coeffs.clone();
            }
            let k = f.p_power(d);
            x.coeffs.iter().map(|c| c.mul_mod(&k, m)).collect()
        };
        let (a, b) = (scale(self), scale(other));
        let coeffs = a.iter().zip(&b).map(|(x, y)| x.add_mod(y, m)).collect();
        let prec = self.prec.min(other.prec).min(e * (s + w));
        Self::build(f.clone(), s, coeffs, prec)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let f = &self.field;
        let e = f.degree() as i64;
        let w = f.precision() as i64;
        let wa = self.val.unwrap_or(self.prec);
        let wb = other.val.unwrap_or(other.prec);
        let bound = self.prec.saturating_add(wb).min(other.prec.saturating_add(wa));
        if self.is_zero() || other.is_zero() {
            return Self::zero_at(f, bound.min(EXACT));
        }
        let m = f.modulus();
        let n = f.degree();
        let mut wide = vec![I::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a.mul_mod(b, m);
                wide[i + j] = wide[i + j].add_mod(&t, m);
            }
        }
        reduce_mod_eisenstein(f, &mut wide);
        wide.truncate(n);
        let shift = self.shift + other.shift;
        let prec = bound.min(e * (shift + w));
        Self::build(f.clone(), shift, wide, prec)
    }

    /// `self · π`, linear in the degree.
    pub fn mul_pi(&self) -> Self {
        if self.is_zero() {
            return Self::zero_at(&self.field, self.prec.saturating_add(1).min(EXACT));
        }
        let f = &self.field;
        let e = f.degree();
        let mut wide = Vec::with_capacity(e + 1);
        wide.push(I::zero());
        wide.extend(self.coeffs.iter().cloned());
        reduce_mod_eisenstein(f, &mut wide);
        wide.truncate(e);
        let prec = (self.prec + 1).min(e as i64 * (self.shift + f.precision() as i64));
        Self::build(f.clone(), self.shift, wide, prec)
    }

    /// `self · ζ = self + self · π`.
    pub fn mul_zeta(&self) -> Self {
        self.add_unchecked(&self.mul_pi())
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `self^k` for any integer `k`; negative powers invert first.
    pub fn powi(&self, k: i64) -> Result<Self, PadicError> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.invert()?.pow(k.unsigned_abs()))
        }
    }

    /// Multiplicative inverse.
    ///
    /// Writes `self · π^j = p^c · u` with `u` a unit, inverts `u` by Newton
    /// iteration and reassembles `π^j · p^{-c} · u^{-1}`.
    pub fn invert(&self) -> Result<Self, PadicError> {
        let w = self.val.ok_or(PadicError::ZeroAtPrecision {
            precision: self.precision(),
        })?;
        let f = &self.field;
        let e = f.degree() as i64;
        let c = cdiv(w, e);
        let j = (c * e - w) as u64;
        let pij = Self::pi_pow(f, j);
        let lifted = self.mul_unchecked(&pij);
        debug_assert_eq!(lifted.shift, c);
        debug_assert_eq!(lifted.val, Some(c * e));
        // the unit part, as an element with shift 0
        let unit_prec = lifted.prec - c * e;
        let unit = CycloElement {
            field: f.clone(),
            shift: 0,
            coeffs: lifted.coeffs.clone(),
            prec: unit_prec,
            val: Some(0),
        };
        let inv_unit = unit.invert_unit()?;
        let mut out = inv_unit.mul_unchecked(&pij);
        out.shift -= c;
        // relative precision of the inverse equals that of the input
        let prec = (self.prec - 2 * w).min(out.prec - c * e);
        out.prec = i64::MAX;
        Ok(Self::build(out.field.clone(), out.shift, out.coeffs, prec))
    }

    fn invert_unit(&self) -> Result<Self, PadicError> {
        let f = &self.field;
        let m = f.modulus();
        let c0_inv = self.coeffs[0]
            .inv_mod(m)
            .ok_or_else(|| PadicError::InvalidParameter("unit part not invertible".into()))?;
        let mut coeffs = vec![I::zero(); f.degree()];
        coeffs[0] = c0_inv;
        let cap = f.degree() as i64 * f.precision() as i64;
        let mut y = Self::build(f.clone(), 0, coeffs, cap);
        let two = Self::from_int(f, 2);
        let target = self.prec.min(cap);
        // error 1 - u·y lies in π^k with k doubling each round
        let mut k: i64 = 1;
        while k < target {
            let uy = self.mul_unchecked(&y);
            y = y.mul_unchecked(&two.add_unchecked(&uy.neg_ref()));
            k = k.saturating_mul(2);
        }
        Ok(y.with_precision_at_most(target))
    }

    /// `(shift, [c_0, .., c_{e-1}])` as plain integers.
    pub fn to_pi_poly_integers(&self) -> (i64, Vec<BigInt>) {
        (self.shift, self.coeffs.iter().map(|c| c.to_bigint()).collect())
    }
}

impl<I: ResidueInt> CycloElement<I> {
    /// Image under `K_N → K_{N'}`, `ζ_{p^N} ↦ ζ_{p^{N'}}^{p^{N'-N}}`.
    pub fn embed_up(&self, target: &Arc<CyclotomicField<I>>) -> Result<Self, PadicError> {
        let src = &self.field;
        if target.p() != src.p() {
            return Err(PadicError::FieldMismatch);
        }
        if target.level() < src.level() {
            return Err(PadicError::EmbedDown {
                from: src.level(),
                to: target.level(),
            });
        }
        let ratio = (target.degree() / src.degree()) as i64;
        let prec = if self.prec >= EXACT {
            EXACT
        } else {
            self.prec.saturating_mul(ratio)
        };
        if self.is_zero() {
            return Ok(Self::zero_at(target, prec));
        }
        let step = target.root_order() / src.root_order();
        let pi_src = &Self::zeta(target).pow(step) - &Self::one(target);
        let mut acc = Self::zero(target);
        for c in self.coeffs.iter().rev() {
            let c = Self::from_rational(target, &Q::from_integer(c.to_bigint()));
            acc = &(&acc * &pi_src) + &c;
        }
        let scale = Self::from_rational(target, &p_pow_q(src.p(), self.shift));
        Ok((&acc * &scale).with_precision_at_most(prec))
    }

    /// Convenience form of [`embed_up`](Self::embed_up) keeping the working
    /// precision.
    pub fn embed_up_to(&self, level: u32) -> Result<Self, PadicError> {
        let f = CyclotomicField::new(self.field.p(), level, self.field.precision())?;
        self.embed_up(&f)
    }
}

/// Fold `wide[e..]` back into `wide[..e]` using `π^e = -Σ a_k π^k`.
pub(crate) fn reduce_mod_eisenstein<I: ResidueInt>(f: &CyclotomicField<I>, wide: &mut [I]) {
    let e = f.degree();
    let m = f.modulus();
    let low = f.eis_low();
    for j in (e..wide.len()).rev() {
        let c = std::mem::replace(&mut wide[j], I::zero());
        if c.is_zero() {
            continue;
        }
        for (k, a) in low.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let t = c.mul_mod(a, m);
            let slot = &mut wide[j - e + k];
            *slot = slot.sub_mod(&t, m);
        }
    }
}

impl<I: ResidueInt> Add<&CycloElement<I>> for &CycloElement<I> {
    type Output = CycloElement<I>;
    /// Panics on a field mismatch; use [`CycloElement::try_add`] otherwise.
    fn add(self, rhs: &CycloElement<I>) -> CycloElement<I> {
        self.try_add(rhs).expect("field mismatch")
    }
}

impl<I: ResidueInt> Sub<&CycloElement<I>> for &CycloElement<I> {
    type Output = CycloElement<I>;
    fn sub(self, rhs: &CycloElement<I>) -> CycloElement<I> {
        self.try_sub(rhs).expect("field mismatch")
    }
}

impl<I: ResidueInt> Mul<&CycloElement<I>> for &CycloElement<I> {
    type Output = CycloElement<I>;
    fn mul(self, rhs: &CycloElement<I>) -> CycloElement<I> {
        self.try_mul(rhs).expect("field mismatch")
    }
}

impl<I: ResidueInt> Neg for &CycloElement<I> {
    type Output = CycloElement<I>;
    fn neg(self) -> CycloElement<I> {
        self.neg_ref()
    }
}

impl<I: ResidueInt> Add for CycloElement<I> {
    type Output = CycloElement<I>;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<I: ResidueInt> Sub for CycloElement<I> {
    type Output = CycloElement<I>;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<I: ResidueInt> Mul for CycloElement<I> {
    type Output = CycloElement<I>;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<I: ResidueInt> fmt::Debug for CycloElement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<I: ResidueInt> fmt::Display for CycloElement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*pi"),
                _ => format!("{c}*pi^{i}"),
            })
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        if self.shift != 0 && !terms.is_empty() {
            write!(f, "{}^{}*({body})", self.field.p(), self.shift)?;
        } else {
            write!(f, "{body}")?;
        }
        match self.precision_pi() {
            Some(pr) => write!(f, " + O(pi^{pr})"),
            None => Ok(()),
        }
    }
}

fn cdiv(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}
