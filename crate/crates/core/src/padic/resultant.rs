//! Valuations through the norm map: `v(a) = v_p(Res(E, A)) / e`.
//!
//! Shares nothing with the π-basis valuation routine beyond the integer
//! coefficients themselves, so it serves as an independent check.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{CycloElement, PadicError};
use crate::rational::{ValuationQ, Q};
use crate::scalar::ResidueInt;

/// Largest modulus exponent tried before giving up.
const MAX_DIGITS: u32 = 1 << 12;

/// `v(a)` from the p-adic valuation of `Res(E(T), A(T))`, where
/// `a = p^shift · A(π)`. An element that is zero at precision maps to `+∞`.
pub fn valuation_by_resultant<I: ResidueInt>(
    a: &CycloElement<I>,
) -> Result<ValuationQ, PadicError> {
    if a.is_zero() {
        return Ok(ValuationQ::Infinity);
    }
    let f = a.field();
    let p = f.p();
    let e = f.degree() as i64;
    let (shift, mut poly) = a.to_pi_poly_integers();
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    let m = sylvester(f.eisenstein(), &poly);
    let v = res_valuation(&m, p)?;
    Ok(ValuationQ::Finite(Q::new(
        BigInt::from(shift * e + v),
        BigInt::from(e),
    )))
}

fn res_valuation(m: &[Vec<BigInt>], p: u64) -> Result<i64, PadicError> {
    // cheapest backend first; a wider one only after exhausting the digits
    let k64 = <i64 as ResidueInt>::max_digits(p).unwrap_or(1);
    if let Some(v) = det_valuation::<i64>(m, p, k64) {
        return Ok(v);
    }
    let k128 = <i128 as ResidueInt>::max_digits(p).unwrap_or(1);
    if let Some(v) = det_valuation::<i128>(m, p, k128) {
        return Ok(v);
    }
    let mut k = 2 * k128.max(1);
    while k <= MAX_DIGITS {
        if let Some(v) = det_valuation::<BigInt>(m, p, k) {
            return Ok(v);
        }
        k *= 2;
    }
    Err(PadicError::ResultantPrecision { digits: MAX_DIGITS })
}

/// Sylvester matrix of `e(T)` (degree `de`) and `a(T)` (degree `da`),
/// coefficients ascending; `de + da` square.
fn sylvester(e: &[BigInt], a: &[BigInt]) -> Vec<Vec<BigInt>> {
    let de = e.len() - 1;
    let da = a.len() - 1;
    let n = de + da;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..da {
        for (j, c) in e.iter().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..de {
        for (j, c) in a.iter().enumerate() {
            m[da + i][i + j] = c.clone();
        }
    }
    m
}

/// `v_p(det m)` by elimination modulo `p^k` with full pivoting on the entry
/// of least valuation. Every step is exact modulo `p^k`; `None` means the
/// remaining block vanished modulo `p^k`.
fn det_valuation<J: ResidueInt>(m: &[Vec<BigInt>], p: u64, k: u32) -> Option<i64> {
    let n = m.len();
    if n == 0 {
        return Some(0);
    }
    let pj = J::of_u64(p);
    let modulus = J::pow_u32(&pj, k);
    let big_mod = modulus.to_bigint();
    let mut a: Vec<Vec<J>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| J::from_bigint(&num_integer::Integer::mod_floor(c, &big_mod)).unwrap())
                .collect()
        })
        .collect();
    let mut total = 0i64;
    for s in 0..n {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for (r, row) in a.iter().enumerate().skip(s) {
            for (c, x) in row.iter().enumerate().skip(s) {
                if let Some((_, v)) = x.p_split(&pj) {
                    if best.is_none_or(|(_, _, bv)| v < bv) {
                        best = Some((r, c, v));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let (r, c, v) = best?;
        a.swap(s, r);
        for row in a.iter_mut() {
            row.swap(s, c);
        }
        total += v as i64;
        let pv = J::pow_u32(&pj, v);
        let unit = a[s][s].clone() / pv.clone();
        let uinv = unit.inv_mod(&modulus).expect("unit mod p^k");
        let (top, rest) = a.split_at_mut(s + 1);
        let pivot_row = &top[s];
        for row in rest.iter_mut() {
            if row[s].is_zero() {
                continue;
            }
            let factor = (row[s].clone() / pv.clone()).mul_mod(&uinv, &modulus);
            for c in s + 1..n {
                if pivot_row[c].is_zero() {
                    continue;
                }
                let t = factor.mul_mod(&pivot_row[c], &modulus);
                row[c] = row[c].sub_mod(&t, &modulus);
            }
        }
    }
    Some(total)
}
