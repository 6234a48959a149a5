//! Seeded random functions, group elements and matrices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;

use super::{HeisenbergElement, SchwartzFunction, SymplecticMatrix};
use crate::padic::{CycloElement, CyclotomicField};
use crate::rational::{p_pow_q, Q};
use crate::scalar::ResidueInt;

/// `± p^v · a / b` with `a, b` prime to `p`, `v` uniform in `vmin..=vmax`.
pub fn rational<R: Rng>(rng: &mut R, p: u64, vmin: i64, vmax: i64) -> Q {
    let unit = |rng: &mut R| loop {
        let a: u64 = rng.gen_range(1..40);
        if !a.is_multiple_of(p) {
            return a;
        }
    };
    let a = unit(rng);
    let b = if rng.gen_bool(0.3) { unit(rng) } else { 1 };
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let v = rng.gen_range(vmin..=vmax);
    let g = a.gcd(&b);
    Q::new(BigInt::from(sign * (a / g) as i64), BigInt::from(b / g)) * p_pow_q(p, v)
}

/// Same, or zero with probability `zero_prob`.
pub fn rational_or_zero<R: Rng>(rng: &mut R, p: u64, vmin: i64, vmax: i64, zero_prob: f64) -> Q {
    if rng.gen_bool(zero_prob) {
        Q::from_integer(0.into())
    } else {
        rational(rng, p, vmin, vmax)
    }
}

/// Small integer combination of the first few powers of `ζ`.
pub fn element<I: ResidueInt, R: Rng>(rng: &mut R, field: &Arc<CyclotomicField<I>>) -> CycloElement<I> {
    let poly: Vec<BigInt> = (0..3).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
    CycloElement::from_zeta_poly(field, &poly)
}

/// Random function whose grid has `m + n <= max_side` and
/// `-1 <= m <= 2`. About a third of the entries are zero.
pub fn function<I: ResidueInt, R: Rng>(
    rng: &mut R,
    field: &Arc<CyclotomicField<I>>,
    d: usize,
    max_side: i64,
) -> SchwartzFunction<I> {
    let m = rng.gen_range(-1i64..=2).min(max_side);
    let side = rng.gen_range(0..=max_side);
    let n = side - m;
    let len = (field.p() as usize).pow((side * d as i64) as u32);
    let table = (0..len)
        .map(|_| {
            if rng.gen_bool(0.33) {
                CycloElement::zero(field)
            } else {
                element(rng, field)
            }
        })
        .collect();
    SchwartzFunction::from_table(field, d, m, n, table)
}

/// `[(a, b), t]` with nonzero coordinates of valuation in `vmin..=vmax`.
pub fn heisenberg<R: Rng>(rng: &mut R, p: u64, d: usize, vmin: i64, vmax: i64) -> HeisenbergElement {
    let coord = |rng: &mut R| rational_or_zero(rng, p, vmin, vmax, 0.25);
    let a = (0..d).map(|_| coord(rng)).collect();
    let b = (0..d).map(|_| coord(rng)).collect();
    let t = coord(rng);
    HeisenbergElement { a, b, t }
}

/// Product of one to three generators of `SL_2(Q_p)`: unipotents,
/// diagonals and `J`, with entries of valuation in `vmin..=vmax`.
pub fn sl2<R: Rng>(rng: &mut R, p: u64, vmin: i64, vmax: i64) -> SymplecticMatrix {
    let count = rng.gen_range(1..=3);
    let mut g = SymplecticMatrix::identity(1);
    for _ in 0..count {
        let x = rational(rng, p, vmin, vmax);
        let gen = match rng.gen_range(0..4) {
            0 => SymplecticMatrix::upper(&x),
            1 => SymplecticMatrix::lower(&x),
            2 => SymplecticMatrix::diagonal(&x).expect("nonzero"),
            _ => SymplecticMatrix::j(1),
        };
        g = g.mul(&gen);
    }
    g
}
