use num_traits::Zero;

use super::symplectic::{inverse, mat_mul, transpose, Matrix};
use super::{
    heisenberg_act, AdditiveCharacter, HeisenbergElement, SchwartzError, SchwartzFunction,
    SymplecticMatrix,
};
use crate::padic::CycloElement;
use crate::rational::{p_pow_q, vp, ValuationQ, Q};
use crate::scalar::ResidueInt;

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// Least valuation among the nonzero entries.
fn min_valuation<'a>(xs: impl IntoIterator<Item = &'a Q>, p: u64) -> Option<i64> {
    xs.into_iter().filter_map(|x| vp(x, p)).min()
}

fn ceil_half(x: i64) -> i64 {
    x.div_euclid(2) + x.rem_euclid(2)
}

fn check_dim(expected: usize, found: usize) -> Result<(), SchwartzError> {
    if expected == found {
        Ok(())
    } else {
        Err(SchwartzError::Dimension { expected, found })
    }
}

/// `F f (x) = ∫ ψ(x·t) f(t) dt` with `μ(Z_p^d) = 1`.
///
/// Support and level exponents swap, each shifted by `v(c)` for the
/// character scale `c`.
pub fn fourier<I: ResidueInt>(
    f: &SchwartzFunction<I>,
    psi: &AdditiveCharacter<I>,
) -> Result<SchwartzFunction<I>, SchwartzError> {
    if f.is_zero() {
        return Ok(f.clone());
    }
    let d = f.dim();
    let p = f.field().p();
    let (m, n) = (f.support_exponent(), f.level_exponent());
    let vc = psi.scale_valuation();
    let terms: Vec<(Vec<Q>, CycloElement<I>)> = f
        .coset_representatives()
        .into_iter()
        .zip(f.table())
        .filter(|(_, v)| !v.is_zero())
        .map(|(x, v)| (x, v.clone()))
        .collect();
    let measure = CycloElement::from_rational(f.field(), &p_pow_q(p, -n * d as i64));
    SchwartzFunction::tabulate(psi, d, n + vc, m - vc, |x| {
        let mut acc = CycloElement::zero(f.field());
        for (t, v) in &terms {
            let arg: Q = x.iter().zip(t).map(|(a, b)| a * b).sum();
            acc = &acc + &(&psi.eval(&arg)? * v);
        }
        Ok(&acc * &measure)
    })
}

/// Multiplication by `ψ(½ x S xᵗ)` for symmetric `S`.
pub fn chirp<I: ResidueInt>(
    f: &SchwartzFunction<I>,
    s: &Matrix,
    psi: &AdditiveCharacter<I>,
) -> Result<SchwartzFunction<I>, SchwartzError> {
    let d = f.dim();
    check_dim(d, s.len())?;
    let p = f.field().p();
    let Some(vs) = min_valuation(s.iter().flatten(), p) else {
        return Ok(f.clone());
    };
    if f.is_zero() {
        return Ok(f.clone());
    }
    let vc = psi.scale_valuation();
    let vhalf = vs + if p == 2 { -1 } else { 0 };
    let m = f.support_exponent();
    let n = f
        .level_exponent()
        .max(m - vs - vc)
        .max(ceil_half(-vhalf - vc));
    SchwartzFunction::tabulate(psi, d, m, n, |x| {
        let val = f.eval(x);
        if val.is_zero() {
            return Ok(val);
        }
        let mut q = Q::zero();
        for (i, row) in s.iter().enumerate() {
            for (j, sij) in row.iter().enumerate() {
                q += &x[i] * sij * &x[j];
            }
        }
        Ok(&psi.eval(&(q * half()))? * &val)
    })
}

/// `x ↦ f(x A)` for invertible `A`.
pub fn linear_change<I: ResidueInt>(
    f: &SchwartzFunction<I>,
    a: &Matrix,
    psi: &AdditiveCharacter<I>,
) -> Result<SchwartzFunction<I>, SchwartzError> {
    let d = f.dim();
    check_dim(d, a.len())?;
    let inv = inverse(a).ok_or_else(|| SchwartzError::Unsupported("singular matrix".into()))?;
    if f.is_zero() {
        return Ok(f.clone());
    }
    let p = f.field().p();
    let m = f.support_exponent() - min_valuation(inv.iter().flatten(), p).expect("invertible");
    let n = f.level_exponent() - min_valuation(a.iter().flatten(), p).expect("invertible");
    SchwartzFunction::tabulate(psi, d, m, n, |x| {
        let y: Vec<Q> = (0..d)
            .map(|j| x.iter().zip(a).map(|(xi, row)| xi * &row[j]).sum())
            .collect();
        Ok(f.eval(&y))
    })
}

fn scalar_matrix(x: Q) -> Matrix {
    vec![vec![x]]
}

/// The intertwining operator `T_g`, normalized by `μ(Z_p) = 1`, with
/// `ρ(h) ∘ T_g = T_g ∘ ρ([w g, t])`.
///
/// * block `c = 0`: `T_g f (x) = ψ(½ x (a bᵗ) xᵗ) f(x a)`;
/// * `d = 1`, `c ≠ 0`: `T_g f (x) = ∫ ψ(½ab x² + b x y + ½(d/c) y²) f(xa + y) dy`,
///   evaluated as chirp, Fourier transform, dilation and chirp;
/// * `d > 1`, `g = J`: the Fourier transform.
pub fn intertwine<I: ResidueInt>(
    g: &SymplecticMatrix,
    f: &SchwartzFunction<I>,
    psi: &AdditiveCharacter<I>,
) -> Result<SchwartzFunction<I>, SchwartzError> {
    let d = f.dim();
    check_dim(d, g.dim())?;
    let c = g.c();
    if c.iter().flatten().all(|x| x.is_zero()) {
        let a = g.a();
        let s = mat_mul(&a, &transpose(&g.b()));
        return chirp(&linear_change(f, &a, psi)?, &s, psi);
    }
    if d == 1 {
        let (a, c, dd) = (&g.a()[0][0], &c[0][0], &g.d_block()[0][0]);
        let phi = chirp(f, &scalar_matrix(dd / c), psi)?;
        let hat = fourier(&phi, psi)?;
        let dil = linear_change(&hat, &scalar_matrix(-c.recip()), psi)?;
        return chirp(&dil, &scalar_matrix(a / c), psi);
    }
    if *g == SymplecticMatrix::j(d) {
        return fourier(f, psi);
    }
    Err(SchwartzError::Unsupported(
        "for d > 1 only block c = 0 and J are supported".into(),
    ))
}

/// Compare `ρ(h)(T_g f)` with `T_g(ρ([w g, t]) f)`.
pub fn check_intertwining<I: ResidueInt>(
    g: &SymplecticMatrix,
    h: &HeisenbergElement,
    f: &SchwartzFunction<I>,
    psi: &AdditiveCharacter<I>,
) -> Result<bool, SchwartzError> {
    let lhs = heisenberg_act(h, &intertwine(g, f, psi)?, psi)?;
    let rhs = intertwine(g, &heisenberg_act(&h.transform(g), f, psi)?, psi)?;
    Ok(lhs.eq_at_precision(&rhs))
}

/// `T_g` applied to `f_n = 1_{p^n Z_p^d}`.
#[derive(Clone, Debug)]
pub struct NormGrowth<I: ResidueInt> {
    pub n: i64,
    pub value_at_zero: CycloElement<I>,
    pub valuation_at_zero: ValuationQ,
    pub sup_norm: ValuationQ,
    pub input_sup_norm: ValuationQ,
}

pub fn norm_growth_family<I: ResidueInt>(
    g: &SymplecticMatrix,
    n: i64,
    psi: &AdditiveCharacter<I>,
) -> Result<NormGrowth<I>, SchwartzError> {
    let d = g.dim();
    let fnn = SchwartzFunction::indicator(psi.field(), d, n, &vec![Q::zero(); d])?;
    let t = intertwine(g, &fnn, psi)?;
    let value = t.eval(&vec![Q::zero(); d]);
    Ok(NormGrowth {
        n,
        valuation_at_zero: value.valuation(),
        value_at_zero: value,
        sup_norm: t.sup_norm(),
        input_sup_norm: fnn.sup_norm(),
    })
}


/// [`intertwine`] restricted to `d = 1`.
pub fn intertwine_sl2<I: ResidueInt>(
    g: &SymplecticMatrix,
    f: &SchwartzFunction<I>,
    psi: &AdditiveCharacter<I>,
) -> Result<SchwartzFunction<I>, SchwartzError> {
    check_dim(1, g.dim())?;
    intertwine(g, f, psi)
}
