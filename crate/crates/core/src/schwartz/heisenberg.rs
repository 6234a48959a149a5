use num_traits::Zero;

use super::{AdditiveCharacter, SchwartzError, SchwartzFunction, SymplecticMatrix};
use crate::rational::{vp, Q};
use crate::scalar::ResidueInt;

/// `[w, t]` with `w = (a, b) ∈ Q_p^{2d}` and central part `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeisenbergElement {
    pub a: Vec<Q>,
    pub b: Vec<Q>,
    pub t: Q,
}

fn dot(x: &[Q], y: &[Q]) -> Q {
    x.iter().zip(y).map(|(u, v)| u * v).sum()
}

impl HeisenbergElement {
    pub fn new(a: Vec<Q>, b: Vec<Q>, t: Q) -> Result<Self, SchwartzError> {
        if a.len() != b.len() || a.is_empty() {
            return Err(SchwartzError::Dimension {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(Self { a, b, t })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            a: vec![Q::zero(); d],
            b: vec![Q::zero(); d],
            t: Q::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `ω((a1, b1), (a2, b2)) = a1·b2 − b1·a2`.
    pub fn omega(&self, other: &Self) -> Q {
        dot(&self.a, &other.b) - dot(&self.b, &other.a)
    }

    pub fn compose(&self, other: &Self) -> Self {
        let half = Q::new(1.into(), 2.into());
        Self {
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            b: self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect(),
            t: &self.t + &other.t + half * self.omega(other),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.a.iter().map(|x| -x).collect(),
            b: self.b.iter().map(|x| -x).collect(),
            t: -&self.t,
        }
    }

    /// `[w g, t]`.
    pub fn transform(&self, g: &SymplecticMatrix) -> Self {
        let w: Vec<Q> = self.a.iter().chain(&self.b).cloned().collect();
        let wg = g.act_row(&w);
        let d = self.dim();
        Self {
            a: wg[..d].to_vec(),
            b: wg[d..].to_vec(),
            t: self.t.clone(),
        }
    }
}

fn neg_min_valuation(xs: &[Q], p: u64) -> Option<i64> {
    xs.iter().filter_map(|x| vp(x, p)).map(|v| -v).max()
}

/// `ρ([w, t]) f (x) = ψ(t + ½a·b + b·x) f(x + a)`.
pub fn heisenberg_act<I: ResidueInt>(
    h: &HeisenbergElement,
    f: &SchwartzFunction<I>,
    psi: &AdditiveCharacter<I>,
) -> Result<SchwartzFunction<I>, SchwartzError> {
    let d = f.dim();
    if h.dim() != d {
        return Err(SchwartzError::Dimension {
            expected: d,
            found: h.dim(),
        });
    }
    if f.is_zero() {
        return Ok(f.clone());
    }
    let p = f.field().p();
    let m = f.support_exponent().max(neg_min_valuation(&h.a, p).unwrap_or(i64::MIN));
    let n = f.level_exponent().max(
        neg_min_valuation(&h.b, p).map_or(i64::MIN, |v| v - psi.scale_valuation()),
    );
    let half = Q::new(1.into(), 2.into());
    let base = &h.t + half * dot(&h.a, &h.b);
    SchwartzFunction::tabulate(psi, d, m, n, |x| {
        let shifted: Vec<Q> = x.iter().zip(&h.a).map(|(u, v)| u + v).collect();
        let val = f.eval(&shifted);
        if val.is_zero() {
            return Ok(val);
        }
        Ok(&psi.eval(&(&base + dot(&h.b, x)))? * &val)
    })
}
