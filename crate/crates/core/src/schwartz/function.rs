use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::{AdditiveCharacter, SchwartzError};
use crate::padic::json::element_to_json;
use crate::padic::{CycloElement, CyclotomicField};
use crate::rational::{fmt_q, p_pow_q, residue_mod_pk, vp, ValuationQ, Q};
use crate::scalar::ResidueInt;

/// Largest table a computation may allocate.
pub const MAX_TABLE: u64 = 1 << 22;

/// Function on `Q_p^d` supported in `p^{-m} Z_p^d` and invariant under
/// `p^n Z_p^d`, kept in canonical form (both exponents minimal).
#[derive(Clone)]
pub struct SchwartzFunction<I: ResidueInt> {
    field: Arc<CyclotomicField<I>>,
    d: usize,
    m: i64,
    n: i64,
    table: Vec<CycloElement<I>>,
}

fn grid_side(p: u64, m: i64, n: i64) -> u64 {
    p.pow((m + n) as u32)
}

fn table_len(p: u64, d: usize, m: i64, n: i64) -> Result<usize, SchwartzError> {
    let side = BigInt::from(p).pow((m + n) as u32);
    let len = num_traits::pow(side, d);
    match len.to_u64() {
        Some(l) if l <= MAX_TABLE => Ok(l as usize),
        _ => Err(SchwartzError::TableTooLarge {
            entries: len.to_string(),
        }),
    }
}

/// Coset coordinates of a flat index.
fn unflatten(mut idx: usize, side: u64, d: usize) -> Vec<u64> {
    let mut u = Vec::with_capacity(d);
    for _ in 0..d {
        u.push(idx as u64 % side);
        idx /= side as usize;
    }
    u
}

fn flatten(u: &[u64], side: u64) -> usize {
    u.iter().rev().fold(0usize, |acc, &c| acc * side as usize + c as usize)
}

impl<I: ResidueInt> SchwartzFunction<I> {
    /// Build from a point evaluator on the `(m, n)` grid, then
    /// canonicalize. `value` sees the representative `u / p^m`.
    ///
    /// Character levels beyond the field are collected over the whole grid
    /// so the error reports the largest one needed.
    pub fn tabulate<F>(
        psi: &AdditiveCharacter<I>,
        d: usize,
        m: i64,
        n: i64,
        mut value: F,
    ) -> Result<Self, SchwartzError>
    where
        F: FnMut(&[Q]) -> Result<CycloElement<I>, SchwartzError>,
    {
        let cap = psi.window();
        if m.abs() > cap || n.abs() > cap {
            return Err(SchwartzError::WindowCap { m, n, cap });
        }
        assert!(m + n >= 0, "grid needs m + n >= 0");
        let field = psi.field();
        let p = field.p();
        let len = table_len(p, d, m, n)?;
        let side = grid_side(p, m, n);
        let scale = p_pow_q(p, -m);
        let mut table = Vec::with_capacity(len);
        let mut missing: Option<(u32, u32)> = None;
        for idx in 0..len {
            let x: Vec<Q> = unflatten(idx, side, d)
                .into_iter()
                .map(|c| Q::from_integer(c.into()) * &scale)
                .collect();
            match value(&x) {
                Ok(v) => table.push(v),
                Err(SchwartzError::InsufficientField { required, available }) => {
                    let r = missing.map_or(required, |(r, _)| r.max(required));
                    missing = Some((r, available));
                    table.push(CycloElement::zero(field));
                }
                Err(e) => return Err(e),
            }
        }
        if let Some((required, available)) = missing {
            return Err(SchwartzError::InsufficientField { required, available });
        }
        Ok(Self::from_table(field, d, m, n, table))
    }

    /// Wrap a raw table (length `p^{d(m+n)}`) and canonicalize.
    pub fn from_table(
        field: &Arc<CyclotomicField<I>>,
        d: usize,
        m: i64,
        n: i64,
        table: Vec<CycloElement<I>>,
    ) -> Self {
        assert!(d >= 1 && m + n >= 0);
        assert_eq!(
            Some(table.len()),
            table_len(field.p(), d, m, n).ok(),
            "table size must be p^(d(m+n))"
        );
        let mut f = Self {
            field: field.clone(),
            d,
            m,
            n,
            table,
        };
        f.canonicalize();
        f
    }

    pub fn zero(field: &Arc<CyclotomicField<I>>, d: usize) -> Self {
        Self::from_table(field, d, 0, 0, vec![CycloElement::zero(field)])
    }

    /// Characteristic function of `offset + p^k Z_p^d`.
    pub fn indicator(
        field: &Arc<CyclotomicField<I>>,
        d: usize,
        k: i64,
        offset: &[Q],
    ) -> Result<Self, SchwartzError> {
        if offset.len() != d {
            return Err(SchwartzError::Dimension {
                expected: d,
                found: offset.len(),
            });
        }
        let p = field.p();
        let m = offset
            .iter()
            .filter_map(|o| vp(o, p))
            .map(|v| -v)
            .fold(-k, i64::max);
        let n = k;
        let len = table_len(p, d, m, n)?;
        let side = grid_side(p, m, n);
        let mut table = vec![CycloElement::zero(field); len];
        // the coset of the offset is the only nonzero entry
        let u: Vec<u64> = offset
            .iter()
            .map(|o| {
                let r = residue_mod_pk(&(o * p_pow_q(p, m)), p, (m + n) as u32);
                r.to_u64().expect("coordinate below grid side")
            })
            .collect();
        table[flatten(&u, side)] = CycloElement::one(field);
        Ok(Self::from_table(field, d, m, n, table))
    }

    pub fn field(&self) -> &Arc<CyclotomicField<I>> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Support exponent: the support lies in `p^{-m} Z_p^d`.
    pub fn support_exponent(&self) -> i64 {
        self.m
    }

    /// Level exponent: invariant under `p^n Z_p^d`.
    pub fn level_exponent(&self) -> i64 {
        self.n
    }

    pub fn table(&self) -> &[CycloElement<I>] {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|v| v.is_zero())
    }

    /// Representatives `u / p^m` of every coset, in table order.
    pub fn coset_representatives(&self) -> Vec<Vec<Q>> {
        let p = self.field.p();
        let side = grid_side(p, self.m, self.n);
        let scale = p_pow_q(p, -self.m);
        (0..self.table.len())
            .map(|idx| {
                unflatten(idx, side, self.d)
                    .into_iter()
                    .map(|c| Q::from_integer(c.into()) * &scale)
                    .collect()
            })
            .collect()
    }

    /// Value at a point of `Q^d` (read as a point of `Q_p^d`).
    pub fn eval(&self, x: &[Q]) -> CycloElement<I> {
        assert_eq!(x.len(), self.d, "point dimension");
        let p = self.field.p();
        let k = (self.m + self.n) as u32;
        let mut u = Vec::with_capacity(self.d);
        for xi in x {
            if vp(xi, p).is_some_and(|v| v < -self.m) {
                return CycloElement::zero(&self.field);
            }
            let r = residue_mod_pk(&(xi * p_pow_q(p, self.m)), p, k);
            u.push(r.to_u64().expect("coordinate below grid side"));
        }
        self.table[flatten(&u, grid_side(p, self.m, self.n))].clone()
    }

    /// `-log_p` of the sup norm.
    pub fn sup_norm(&self) -> ValuationQ {
        self.table
            .iter()
            .map(|v| v.valuation())
            .min()
            .unwrap_or(ValuationQ::Infinity)
    }

    pub fn scale(&self, c: &CycloElement<I>) -> Self {
        let table = self.table.iter().map(|v| v * c).collect();
        Self::from_table(&self.field, self.d, self.m, self.n, table)
    }

    /// Pointwise sum on the common refinement.
    pub fn add(&self, other: &Self) -> Result<Self, SchwartzError> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SchwartzError> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(
        &self,
        other: &Self,
        op: impl Fn(&CycloElement<I>, &CycloElement<I>) -> CycloElement<I>,
    ) -> Result<Self, SchwartzError> {
        if self.d != other.d {
            return Err(SchwartzError::Dimension {
                expected: self.d,
                found: other.d,
            });
        }
        if !self.field.same_as(&other.field) {
            return Err(crate::padic::PadicError::FieldMismatch.into());
        }
        let m = self.m.max(other.m);
        let n = self.n.max(other.n);
        let p = self.field.p();
        let len = table_len(p, self.d, m, n)?;
        let side = grid_side(p, m, n);
        let scale = p_pow_q(p, -m);
        let table = (0..len)
            .map(|idx| {
                let x: Vec<Q> = unflatten(idx, side, self.d)
                    .into_iter()
                    .map(|c| Q::from_integer(c.into()) * &scale)
                    .collect();
                op(&self.eval(&x), &other.eval(&x))
            })
            .collect();
        Ok(Self::from_table(&self.field, self.d, m, n, table))
    }

    /// Equality at precision, checked on the common refinement.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.d == other.d && self.sub(other).is_ok_and(|diff| diff.is_zero())
    }

    fn canonicalize(&mut self) {
        if self.is_zero() {
            self.m = 0;
            self.n = 0;
            self.table = vec![CycloElement::zero(&self.field)];
            return;
        }
        let p = self.field.p();
        loop {
            if self.m + self.n == 0 {
                return;
            }
            let side = grid_side(p, self.m, self.n);
            let inner = side / p;
            let coords: Vec<Vec<u64>> = (0..self.table.len())
                .map(|i| unflatten(i, side, self.d))
                .collect();
            // outer shell: some coordinate not divisible by p
            let shell_zero = coords
                .iter()
                .zip(&self.table)
                .all(|(u, v)| u.iter().all(|c| c % p == 0) || v.is_zero());
            if shell_zero {
                let mut table = vec![CycloElement::zero(&self.field); num_traits::pow(inner as usize, self.d)];
                for (u, v) in coords.iter().zip(&self.table) {
                    if u.iter().all(|c| c % p == 0) {
                        let w: Vec<u64> = u.iter().map(|c| c / p).collect();
                        table[flatten(&w, inner)] = v.clone();
                    }
                }
                self.table = table;
                self.m -= 1;
                continue;
            }
            let coarse = |u: &[u64]| -> Vec<u64> { u.iter().map(|c| c % inner).collect() };
            let constant = coords
                .iter()
                .zip(&self.table)
                .all(|(u, v)| v.eq_at_precision(&self.table[flatten(&coarse(u), side)]));
            if constant {
                let mut table = vec![CycloElement::zero(&self.field); num_traits::pow(inner as usize, self.d)];
                for (u, v) in coords.iter().zip(&self.table) {
                    if u.iter().all(|&c| c < inner) {
                        table[flatten(u, inner)] = v.clone();
                    }
                }
                self.table = table;
                self.n -= 1;
                continue;
            }
            return;
        }
    }

    /// `{p, N, d, m, n, entries: [{coset, value}]}` with cosets given by
    /// their representatives.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .coset_representatives()
            .into_iter()
            .zip(&self.table)
            .map(|(x, v)| {
                json!({
                    "coset": x.iter().map(fmt_q).collect::<Vec<_>>(),
                    "value": element_to_json(v),
                })
            })
            .collect();
        json!({
            "p": self.field.p(),
            "N": self.field.level(),
            "d": self.d,
            "m": self.m,
            "n": self.n,
            "entries": entries,
        })
    }
}

impl<I: ResidueInt> std::fmt::Debug for SchwartzFunction<I> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SchwartzFunction(d={}, m={}, n={}, [", self.d, self.m, self.n)?;
        for (i, v) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "])")
    }
}
