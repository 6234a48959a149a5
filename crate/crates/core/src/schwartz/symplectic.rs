use std::fmt;

use num_traits::{One, Zero};

use super::SchwartzError;
use crate::rational::{fmt_q, parse_q, Q};

pub(crate) type Matrix = Vec<Vec<Q>>;

pub(crate) fn mat_mul(x: &Matrix, y: &Matrix) -> Matrix {
    let inner = y.len();
    let cols = y.first().map_or(0, |r| r.len());
    x.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &y[k][j]).sum())
                .collect()
        })
        .collect()
}

pub(crate) fn transpose(x: &Matrix) -> Matrix {
    let cols = x.first().map_or(0, |r| r.len());
    (0..cols).map(|j| x.iter().map(|r| r[j].clone()).collect()).collect()
}

pub(crate) fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

/// Inverse by Gauss-Jordan elimination; `None` if singular.
pub(crate) fn inverse(x: &Matrix) -> Option<Matrix> {
    let n = x.len();
    let mut a: Matrix = x
        .iter()
        .zip(identity(n))
        .map(|(r, e)| r.iter().cloned().chain(e).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `2d × 2d` matrix `g = (a b; c d)` with `g J gᵗ = J`, `J = (0 I; −I 0)`.
/// Acts on row vectors from the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticMatrix {
    d: usize,
    rows: Matrix,
}

impl SymplecticMatrix {
    pub fn new(rows: Matrix) -> Result<Self, SchwartzError> {
        let n = rows.len();
        if n == 0 || n % 2 == 1 || rows.iter().any(|r| r.len() != n) {
            return Err(SchwartzError::NotSymplectic);
        }
        let j = Self::j(n / 2);
        if mat_mul(&mat_mul(&rows, &j.rows), &transpose(&rows)) != j.rows {
            return Err(SchwartzError::NotSymplectic);
        }
        Ok(Self { d: n / 2, rows })
    }

    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Self, SchwartzError> {
        let rows = a
            .iter()
            .zip(b)
            .map(|(x, y)| x.iter().chain(y).cloned().collect())
            .chain(c.iter().zip(d).map(|(x, y)| x.iter().chain(y).cloned().collect()))
            .collect();
        Self::new(rows)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            d,
            rows: identity(2 * d),
        }
    }

    pub fn j(d: usize) -> Self {
        let mut rows = vec![vec![Q::zero(); 2 * d]; 2 * d];
        for i in 0..d {
            rows[i][d + i] = Q::one();
            rows[d + i][i] = -Q::one();
        }
        Self { d, rows }
    }

    /// `(u 0; 0 u^{-1})` for `d = 1`.
    pub fn diagonal(u: &Q) -> Result<Self, SchwartzError> {
        if u.is_zero() {
            return Err(SchwartzError::NotSymplectic);
        }
        Self::new(vec![vec![u.clone(), Q::zero()], vec![Q::zero(), u.recip()]])
    }

    /// `(1 b; 0 1)` for `d = 1`.
    pub fn upper(b: &Q) -> Self {
        Self::new(vec![vec![Q::one(), b.clone()], vec![Q::zero(), Q::one()]]).expect("unipotent")
    }

    /// `(1 0; c 1)` for `d = 1`.
    pub fn lower(c: &Q) -> Self {
        Self::new(vec![vec![Q::one(), Q::zero()], vec![c.clone(), Q::one()]]).expect("unipotent")
    }

    /// Block-diagonal `(A 0; 0 A^{-t})`.
    pub fn block_diagonal(a: &Matrix) -> Result<Self, SchwartzError> {
        let d = a.len();
        let inv_t = transpose(&inverse(a).ok_or(SchwartzError::NotSymplectic)?);
        let zero = vec![vec![Q::zero(); d]; d];
        Self::from_blocks(a, &zero, &zero, &inv_t)
    }

    /// `(I S; 0 I)` for symmetric `S`.
    pub fn block_upper(s: &Matrix) -> Result<Self, SchwartzError> {
        let d = s.len();
        let zero = vec![vec![Q::zero(); d]; d];
        Self::from_blocks(&identity(d), s, &zero, &identity(d))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    fn block(&self, r: usize, c: usize) -> Matrix {
        let d = self.d;
        self.rows[r * d..(r + 1) * d]
            .iter()
            .map(|row| row[c * d..(c + 1) * d].to_vec())
            .collect()
    }

    pub fn a(&self) -> Matrix {
        self.block(0, 0)
    }

    pub fn b(&self) -> Matrix {
        self.block(0, 1)
    }

    pub fn c(&self) -> Matrix {
        self.block(1, 0)
    }

    pub fn d_block(&self) -> Matrix {
        self.block(1, 1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        Self {
            d: self.d,
            rows: mat_mul(&self.rows, &other.rows),
        }
    }

    pub fn inverse(&self) -> Self {
        // g^{-1} = J^{-1} gᵗ J = -J gᵗ J
        let j = Self::j(self.d).rows;
        let rows = mat_mul(&mat_mul(&j, &transpose(&self.rows)), &j)
            .into_iter()
            .map(|r| r.into_iter().map(|x| -x).collect())
            .collect();
        Self { d: self.d, rows }
    }

    /// `w g` for a row vector `w` of length `2d`.
    pub fn act_row(&self, w: &[Q]) -> Vec<Q> {
        assert_eq!(w.len(), 2 * self.d);
        (0..2 * self.d)
            .map(|j| w.iter().zip(&self.rows).map(|(x, r)| x * &r[j]).sum())
            .collect()
    }

    /// Rows separated by `;`, entries by `,`; entries are rationals.
    pub fn parse(s: &str) -> Result<Self, SchwartzError> {
        let rows = s
            .split(';')
            .map(|r| {
                r.split(',')
                    .map(|x| parse_q(x.trim()).map_err(SchwartzError::Parse))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Matrix, _>>()?;
        Self::new(rows)
    }
}

impl fmt::Display for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(fmt_q).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn parse_and_check() {
        let g = SymplecticMatrix::parse("0,1;-1,0").unwrap();
        assert_eq!(g, SymplecticMatrix::j(1));
        assert_eq!(SymplecticMatrix::parse("1,2;0,1").unwrap().to_string(), "1,2;0,1");
        assert!(SymplecticMatrix::parse("1,2;3,4").is_err());
        assert!(SymplecticMatrix::parse("1,x;0,1").is_err());
    }

    #[test]
    fn inverse_and_products() {
        let g = SymplecticMatrix::upper(&q(3, 4))
            .mul(&SymplecticMatrix::lower(&q(-2, 1)))
            .mul(&SymplecticMatrix::diagonal(&q(6, 1)).unwrap());
        assert!(SymplecticMatrix::new(g.rows().clone()).is_ok());
        assert_eq!(g.mul(&g.inverse()), SymplecticMatrix::identity(1));
        let a = vec![vec![q(1, 1), q(2, 1)], vec![q(0, 1), q(1, 2)]];
        let s = vec![vec![q(1, 2), q(1, 1)], vec![q(1, 1), q(0, 1)]];
        let h = SymplecticMatrix::block_diagonal(&a)
            .unwrap()
            .mul(&SymplecticMatrix::block_upper(&s).unwrap())
            .mul(&SymplecticMatrix::j(2));
        assert_eq!(h.mul(&h.inverse()), SymplecticMatrix::identity(2));
        assert!(SymplecticMatrix::block_upper(&a).is_err());
    }
}
