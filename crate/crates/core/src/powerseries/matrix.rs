use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Multiindex, TruncatedSeries};

/// Dense square matrix, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<S: Scalar> {
    n: usize,
    entries: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(n: usize, ctx: &S::Ctx) -> Self {
        Matrix {
            n,
            entries: vec![S::zero(ctx); n * n],
        }
    }

    pub fn identity(n: usize, ctx: &S::Ctx) -> Self {
        let mut m = Self::zeros(n, ctx);
        for a in 0..n {
            m.set(a, a, S::one(ctx));
        }
        m
    }

    pub fn diagonal(diag: Vec<S>, ctx: &S::Ctx) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, ctx);
        for (a, d) in diag.into_iter().enumerate() {
            m.set(a, a, d);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.entries[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &Self, ctx: &S::Ctx) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n, ctx);
        for r in 0..n {
            for c in 0..n {
                let mut acc = S::zero(ctx);
                for k in 0..n {
                    acc = acc.add(&self.get(r, k).mul(other.get(k, c)));
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(S::conj).collect(),
        }
    }

    /// Gauss-Jordan inverse; pivots are the first non-negligible entry in
    /// each column (largest modulus in float mode).
    pub fn inverse(&self, ctx: &S::Ctx) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n, ctx);
        for col in 0..n {
            let pivot = if S::MODE == crate::scalar::Mode::Exact {
                (col..n).find(|&r| !a.get(r, col).is_exact_zero())
            } else {
                (col..n)
                    .filter(|&r| !a.get(r, col).is_negligible(ctx))
                    .max_by(|&r1, &r2| {
                        a.get(r1, col)
                            .norm_sqr()
                            .partial_cmp(&a.get(r2, col).norm_sqr())
                            .unwrap_or(std::cmp::Ordering::Equal)
                            .then(r2.cmp(&r1))
                    })
            }?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a.get(col, col).inv()?;
            for c in 0..n {
                a.set(col, c, a.get(col, c).mul(&p));
                inv.set(col, c, inv.get(col, c).mul(&p));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_exact_zero() {
                    continue;
                }
                for c in 0..n {
                    a.set(r, c, a.get(r, c).sub(&factor.mul(a.get(col, c))));
                    inv.set(r, c, inv.get(r, c).sub(&factor.mul(inv.get(col, c))));
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for c in 0..self.n {
            self.entries.swap(r1 * self.n + c, r2 * self.n + c);
        }
    }

    /// Off-diagonal entries all negligible.
    pub fn is_diagonal(&self, ctx: &S::Ctx) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || self.get(r, c).is_negligible(ctx)))
    }

    pub fn diagonal_entries(&self) -> Vec<S> {
        (0..self.n).map(|a| self.get(a, a).clone()).collect()
    }

    /// `self - Id` negligible entrywise.
    pub fn is_identity(&self, ctx: &S::Ctx) -> bool {
        self.sub(&Self::identity(self.n, ctx))
            .entries
            .iter()
            .all(|v| v.is_negligible(ctx))
    }

    /// Largest squared modulus of an entry of `self - other`, rendered.
    pub fn max_deviation(&self, other: &Self) -> S::Real
    where
        S::Real: PartialOrd,
    {
        let mut diffs = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b).norm_sqr());
        let first = diffs.next().expect("empty matrix");
        diffs.fold(first, |acc, d| if d > acc { d } else { acc })
    }

    /// `(M·s)_r = Σ_c M_{rc} s_c` for a vector of series.
    pub fn apply(&self, series: &[TruncatedSeries<S>]) -> Vec<TruncatedSeries<S>> {
        (0..self.n)
            .map(|r| {
                let first = &series[0];
                let mut acc = TruncatedSeries::zero(first.n(), first.degree(), first.ctx());
                for (c, s) in series.iter().enumerate() {
                    let m = self.get(r, c);
                    if m.is_exact_zero() {
                        continue;
                    }
                    for (q, v) in s.terms() {
                        acc.add_term(q.clone(), &m.mul(v));
                    }
                }
                acc
            })
            .collect()
    }

    /// The linear forms `z -> M z` as series of truncation degree `degree`.
    pub fn linear_forms(&self, degree: usize, ctx: &S::Ctx) -> Vec<TruncatedSeries<S>> {
        let n = self.n;
        (0..n)
            .map(|r| {
                let mut s = TruncatedSeries::zero(n, degree, ctx);
                for c in 0..n {
                    s.set(Multiindex::unit(n, c), self.get(r, c).clone());
                }
                s
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, GaussianRational as G};

    #[test]
    fn inverse_roundtrip() {
        let ctx = ExactCtx::default();
        let m = Matrix::from_rows(vec![
            vec![G::from_i64(0, 1), G::from_i64(2, 0)],
            vec![G::from_fractions(1, 2, 0, 1), G::from_i64(1, 1)],
        ])
        .unwrap();
        let inv = m.inverse(&ctx).unwrap();
        assert!(m.mul(&inv, &ctx).is_identity(&ctx));
        assert!(inv.mul(&m, &ctx).is_identity(&ctx));
    }

    #[test]
    fn singular_has_no_inverse() {
        let ctx = ExactCtx::default();
        let m = Matrix::from_rows(vec![
            vec![G::from_i64(1, 0), G::from_i64(2, 0)],
            vec![G::from_i64(2, 0), G::from_i64(4, 0)],
        ])
        .unwrap();
        assert!(m.inverse(&ctx).is_none());
    }
}
