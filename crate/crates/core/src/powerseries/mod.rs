//! Sparse truncated multivariate power series and polynomial maps.
//!
//! A [`TruncatedSeries`] stores only nonzero coefficients of total degree `<= N`
//! in a [`BTreeMap`] keyed by exponent vectors, so iteration order is
//! lexicographic on exponents and every output is reproducible bit for bit.
//! All arithmetic is performed modulo degree `N + 1`.

mod literal;
mod map;
mod matrix;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Float, RealValue, Scalar};

pub use literal::{MapLiteral, MatrixLiteral, SeriesLiteral, TermLiteral};
pub use map::{CoefficientSet, TruncatedMap};
pub use matrix::Matrix;

/// Exponent vector `Q = (q_1, ..., q_n)`; `x^Q = x_1^{q_1} ... x_n^{q_n}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiindex(Vec<u32>);

impl Multiindex {
    pub fn new(exponents: Vec<u32>) -> Self {
        Multiindex(exponents)
    }

    pub fn zeros(n: usize) -> Self {
        Multiindex(vec![0; n])
    }

    /// The unit multiindex `E_a` (0-based `a`).
    pub fn unit(n: usize, a: usize) -> Self {
        let mut v = vec![0; n];
        v[a] = 1;
        Multiindex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|Q|`
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&q| q as usize).sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.0.clone()
    }

    pub fn add(&self, other: &Multiindex) -> Multiindex {
        debug_assert_eq!(self.len(), other.len());
        Multiindex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_sub(&self, other: &Multiindex) -> Option<Multiindex> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Multiindex)
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Multiindex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&q| q == 0)
    }

    /// Indices `a` with `q_a > 0`.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &q)| q > 0)
            .map(|(a, _)| a)
    }

    /// Multinomial coefficient `|Q|! / (q_1! ... q_n!)`.
    pub fn multinomial(&self) -> num_bigint::BigUint {
        let mut acc = num_bigint::BigUint::from(1u32);
        let mut total = 0u64;
        for &q in &self.0 {
            for t in 1..=q as u64 {
                total += 1;
                acc = acc * total / t;
            }
        }
        acc
    }

    /// Every exponent vector of total degree `d` in `n` variables, ascending
    /// lexicographic order.
    pub fn shell(n: usize, d: usize) -> Vec<Multiindex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fill_shell(&mut cur, 0, d, &mut out);
        out
    }

    /// All exponent vectors with `lo <= |Q| <= hi`, ordered by degree then
    /// lexicographically.
    pub fn range(n: usize, lo: usize, hi: usize) -> Vec<Multiindex> {
        (lo..=hi).flat_map(|d| Multiindex::shell(n, d)).collect()
    }

    /// Every divisor `P` of `self` (including `0` and `self`), ascending order.
    pub fn divisors(&self) -> Vec<Multiindex> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &q in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=q).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Multiindex).collect()
    }
}

fn fill_shell(cur: &mut Vec<u32>, pos: usize, remaining: usize, out: &mut Vec<Multiindex>) {
    let n = cur.len();
    if n == 0 {
        if remaining == 0 {
            out.push(Multiindex(Vec::new()));
        }
        return;
    }
    if pos == n - 1 {
        cur[pos] = remaining as u32;
        out.push(Multiindex(cur.clone()));
        return;
    }
    for v in 0..=remaining {
        cur[pos] = v as u32;
        fill_shell(cur, pos + 1, remaining - v, out);
    }
    cur[pos] = 0;
}

impl Index<usize> for Multiindex {
    type Output = u32;
    fn index(&self, a: usize) -> &u32 {
        &self.0[a]
    }
}

impl fmt::Debug for Multiindex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for Multiindex {
    fn from(v: Vec<u32>) -> Self {
        Multiindex(v)
    }
}

impl<const K: usize> From<[u32; K]> for Multiindex {
    fn from(v: [u32; K]) -> Self {
        Multiindex(v.to_vec())
    }
}

/// A power series in `n` variables known modulo degree `N + 1`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<S: Scalar> {
    n: usize,
    degree: usize,
    ctx: S::Ctx,
    terms: BTreeMap<Multiindex, S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn zero(n: usize, degree: usize, ctx: &S::Ctx) -> Self {
        TruncatedSeries {
            n,
            degree,
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, degree: usize, c: S, ctx: &S::Ctx) -> Self {
        Self::monomial(Multiindex::zeros(n), c, degree, ctx)
    }

    /// The coordinate function `x_a` (0-based).
    pub fn variable(n: usize, a: usize, degree: usize, ctx: &S::Ctx) -> Self {
        Self::monomial(Multiindex::unit(n, a), S::one(ctx), degree, ctx)
    }

    pub fn monomial(q: Multiindex, c: S, degree: usize, ctx: &S::Ctx) -> Self {
        let n = q.len();
        let mut s = Self::zero(n, degree, ctx);
        s.set(q, c);
        s
    }

    /// Builds a series from `(Q, c)` pairs, summing duplicates and discarding
    /// terms above the truncation degree.
    pub fn from_terms<I>(n: usize, degree: usize, ctx: &S::Ctx, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Multiindex, S)>,
    {
        let mut s = Self::zero(n, degree, ctx);
        for (q, c) in terms {
            if q.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: q.len(),
                });
            }
            s.add_term(q, &c);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Truncation degree `N`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Multiindex, &S)> {
        self.terms.iter()
    }

    pub fn get(&self, q: &Multiindex) -> Option<&S> {
        self.terms.get(q)
    }

    /// Coefficient of `x^Q` (zero when absent). `|Q| > N` is outside the
    /// truncation and also reads as zero.
    pub fn coeff(&self, q: &Multiindex) -> S {
        self.terms.get(q).cloned().unwrap_or_else(|| S::zero(&self.ctx))
    }

    /// Overwrites the coefficient of `x^Q`; zero removes it.
    pub fn set(&mut self, q: Multiindex, c: S) {
        debug_assert_eq!(q.len(), self.n);
        if q.degree() > self.degree || c.is_exact_zero() {
            self.terms.remove(&q);
        } else {
            self.terms.insert(q, c);
        }
    }

    pub fn add_term(&mut self, q: Multiindex, c: &S) {
        if q.degree() > self.degree || c.is_exact_zero() {
            return;
        }
        match self.terms.get_mut(&q) {
            Some(v) => {
                let sum = v.add(c);
                if sum.is_exact_zero() {
                    self.terms.remove(&q);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.terms.insert(q, c.clone());
            }
        }
    }

    /// Smallest degree carrying a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(Multiindex::degree).min()
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if self.ctx != other.ctx {
            return Err(Error::ModeMismatch(format!(
                "{:?} vs {:?}",
                self.ctx, other.ctx
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_to(other, self.degree))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (q, c) in &other.terms {
            out.add_term(q.clone(), c);
        }
        out
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        self.add_unchecked(&other.neg())
    }

    /// Product truncated at degree `min(d, N)`.
    pub(crate) fn mul_to(&self, other: &Self, d: usize) -> Self {
        let d = d.min(self.degree);
        let mut acc: BTreeMap<Multiindex, S> = BTreeMap::new();
        let rhs: Vec<(&Multiindex, usize, &S)> = other
            .terms
            .iter()
            .map(|(q, c)| (q, q.degree(), c))
            .collect();
        for (p, a) in &self.terms {
            let dp = p.degree();
            if dp > d {
                continue;
            }
            for (q, dq, b) in &rhs {
                if dp + dq > d {
                    continue;
                }
                let prod = a.mul(b);
                let key = p.add(q);
                match acc.get_mut(&key) {
                    Some(v) => *v = v.add(&prod),
                    None => {
                        acc.insert(key, prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_exact_zero());
        TruncatedSeries {
            n: self.n,
            degree: self.degree,
            ctx: self.ctx.clone(),
            terms: acc,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n, self.degree, &self.ctx);
        for (q, v) in &self.terms {
            out.set(q.clone(), v.mul(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            n: self.n,
            degree: self.degree,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(q, c)| (q.clone(), c.neg()))
                .collect(),
        }
    }

    /// Replaces every coefficient by its complex conjugate.
    pub fn conjugate_coefficients(&self) -> Self {
        TruncatedSeries {
            n: self.n,
            degree: self.degree,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(q, c)| (q.clone(), c.conj()))
                .collect(),
        }
    }

    /// Drops every term of degree `> d` (the stored truncation degree is kept).
    pub fn truncate(&self, d: usize) -> Self {
        self.filter(|q| q.degree() <= d)
    }

    /// The homogeneous part of degree `d`.
    pub fn homogeneous(&self, d: usize) -> Self {
        self.filter(|q| q.degree() == d)
    }

    pub fn filter<F: Fn(&Multiindex) -> bool>(&self, keep: F) -> Self {
        TruncatedSeries {
            n: self.n,
            degree: self.degree,
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(q, _)| keep(q))
                .map(|(q, c)| (q.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same terms, reinterpreted at a new truncation degree (terms above it are
    /// discarded).
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut out = self.truncate(degree);
        out.degree = degree;
        out
    }

    /// Evaluates `x -> x ∘ diag(scales)`, i.e. multiplies `x^Q` by `scales^Q`.
    pub fn scale_variables(&self, scales: &[S]) -> Self {
        let mut out = Self::zero(self.n, self.degree, &self.ctx);
        for (q, c) in &self.terms {
            let mut v = c.clone();
            for (a, &e) in q.as_slice().iter().enumerate() {
                if e > 0 {
                    v = v.mul(&scales[a].pow(e, &self.ctx));
                }
            }
            out.set(q.clone(), v);
        }
        out
    }

    /// Largest coefficient modulus, as a float.
    pub fn max_abs(&self, precision: usize) -> Float {
        let mut best = crate::scalar::float_zero(precision);
        for c in self.terms.values() {
            let m = c.norm_sqr().to_float(precision);
            if m > best {
                best = m;
            }
        }
        crate::scalar::float_sqrt(&best)
    }

    /// Whether every coefficient is negligible in the current mode.
    pub fn is_negligible(&self) -> bool {
        self.terms.values().all(|c| c.is_negligible(&self.ctx))
    }
}

impl<S: Scalar> fmt::Debug for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.degree + 1);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(q, c)| format!("{c:?}·x^{q:?}"))
            .collect();
        write!(f, "{} + O({})", parts.join(" + "), self.degree + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, GaussianRational};

    type Series = TruncatedSeries<GaussianRational>;

    fn ctx() -> ExactCtx {
        ExactCtx::default()
    }

    fn x(a: usize, n: usize, degree: usize) -> Series {
        Series::variable(n, a, degree, &ctx())
    }

    #[test]
    fn shell_is_lexicographic() {
        let s = Multiindex::shell(2, 2);
        assert_eq!(
            s,
            vec![
                Multiindex::from([0, 2]),
                Multiindex::from([1, 1]),
                Multiindex::from([2, 0])
            ]
        );
        assert_eq!(Multiindex::shell(3, 4).len(), 15);
        assert_eq!(Multiindex::range(2, 0, 3).len(), 10);
    }

    #[test]
    fn multinomial_and_divisors() {
        assert_eq!(Multiindex::from([2, 1]).multinomial(), 3u32.into());
        assert_eq!(Multiindex::from([1, 1, 1]).multinomial(), 6u32.into());
        assert_eq!(Multiindex::from([2, 1]).divisors().len(), 6);
    }

    #[test]
    fn coefficient_lookup() {
        let p = x(0, 2, 3).mul(&x(1, 2, 3)).unwrap();
        assert_eq!(
            p.coeff(&Multiindex::from([1, 1])),
            GaussianRational::one(&ctx())
        );
        assert!(p.coeff(&Multiindex::from([2, 0])).is_exact_zero());
    }

    #[test]
    fn product_is_truncated() {
        let x1 = x(0, 2, 2);
        let x2 = x(1, 2, 2);
        let p = x1.mul(&x2).unwrap();
        assert_eq!(p.len(), 1);
        let sq = x1.mul(&x1).unwrap();
        assert!(sq.mul(&x2).unwrap().is_zero());
    }

    #[test]
    fn mismatched_operands_are_rejected() {
        let a = x(0, 2, 2);
        let b = x(0, 3, 2);
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
        let c = x(0, 2, 3);
        assert!(matches!(a.mul(&c), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn conjugation() {
        let i = GaussianRational::from_i64(0, 1);
        let f = x(0, 2, 3).scale(&i);
        let g = f.conjugate_coefficients();
        assert_eq!(g.coeff(&Multiindex::from([1, 0])), i.neg());
        assert_eq!(g.conjugate_coefficients(), f);
        let real = x(0, 2, 3).add(&x(1, 2, 3)).unwrap();
        assert_eq!(real.conjugate_coefficients(), real);
    }
}
