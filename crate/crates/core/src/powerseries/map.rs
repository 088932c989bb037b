use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::scalar::{Float, Scalar};

use super::{Matrix, Multiindex, TruncatedSeries};

/// An `n`-tuple of truncated series in `n` variables: a germ of map
/// `(C^n, 0) -> (C^n, 0)` known modulo degree `N + 1`.
#[derive(Clone, PartialEq)]
pub struct TruncatedMap<S: Scalar> {
    components: Vec<TruncatedSeries<S>>,
}

/// Which `(Q, j)` coefficients [`TruncatedMap::project`] keeps. Only degrees
/// `>= 2` are ever selected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientSet {
    All,
    /// Pairs `(Q, j)` with 0-based component `j`.
    Listed(BTreeSet<(Multiindex, usize)>),
}

impl CoefficientSet {
    pub fn contains(&self, q: &Multiindex, j: usize) -> bool {
        if q.degree() < 2 {
            return false;
        }
        match self {
            CoefficientSet::All => true,
            CoefficientSet::Listed(set) => set.contains(&(q.clone(), j)),
        }
    }
}

/// Memoized powers `G^Q` of an inner map, built as `G^Q = G^{Q-E_a} · G_a`
/// with `a` the last index where `Q` is nonzero.
struct PowerTable<'a, S: Scalar> {
    inner: &'a TruncatedMap<S>,
    degree: usize,
    cache: HashMap<Multiindex, TruncatedSeries<S>>,
}

impl<'a, S: Scalar> PowerTable<'a, S> {
    fn new(inner: &'a TruncatedMap<S>, degree: usize) -> Self {
        PowerTable {
            inner,
            degree,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, q: &Multiindex) -> &TruncatedSeries<S> {
        if !self.cache.contains_key(q) {
            let value = self.compute(q);
            self.cache.insert(q.clone(), value);
        }
        &self.cache[q]
    }

    fn compute(&mut self, q: &Multiindex) -> TruncatedSeries<S> {
        let n = self.inner.n();
        let first = &self.inner.components[0];
        if q.is_zero() {
            return TruncatedSeries::constant(n, first.degree(), S::one(first.ctx()), first.ctx());
        }
        let a = (0..n).rev().find(|&a| q[a] > 0).expect("nonzero multiindex");
        let prev = q.checked_sub(&Multiindex::unit(n, a)).expect("divides");
        let degree = self.degree;
        let ga = self.inner.components[a].clone();
        let base = self.get(&prev);
        base.mul_to(&ga, degree)
    }
}

impl<S: Scalar> TruncatedMap<S> {
    pub fn new(components: Vec<TruncatedSeries<S>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::Invalid("a map needs at least one component".into()));
        }
        for c in &components {
            components[0].check_compatible(c)?;
            if c.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.n(),
                });
            }
        }
        Ok(TruncatedMap { components })
    }

    /// The monomials `self^Q` (`Q` in `qs`), truncated at degree `d`.
    pub(crate) fn powers(&self, qs: &[Multiindex], d: usize) -> Vec<TruncatedSeries<S>> {
        let mut table = PowerTable::new(self, d);
        qs.iter().map(|q| table.get(q).clone()).collect()
    }

    pub fn identity(n: usize, degree: usize, ctx: &S::Ctx) -> Self {
        TruncatedMap {
            components: (0..n)
                .map(|a| TruncatedSeries::variable(n, a, degree, ctx))
                .collect(),
        }
    }

    pub fn zero(n: usize, degree: usize, ctx: &S::Ctx) -> Self {
        TruncatedMap {
            components: (0..n)
                .map(|_| TruncatedSeries::zero(n, degree, ctx))
                .collect(),
        }
    }

    /// The linear map `z -> M z`.
    pub fn linear(m: &Matrix<S>, degree: usize, ctx: &S::Ctx) -> Self {
        TruncatedMap {
            components: m.linear_forms(degree, ctx),
        }
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> usize {
        self.components[0].degree()
    }

    pub fn ctx(&self) -> &S::Ctx {
        self.components[0].ctx()
    }

    pub fn components(&self) -> &[TruncatedSeries<S>] {
        &self.components
    }

    /// Component `j` (0-based).
    pub fn component(&self, j: usize) -> &TruncatedSeries<S> {
        &self.components[j]
    }

    pub fn component_mut(&mut self, j: usize) -> &mut TruncatedSeries<S> {
        &mut self.components[j]
    }

    /// Coefficient of `x^Q` in component `j` (0-based).
    pub fn coeff(&self, q: &Multiindex, j: usize) -> S {
        self.components[j].coeff(q)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        self.components[0].check_compatible(&other.components[0])
    }

    /// Degree-1 coefficients as a matrix: entry `(j, a)` is `{F_j}_{E_a}`.
    pub fn linear_part(&self) -> Matrix<S> {
        let n = self.n();
        let mut m = Matrix::zeros(n, self.ctx());
        for (j, c) in self.components.iter().enumerate() {
            for a in 0..n {
                m.set(j, a, c.coeff(&Multiindex::unit(n, a)));
            }
        }
        m
    }

    /// Terms of degree `>= 2`.
    pub fn nonlinear_part(&self) -> Self {
        self.map_components(|c| c.filter(|q| q.degree() >= 2))
    }

    pub fn has_zero_constant(&self) -> bool {
        let zero = Multiindex::zeros(self.n());
        self.components.iter().all(|c| c.get(&zero).is_none())
    }

    pub fn map_components<F: Fn(&TruncatedSeries<S>) -> TruncatedSeries<S>>(&self, f: F) -> Self {
        TruncatedMap {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TruncatedMap {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add_unchecked(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TruncatedMap {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub_unchecked(b))
                .collect(),
        })
    }

    /// `F ∘ G` modulo degree `N + 1`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_compatible(inner)?;
        if !inner.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(self.compose_to(inner, self.degree()))
    }

    /// `F ∘ G` keeping only degrees `<= d`. The inner map must have zero
    /// constant term.
    pub(crate) fn compose_to(&self, inner: &Self, d: usize) -> Self {
        let mut table = PowerTable::new(inner, d);
        TruncatedMap {
            components: self
                .components
                .iter()
                .map(|c| substitute(c, &mut table, d))
                .collect(),
        }
    }

    /// Composes a single series with `self`: `s ∘ self`.
    pub fn substitute_into(&self, s: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
        self.components[0].check_compatible(s)?;
        if !self.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut table = PowerTable::new(self, self.degree());
        Ok(substitute(s, &mut table, self.degree()))
    }

    /// Compositional inverse modulo degree `N + 1`, by the fixed point
    /// `H = L^{-1}(Id - f∘H)` where `F = L + f`.
    pub fn invert(&self) -> Result<Self> {
        if !self.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        let ctx = self.ctx().clone();
        let n = self.n();
        let degree = self.degree();
        let linv = self
            .linear_part()
            .inverse(&ctx)
            .ok_or(Error::SingularLinearPart)?;
        let f = self.nonlinear_part();
        let mut h = TruncatedMap::linear(&linv, degree, &ctx);
        for d in 2..=degree {
            let fh = f.compose_to(&h, d);
            let ident = TruncatedMap::identity(n, degree, &ctx);
            let rhs: Vec<_> = ident
                .components
                .iter()
                .zip(&fh.components)
                .map(|(a, b)| a.sub_unchecked(b))
                .collect();
            h = TruncatedMap {
                components: linv.apply(&rhs),
            };
        }
        Ok(h)
    }

    /// Entrywise conjugation of every coefficient.
    pub fn conjugate_coefficients(&self) -> Self {
        self.map_components(TruncatedSeries::conjugate_coefficients)
    }

    /// Keeps exactly the coefficients `(Q, j)` in `target` with `|Q| >= 2`.
    pub fn project(&self, target: &CoefficientSet) -> Self {
        TruncatedMap {
            components: self
                .components
                .iter()
                .enumerate()
                .map(|(j, c)| c.filter(|q| target.contains(q, j)))
                .collect(),
        }
    }

    pub fn truncate(&self, d: usize) -> Self {
        self.map_components(|c| c.truncate(d))
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        self.map_components(|c| c.with_degree(degree))
    }

    pub fn homogeneous(&self, d: usize) -> Self {
        self.map_components(|c| c.homogeneous(d))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncatedSeries::is_zero)
    }

    /// Zero in exact mode; every coefficient below ε in float mode.
    pub fn is_negligible(&self) -> bool {
        self.components.iter().all(TruncatedSeries::is_negligible)
    }

    pub fn max_abs(&self, precision: usize) -> Float {
        self.components
            .iter()
            .map(|c| c.max_abs(precision))
            .fold(crate::scalar::float_zero(precision), |a, b| if b > a { b } else { a })
    }

    /// `x -> F(diag(scales) x)`.
    pub fn scale_variables(&self, scales: &[S]) -> Self {
        self.map_components(|c| c.scale_variables(scales))
    }

    /// Left multiplication by a matrix: `x -> M F(x)`.
    pub fn left_mul(&self, m: &Matrix<S>) -> Self {
        TruncatedMap {
            components: m.apply(&self.components),
        }
    }

    /// All nonzero coefficients as `(Q, j, c)`, component-major.
    pub fn coefficients(&self) -> impl Iterator<Item = (&Multiindex, usize, &S)> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.terms().map(move |(q, v)| (q, j, v)))
    }
}

fn substitute<S: Scalar>(
    series: &TruncatedSeries<S>,
    table: &mut PowerTable<'_, S>,
    d: usize,
) -> TruncatedSeries<S> {
    let mut acc: BTreeMap<Multiindex, S> = BTreeMap::new();
    for (q, c) in series.terms() {
        if q.degree() > d {
            continue;
        }
        let power = table.get(q);
        for (p, v) in power.terms() {
            let term = c.mul(v);
            match acc.get_mut(p) {
                Some(x) => *x = x.add(&term),
                None => {
                    acc.insert(p.clone(), term);
                }
            }
        }
    }
    TruncatedSeries::from_terms(series.n(), series.degree(), series.ctx(), acc)
        .expect("dimensions agree")
}

impl<S: Scalar> std::fmt::Debug for TruncatedMap<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.components.iter()).finish()
    }
}
