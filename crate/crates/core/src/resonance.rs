//! Eigenvalue families, small divisors `δ^i_{Q,j} = μ_i^Q - μ_{i,j}`, resonant
//! monomials, invariant monomials and the resonant ideal.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::powerseries::{CoefficientSet, Matrix, Multiindex, TruncatedMap};
use crate::scalar::{Mode, Scalar};

/// Diagonal linear parts `D_i = diag(μ_{i,1}, ..., μ_{i,n})`, `i = 1..l`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalFamily<S: Scalar> {
    n: usize,
    mu: Vec<Vec<S>>,
    ctx: S::Ctx,
}

/// `δ^i_{Q,j}` for every member `i`, with the largest modulus and the first
/// index attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct Delta<S: Scalar> {
    pub values: Vec<S>,
    /// `max_i |δ^i_{Q,j}|²`.
    pub max_norm_sqr: S::Real,
    /// Smallest `i` (0-based) with `|δ^i_{Q,j}|` maximal.
    pub argmax: usize,
    /// Every `i` whose modulus ties the maximum (0-based).
    pub tied: Vec<usize>,
}

impl<S: Scalar> Delta<S> {
    pub fn vanishes(&self, ctx: &S::Ctx) -> bool {
        S::real_is_negligible(&self.max_norm_sqr, ctx)
    }
}

impl<S: Scalar> DiagonalFamily<S> {
    pub fn new(mu: Vec<Vec<S>>, ctx: &S::Ctx) -> Result<Self> {
        let n = mu.first().map(Vec::len).unwrap_or(0);
        if mu.is_empty() || n == 0 {
            return Err(Error::Invalid("empty eigenvalue family".into()));
        }
        for (i, row) in mu.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if row.iter().any(|m| m.is_negligible(ctx)) {
                return Err(Error::ZeroEigenvalue { index: i + 1 });
            }
        }
        Ok(DiagonalFamily {
            n,
            mu,
            ctx: ctx.clone(),
        })
    }

    /// Reads `D_i` off the linear parts of a family of maps.
    pub fn from_maps(maps: &[TruncatedMap<S>]) -> Result<Self> {
        let first = maps
            .first()
            .ok_or_else(|| Error::Invalid("empty family".into()))?;
        let ctx = first.ctx().clone();
        let mut mu = Vec::with_capacity(maps.len());
        for (i, f) in maps.iter().enumerate() {
            first.check_compatible(f)?;
            let lin = f.linear_part();
            if !lin.is_diagonal(&ctx) {
                return Err(Error::NonDiagonalLinearPart { index: i + 1 });
            }
            mu.push(lin.diagonal_entries());
        }
        Self::new(mu, &ctx)
    }

    pub fn from_matrices(ds: &[Matrix<S>], ctx: &S::Ctx) -> Result<Self> {
        let mut mu = Vec::with_capacity(ds.len());
        for (i, d) in ds.iter().enumerate() {
            if !d.is_diagonal(ctx) {
                return Err(Error::NonDiagonalLinearPart { index: i + 1 });
            }
            mu.push(d.diagonal_entries());
        }
        Self::new(mu, ctx)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of members `l`.
    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    /// `μ_{i,j}` (0-based).
    pub fn mu(&self, i: usize, j: usize) -> &S {
        &self.mu[i][j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.mu[i]
    }

    pub fn matrix(&self, i: usize) -> Matrix<S> {
        Matrix::diagonal(self.mu[i].clone(), &self.ctx)
    }

    /// `μ_i^Q`.
    pub fn mu_power(&self, i: usize, q: &Multiindex) -> S {
        let mut acc = S::one(&self.ctx);
        for (a, &e) in q.as_slice().iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&self.mu[i][a].pow(e, &self.ctx));
            }
        }
        acc
    }

    /// `δ^i_{Q,j}` for all `i`, given precomputed `μ_i^Q`.
    pub fn delta_from_powers(&self, powers: &[S], j: usize) -> Delta<S> {
        let values: Vec<S> = powers
            .iter()
            .zip(&self.mu)
            .map(|(p, row)| p.sub(&row[j]))
            .collect();
        let norms: Vec<S::Real> = values.iter().map(S::norm_sqr).collect();
        let mut argmax = 0;
        for (i, v) in norms.iter().enumerate().skip(1) {
            if *v > norms[argmax] {
                argmax = i;
            }
        }
        let max = norms[argmax].clone();
        let tied = norms
            .iter()
            .enumerate()
            .filter(|(_, v)| S::reals_tied(v, &max, &self.ctx))
            .map(|(i, _)| i)
            .collect();
        Delta {
            values,
            max_norm_sqr: max,
            argmax,
            tied,
        }
    }

    /// `δ^i_{Q,j} = μ_i^Q - μ_{i,j}` (0-based `j`).
    pub fn delta(&self, q: &Multiindex, j: usize) -> Delta<S> {
        let powers: Vec<S> = (0..self.len()).map(|i| self.mu_power(i, q)).collect();
        self.delta_from_powers(&powers, j)
    }

    /// `(Q, j)` is resonant when every `δ^i_{Q,j}` vanishes.
    pub fn is_resonant(&self, q: &Multiindex, j: usize) -> bool {
        self.delta(q, j).vanishes(&self.ctx)
    }

    /// `μ_i^Q = 1` for every `i`.
    pub fn is_invariant(&self, q: &Multiindex) -> bool {
        let one = S::one(&self.ctx);
        (0..self.len()).all(|i| self.mu_power(i, q).sub(&one).is_negligible(&self.ctx))
    }

    /// Every resonant pair `(Q, j)` with `2 <= |Q| <= degree`, ordered by degree,
    /// then `Q`, then `j`.
    pub fn resonant_pairs(&self, degree: usize) -> Vec<(Multiindex, usize)> {
        let shells: Vec<Vec<(Multiindex, usize)>> = (2..=degree.max(1))
            .into_par_iter()
            .map(|d| {
                Multiindex::shell(self.n, d)
                    .into_iter()
                    .flat_map(|q| {
                        let powers: Vec<S> = (0..self.len()).map(|i| self.mu_power(i, &q)).collect();
                        (0..self.n)
                            .filter(|&j| self.delta_from_powers(&powers, j).vanishes(&self.ctx))
                            .map(|j| (q.clone(), j))
                            .collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        shells.into_iter().flatten().collect()
    }

    /// The monomial vectors `x^Q e_j` spanning the centralizer `C_D` up to
    /// `degree`, as a coefficient set.
    pub fn centralizer_set(&self, degree: usize) -> BTreeSet<(Multiindex, usize)> {
        self.resonant_pairs(degree).into_iter().collect()
    }

    /// Divisibility-minimal `R` with `1 <= |R| <= degree` and `μ_i^R = 1` for
    /// all `i`.
    pub fn invariant_generators(&self, degree: usize) -> InvariantGenerators {
        let shells: Vec<Vec<Multiindex>> = (1..=degree.max(1))
            .into_par_iter()
            .map(|d| {
                Multiindex::shell(self.n, d)
                    .into_iter()
                    .filter(|q| self.is_invariant(q))
                    .collect()
            })
            .collect();
        let solutions: Vec<Multiindex> = shells.into_iter().flatten().collect();
        let generators: Vec<Multiindex> = solutions
            .iter()
            .filter(|q| !solutions.iter().any(|p| p != *q && p.divides(q)))
            .cloned()
            .collect();
        let solution_set: BTreeSet<&Multiindex> = solutions.iter().collect();
        // A solution of top degree that is not a sum of two smaller solutions is
        // a new semigroup generator, hinting at more beyond the cutoff.
        let cutoff_limited = solutions.iter().filter(|q| q.degree() == degree).any(|q| {
            !q.divisors().iter().any(|p| {
                !p.is_zero()
                    && p != q
                    && solution_set.contains(p)
                    && solution_set.contains(&q.checked_sub(p).expect("divisor"))
            })
        });
        let mut generators = generators;
        generators.sort();
        InvariantGenerators {
            generators,
            cutoff_limited,
        }
    }

    /// Resonant pairs, invariant generators, the resonant ideal and whether it
    /// contains every resonant monomial.
    pub fn centralizer_report(&self, degree: usize) -> ResonanceReport {
        let resonant_pairs = self.resonant_pairs(degree);
        let inv = self.invariant_generators(degree);
        let res_ideal =
            MonomialIdeal::new(self.n, inv.generators.clone()).expect("generators have length n");
        let centralizer_generated = resonant_pairs.iter().all(|(q, _)| res_ideal.member(q));
        let mut warnings = Vec::new();
        let epsilon = if S::MODE == Mode::Float {
            let eps = format!("2^-{}", S::tolerance_bits(&self.ctx));
            for (q, j) in &resonant_pairs {
                warnings.push(format!(
                    "Q={:?}, j={}: resonant within ε = {eps}",
                    q.as_slice(),
                    j + 1
                ));
            }
            for r in &inv.generators {
                warnings.push(format!("R={:?}: invariant within ε = {eps}", r.as_slice()));
            }
            Some(eps)
        } else {
            None
        };
        if inv.cutoff_limited {
            warnings.push(format!(
                "new invariant monomials appear at the cutoff degree {degree}; generators may be incomplete"
            ));
        }
        ResonanceReport {
            degree,
            resonant_pairs,
            invariant_generators: inv.generators,
            res_ideal,
            centralizer_generated,
            cutoff_limited: inv.cutoff_limited,
            mode: S::MODE,
            epsilon,
            warnings,
        }
    }

    /// `C_D` up to `degree` as a coefficient set for projections.
    pub fn centralizer_coefficients(&self, degree: usize) -> CoefficientSet {
        CoefficientSet::Listed(self.centralizer_set(degree))
    }

    /// Squared moduli `|μ_{i,j}|²` rendered for reports.
    pub fn render(&self) -> Vec<Vec<(String, String)>> {
        self.mu
            .iter()
            .map(|row| row.iter().map(S::to_literal).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantGenerators {
    pub generators: Vec<Multiindex>,
    pub cutoff_limited: bool,
}

#[derive(Clone, Debug)]
pub struct ResonanceReport {
    pub degree: usize,
    /// `(Q, j)` with 0-based `j`.
    pub resonant_pairs: Vec<(Multiindex, usize)>,
    pub invariant_generators: Vec<Multiindex>,
    pub res_ideal: MonomialIdeal,
    pub centralizer_generated: bool,
    pub cutoff_limited: bool,
    pub mode: Mode,
    /// Tolerance used for zero tests in float mode.
    pub epsilon: Option<String>,
    pub warnings: Vec<String>,
}

impl ResonanceReport {
    pub fn resonant_set(&self) -> BTreeSet<(Multiindex, usize)> {
        self.resonant_pairs.iter().cloned().collect()
    }
}

#[derive(Serialize)]
struct PairView {
    q: Vec<u32>,
    j: usize,
}

impl Serialize for ResonanceReport {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let pairs: Vec<PairView> = self
            .resonant_pairs
            .iter()
            .map(|(q, j)| PairView {
                q: q.to_vec(),
                j: j + 1,
            })
            .collect();
        let gens: Vec<Vec<u32>> = self.invariant_generators.iter().map(Multiindex::to_vec).collect();
        let mut st = s.serialize_struct("ResonanceReport", 9)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("mode", &self.mode)?;
        st.serialize_field("epsilon", &self.epsilon)?;
        st.serialize_field("resonant_pairs", &pairs)?;
        st.serialize_field("invariant_generators", &gens)?;
        st.serialize_field("res_ideal", &self.res_ideal)?;
        st.serialize_field("centralizer_generated", &self.centralizer_generated)?;
        st.serialize_field("cutoff_limited", &self.cutoff_limited)?;
        st.serialize_field("warnings", &self.warnings)?;
        st.end()
    }
}
