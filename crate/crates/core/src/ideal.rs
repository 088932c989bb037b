//! Monomial ideals of `O_n`, given by minimal generators.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::powerseries::{Matrix, Multiindex, TruncatedMap};
use crate::scalar::Scalar;

/// Ideal generated by monomials `x^R`. The empty generator list is the zero
/// ideal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<Multiindex>,
}

impl MonomialIdeal {
    /// Builds the ideal, keeping only divisibility-minimal generators in
    /// lexicographic order.
    pub fn new(n: usize, generators: Vec<Multiindex>) -> Result<Self> {
        for g in &generators {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.len(),
                });
            }
        }
        Ok(MonomialIdeal {
            n,
            generators: minimalize(generators),
        })
    }

    pub fn from_exponents(n: usize, generators: &[Vec<u32>]) -> Result<Self> {
        Self::new(n, generators.iter().cloned().map(Multiindex::new).collect())
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal {
            n,
            generators: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Multiindex] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// `x^Q ∈ I` iff some generator divides `Q`.
    pub fn member(&self, q: &Multiindex) -> bool {
        self.generators.iter().any(|g| g.divides(q))
    }

    /// The variables (0-based) absent from every generator, when there are any.
    /// The zero ideal involves no variable, so it returns all of them.
    pub fn properly_embedded(&self) -> Option<Vec<usize>> {
        let used: BTreeSet<usize> = self.generators.iter().flat_map(|g| g.support()).collect();
        let s: Vec<usize> = (0..self.n).filter(|a| !used.contains(a)).collect();
        if s.is_empty() {
            None
        } else {
            Some(s)
        }
    }

    /// `V(I) = ∩_R ∪_{a ∈ supp R} {z_a = 0}`, one union of coordinate indices
    /// per generator. Empty for the zero ideal (`V = C^n`).
    pub fn variety_unions(&self) -> Vec<Vec<usize>> {
        self.generators.iter().map(|g| g.support().collect()).collect()
    }

    /// Irreducible components of `V(I)`: minimal coordinate sets `T` meeting
    /// every generator support, each giving the subspace `{z_a = 0, a ∈ T}`.
    pub fn variety_components(&self) -> Vec<Vec<usize>> {
        if self.generators.iter().any(Multiindex::is_zero) {
            return Vec::new();
        }
        let supports: Vec<Vec<usize>> = self.variety_unions();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for mask in 0u64..(1u64 << self.n) {
            let hits = supports
                .iter()
                .all(|s| s.iter().any(|&a| mask & (1 << a) != 0));
            if !hits {
                continue;
            }
            let t: Vec<usize> = (0..self.n).filter(|&a| mask & (1 << a) != 0).collect();
            out.push(t);
        }
        let minimal: Vec<Vec<usize>> = out
            .iter()
            .filter(|t| {
                !out.iter()
                    .any(|u| u.len() < t.len() && u.iter().all(|a| t.contains(a)))
            })
            .cloned()
            .collect();
        let mut minimal = minimal;
        minimal.sort();
        minimal
    }

    /// Checks one of the compatibility conditions between `I` and a linear map
    /// `B`, on every monomial of degree `<= degree`.
    pub fn check_linear_map<S: Scalar>(
        &self,
        b: &Matrix<S>,
        degree: usize,
        check: CompatibilityCheck,
        ctx: &S::Ctx,
    ) -> Result<CompatibilityReport> {
        if b.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.n(),
            });
        }
        if b.inverse(ctx).is_none() {
            return Err(Error::SingularMatrix);
        }
        let witness = match check {
            CompatibilityCheck::LinearInvariance => {
                let gens: Vec<Multiindex> = self
                    .generators
                    .iter()
                    .filter(|g| g.degree() <= degree)
                    .cloned()
                    .collect();
                let map = TruncatedMap::linear(b, degree, ctx);
                let images = map.powers(&gens, degree);
                gens.iter().zip(&images).find_map(|(g, img)| {
                    img.terms()
                        .find(|(p, c)| !c.is_negligible(ctx) && !self.member(p))
                        .map(|(p, _)| Witness {
                            monomial: g.to_vec(),
                            image_monomial: p.to_vec(),
                        })
                })
            }
            CompatibilityCheck::RhoCompatibility => {
                // (B z̄)^Q = conj((B̄ z)^Q): compare supports of (B̄ z)^Q with I.
                let qs = Multiindex::range(self.n, 1, degree);
                let map = TruncatedMap::linear(&b.conj(), degree, ctx);
                let images = map.powers(&qs, degree);
                qs.iter().zip(&images).find_map(|(q, img)| {
                    let inside = self.member(q);
                    img.terms()
                        .find(|(p, c)| !c.is_negligible(ctx) && self.member(p) != inside)
                        .map(|(p, _)| Witness {
                            monomial: q.to_vec(),
                            image_monomial: p.to_vec(),
                        })
                })
            }
        };
        Ok(CompatibilityReport {
            check,
            holds: witness.is_none(),
            witness,
        })
    }

    /// Both compatibility checks at once.
    pub fn invariance_and_compatibility<S: Scalar>(
        &self,
        b: &Matrix<S>,
        degree: usize,
        ctx: &S::Ctx,
    ) -> Result<[CompatibilityReport; 2]> {
        Ok([
            self.check_linear_map(b, degree, CompatibilityCheck::LinearInvariance, ctx)?,
            self.check_linear_map(b, degree, CompatibilityCheck::RhoCompatibility, ctx)?,
        ])
    }

    pub fn to_literal(&self) -> Vec<Vec<u32>> {
        self.generators.iter().map(Multiindex::to_vec).collect()
    }
}

fn minimalize(mut gens: Vec<Multiindex>) -> Vec<Multiindex> {
    gens.sort();
    gens.dedup();
    let minimal: Vec<Multiindex> = gens
        .iter()
        .filter(|g| !gens.iter().any(|h| h != *g && h.divides(g)))
        .cloned()
        .collect();
    minimal
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "(0)");
        }
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{g:?}")).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Serialize for MonomialIdeal {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_literal().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompatibilityCheck {
    /// `f ∈ I ⇒ f(Bz) ∈ I`.
    LinearInvariance,
    /// `z -> B z̄` pulls `Î` into `conj(Î)` and its monomial complement into
    /// the conjugate complement.
    RhoCompatibility,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub monomial: Vec<u32>,
    pub image_monomial: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    pub check: CompatibilityCheck,
    pub holds: bool,
    pub witness: Option<Witness>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactCtx, GaussianRational as G};

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn m(q: &[u32]) -> Multiindex {
        Multiindex::new(q.to_vec())
    }

    #[test]
    fn membership() {
        let i = ideal(2, &[&[1, 1]]);
        assert!(i.member(&m(&[2, 1])));
        assert!(!i.member(&m(&[0, 2])));
        assert!(!MonomialIdeal::zero(2).member(&m(&[3, 3])));
    }

    #[test]
    fn minimal_generators() {
        let i = ideal(2, &[&[2, 1], &[1, 1], &[1, 1], &[0, 3]]);
        assert_eq!(i.generators(), &[m(&[0, 3]), m(&[1, 1])]);
        let j = ideal(2, &[&[0, 3], &[1, 1]]);
        assert_eq!(i, j);
    }

    #[test]
    fn properly_embedded() {
        assert_eq!(ideal(4, &[&[1, 1, 0, 0]]).properly_embedded(), Some(vec![2, 3]));
        assert_eq!(ideal(2, &[&[1, 1]]).properly_embedded(), None);
        assert_eq!(MonomialIdeal::zero(2).properly_embedded(), Some(vec![0, 1]));
    }

    #[test]
    fn variety() {
        let i = ideal(3, &[&[1, 1, 0], &[0, 0, 2]]);
        assert_eq!(i.variety_unions(), vec![vec![2], vec![0, 1]]);
        assert_eq!(i.variety_components(), vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn compatibility_checks() {
        let ctx = ExactCtx::default();
        let i = ideal(2, &[&[1, 1]]);
        let diag = Matrix::diagonal(vec![G::from_i64(2, 1), G::from_i64(0, 3)], &ctx);
        for r in i.invariance_and_compatibility(&diag, 5, &ctx).unwrap() {
            assert!(r.holds);
        }
        let zero = G::zero(&ctx);
        let one = G::one(&ctx);
        let swap = Matrix::from_rows(vec![vec![zero.clone(), one.clone()], vec![one.clone(), zero.clone()]]).unwrap();
        for r in i.invariance_and_compatibility(&swap, 5, &ctx).unwrap() {
            assert!(r.holds);
        }
        let shear = Matrix::from_rows(vec![vec![one.clone(), one.clone()], vec![zero.clone(), one.clone()]]).unwrap();
        let x1 = ideal(2, &[&[1, 0]]);
        let r = x1
            .check_linear_map(&shear, 3, CompatibilityCheck::LinearInvariance, &ctx)
            .unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().image_monomial, vec![0, 1]);
        let singular = Matrix::from_rows(vec![vec![one.clone(), one.clone()], vec![one.clone(), one]]).unwrap();
        assert!(matches!(
            x1.check_linear_map(&singular, 3, CompatibilityCheck::LinearInvariance, &ctx),
            Err(Error::SingularMatrix)
        ));
    }
}
