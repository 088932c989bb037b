//! Degree-by-degree construction of `Φ` and `G_i` with `F_i ∘ Φ = Φ ∘ G_i`,
//! `G_i - D_i` supported in a monomial ideal, and verification of the result.
//!
//! Writing `Φ = Id + φ` and `G_i = D_i + g_i`, the coefficient of `y^Q` in
//! component `j` satisfies
//!
//! ```text
//! δ^i_{Q,j} φ_{j,Q} + g_{i,j,Q} = { f_{i,j}(Φ) - (φ_j(G_i) - φ_j(D_i y)) }_Q
//! ```
//!
//! where the right-hand side only involves coefficients of degree `< |Q|`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{CompatibilityCheck, MonomialIdeal};
use crate::powerseries::{CoefficientSet, Matrix, Multiindex, TruncatedMap};
use crate::resonance::{DiagonalFamily, ResonanceReport};
use crate::scalar::{float_zero, render_float, Float, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    /// Fail on the first resonant obstruction outside the ideal.
    Strict,
    /// Keep resonant terms in `g` (a normal form rather than a linearization).
    #[serde(rename = "normalform")]
    NormalForm,
}

/// Which branch of the induction fixed a cell `(Q, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellCase {
    /// `x^Q ∉ I`, some `δ^i_{Q,j} ≠ 0`: `φ_{j,Q} = RHS(i₀)/δ^{i₀}_{Q,j}`.
    Removable,
    /// `x^Q ∉ I`, every `δ^i_{Q,j} = 0`.
    ResonantOffIdeal,
    /// `x^Q ∈ I`: `φ_{j,Q} = 0`, `g_{i,j,Q} = RHS(i)`.
    InIdeal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry<S: Scalar> {
    pub q: Multiindex,
    /// 0-based component.
    pub j: usize,
    pub case: CellCase,
    /// 0-based `i₀`, for removable cells.
    pub pivot: Option<usize>,
    /// `δ^{i₀}_{Q,j}`, for removable cells.
    pub divisor: Option<S>,
    /// Members (0-based) tying `max_i |δ^i_{Q,j}|`.
    pub tied: Vec<usize>,
}

/// A nonzero right-hand side at a resonant cell outside the ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionRecord<S: Scalar> {
    pub q: Multiindex,
    pub j: usize,
    /// 0-based member whose right-hand side is reported.
    pub member: usize,
    pub coefficient: S,
}

/// A removable cell where members disagree on `φ_{j,Q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncompatibilityRecord<S: Scalar> {
    pub q: Multiindex,
    pub j: usize,
    pub pivot: usize,
    pub member: usize,
    pub residual: S,
}

#[derive(Clone, Debug)]
pub struct LinearizationResult<S: Scalar> {
    pub phi: TruncatedMap<S>,
    pub g: Vec<TruncatedMap<S>>,
    pub trace: Vec<TraceEntry<S>>,
    /// Resonant terms kept in normal-form mode.
    pub obstructions: Vec<ObstructionRecord<S>>,
    /// Disagreements absorbed into `g` in normal-form mode.
    pub incompatibilities: Vec<IncompatibilityRecord<S>>,
    pub mode: SolveMode,
    pub degree: usize,
}

/// Whether `F_i ∘ F_k = F_k ∘ F_i` modulo degree `N + 1` for all pairs.
pub fn check_commuting<S: Scalar>(family: &[TruncatedMap<S>]) -> Result<bool> {
    for (a, f) in family.iter().enumerate() {
        for h in &family[a + 1..] {
            let lhs = f.compose(h)?;
            let rhs = h.compose(f)?;
            if !lhs.sub(&rhs)?.is_negligible() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Degree-`d` parts of `f_i ∘ Φ` and `φ ∘ G_i - φ ∘ D_i`, from data of degree `< d`.
struct DegreeData<S: Scalar> {
    a: TruncatedMap<S>,
    b: TruncatedMap<S>,
}

fn degree_data<S: Scalar>(
    f: &TruncatedMap<S>,
    mu: &[S],
    phi: &TruncatedMap<S>,
    g: &TruncatedMap<S>,
    d: usize,
) -> DegreeData<S> {
    let a = f.nonlinear_part().compose_to(phi, d).homogeneous(d);
    let small = phi.nonlinear_part();
    let ghat = g.nonlinear_part();
    let b = if ghat.is_zero() || small.is_zero() {
        TruncatedMap::zero(phi.n(), phi.degree(), phi.ctx())
    } else {
        let full = small.compose_to(g, d).homogeneous(d);
        let lin = small.scale_variables(mu).homogeneous(d);
        full.sub(&lin).expect("compatible maps")
    };
    DegreeData { a, b }
}

/// The three-case induction on `2 <= |Q| <= N`.
pub fn linearize_on_ideal<S: Scalar>(
    family: &[TruncatedMap<S>],
    ideal: &MonomialIdeal,
    mode: SolveMode,
) -> Result<LinearizationResult<S>> {
    let first = family
        .first()
        .ok_or_else(|| Error::Invalid("empty family".into()))?;
    for f in family {
        first.check_compatible(f)?;
        if !f.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
    }
    let n = first.n();
    let degree = first.degree();
    let ctx = first.ctx().clone();
    if ideal.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: ideal.n(),
        });
    }
    let dfam = DiagonalFamily::from_maps(family)?;
    if !check_commuting(family)? {
        return Err(Error::NotCommuting { degree });
    }
    let l = family.len();

    let mut phi = TruncatedMap::identity(n, degree, &ctx);
    let mut g: Vec<TruncatedMap<S>> = (0..l)
        .map(|i| TruncatedMap::linear(&dfam.matrix(i), degree, &ctx))
        .collect();
    let mut trace = Vec::new();
    let mut obstructions = Vec::new();
    let mut incompatibilities = Vec::new();

    for d in 2..=degree {
        let data: Vec<DegreeData<S>> = (0..l)
            .into_par_iter()
            .map(|i| degree_data(&family[i], dfam.row(i), &phi, &g[i], d))
            .collect();
        let shell = Multiindex::shell(n, d);
        let cells: Vec<(Multiindex, usize)> = shell
            .iter()
            .flat_map(|q| (0..n).map(move |j| (q.clone(), j)))
            .collect();
        let solved: Vec<Result<Cell<S>>> = cells
            .par_iter()
            .map(|(q, j)| solve_cell(&dfam, ideal, &data, q, *j, mode))
            .collect();
        for cell in solved {
            let cell = cell?;
            if let Some(v) = &cell.phi {
                phi.component_mut(cell.entry.j).set(cell.entry.q.clone(), v.clone());
            }
            for (i, v) in cell.g.iter().enumerate() {
                if let Some(v) = v {
                    g[i].component_mut(cell.entry.j).set(cell.entry.q.clone(), v.clone());
                }
            }
            if let Some(o) = cell.obstruction {
                if mode == SolveMode::Strict {
                    let (re, im) = o.coefficient.to_literal();
                    return Err(Error::Obstruction {
                        multiindex: o.q.to_vec(),
                        component: o.j + 1,
                        coefficient: format_literal(&re, &im),
                    });
                }
                obstructions.push(o);
            }
            for inc in cell.incompatibilities {
                if mode == SolveMode::Strict {
                    return Err(Error::Incompatible {
                        multiindex: inc.q.to_vec(),
                        component: inc.j + 1,
                        first: inc.pivot + 1,
                        second: inc.member + 1,
                    });
                }
                incompatibilities.push(inc);
            }
            trace.push(cell.entry);
        }
    }
    Ok(LinearizationResult {
        phi,
        g,
        trace,
        obstructions,
        incompatibilities,
        mode,
        degree,
    })
}

fn format_literal(re: &str, im: &str) -> String {
    if im == "0" {
        re.to_string()
    } else {
        format!("{re} + {im}i")
    }
}

struct Cell<S: Scalar> {
    entry: TraceEntry<S>,
    phi: Option<S>,
    g: Vec<Option<S>>,
    obstruction: Option<ObstructionRecord<S>>,
    incompatibilities: Vec<IncompatibilityRecord<S>>,
}

fn solve_cell<S: Scalar>(
    dfam: &DiagonalFamily<S>,
    ideal: &MonomialIdeal,
    data: &[DegreeData<S>],
    q: &Multiindex,
    j: usize,
    mode: SolveMode,
) -> Result<Cell<S>> {
    let ctx = dfam.ctx();
    let l = data.len();
    let rhs: Vec<S> = data
        .iter()
        .map(|dd| dd.a.coeff(q, j).sub(&dd.b.coeff(q, j)))
        .collect();
    let mut cell = Cell {
        entry: TraceEntry {
            q: q.clone(),
            j,
            case: CellCase::InIdeal,
            pivot: None,
            divisor: None,
            tied: Vec::new(),
        },
        phi: None,
        g: vec![None; l],
        obstruction: None,
        incompatibilities: Vec::new(),
    };
    if ideal.member(q) {
        cell.g = rhs.into_iter().map(Some).collect();
        return Ok(cell);
    }
    if mode == SolveMode::Strict {
        if let Some(i) = data.iter().position(|dd| !dd.b.coeff(q, j).is_negligible(ctx)) {
            return Err(Error::Internal(format!(
                "φ∘G_{} - φ∘D_{} has a nonzero coefficient at Q={:?}, component {} outside the ideal",
                i + 1,
                i + 1,
                q.as_slice(),
                j + 1
            )));
        }
    }
    let delta = dfam.delta(q, j);
    if delta.vanishes(ctx) {
        cell.entry.case = CellCase::ResonantOffIdeal;
        cell.entry.tied = delta.tied;
        if let Some(i) = rhs.iter().position(|r| !r.is_negligible(ctx)) {
            cell.obstruction = Some(ObstructionRecord {
                q: q.clone(),
                j,
                member: i,
                coefficient: rhs[i].clone(),
            });
            cell.g = rhs.into_iter().map(Some).collect();
        }
        return Ok(cell);
    }
    let i0 = delta.argmax;
    let div = delta.values[i0].clone();
    let value = rhs[i0].mul(&div.inv().expect("nonzero divisor"));
    for (i, r) in rhs.iter().enumerate() {
        if i == i0 {
            continue;
        }
        let residual = r.sub(&delta.values[i].mul(&value));
        if !residual.is_negligible(ctx) {
            cell.incompatibilities.push(IncompatibilityRecord {
                q: q.clone(),
                j,
                pivot: i0,
                member: i,
                residual: residual.clone(),
            });
            cell.g[i] = Some(residual);
        }
    }
    cell.entry.case = CellCase::Removable;
    cell.entry.pivot = Some(i0);
    cell.entry.divisor = Some(div);
    cell.entry.tied = delta.tied;
    cell.phi = Some(value);
    Ok(cell)
}

/// Outcome of one verification check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    /// Largest coefficient modulus of the quantity that should vanish.
    pub residual: String,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TieBreakReport {
    /// Removable cells examined.
    pub cells_checked: usize,
    /// Cells where at least two members attain `max_i |δ^i_{Q,j}|`.
    pub tied_cells: usize,
    /// `(Q, j, i, i')` (1-based) whose quotients differ.
    pub mismatches: Vec<(Vec<u32>, usize, usize, usize)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoCheck {
    /// 1-based index of the involution.
    pub index: usize,
    pub hypotheses_hold: bool,
    /// First hypothesis that failed, if any.
    pub failed_hypothesis: Option<String>,
    /// `ρ∘Φ∘ρ = Φ`, when the hypotheses hold.
    pub pass: Option<bool>,
    pub residual: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub conjugacy: CheckOutcome,
    pub support: CheckOutcome,
    pub normalization: CheckOutcome,
    pub tie_break: TieBreakReport,
    pub rho: Vec<RhoCheck>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.conjugacy.pass
            && self.support.pass
            && self.normalization.pass
            && self.tie_break.pass
            && self.rho.iter().all(|r| r.pass != Some(false))
    }
}

fn residual_of<S: Scalar>(m: &TruncatedMap<S>) -> String {
    render_float(&m.max_abs(S::precision(m.ctx())))
}

/// The normalization set `I^n ∪ C_D` as coefficient pairs up to `degree`.
pub fn normalization_set(ideal: &MonomialIdeal, resonant: &BTreeSet<(Multiindex, usize)>, degree: usize) -> CoefficientSet {
    let n = ideal.n();
    let mut set = resonant.clone();
    for q in Multiindex::range(n, 2, degree) {
        if ideal.member(&q) {
            for j in 0..n {
                set.insert((q.clone(), j));
            }
        }
    }
    CoefficientSet::Listed(set)
}

/// Checks a linearization result against the family it came from.
///
/// `rhos` are the matrices `B` of linear anti-holomorphic involutions
/// `ρ(z) = B z̄`; for each one whose hypotheses hold, `ρ∘Φ∘ρ = Φ` is checked.
pub fn verify<S: Scalar>(
    result: &LinearizationResult<S>,
    family: &[TruncatedMap<S>],
    ideal: &MonomialIdeal,
    resonance: &ResonanceReport,
    rhos: &[Matrix<S>],
) -> Result<VerificationReport> {
    let dfam = DiagonalFamily::from_maps(family)?;
    let ctx = dfam.ctx().clone();
    let degree = result.degree;
    let phi = &result.phi;

    // (1) F_i ∘ Φ - Φ ∘ G_i.
    let mut worst = float_zero(S::precision(&ctx));
    let mut conj_ok = true;
    for (f, g) in family.iter().zip(&result.g) {
        let r = f.compose(phi)?.sub(&phi.compose(g)?)?;
        conj_ok &= r.is_negligible();
        let m = r.max_abs(S::precision(&ctx));
        if m > worst {
            worst = m;
        }
    }
    let conjugacy = CheckOutcome {
        name: "F_i∘Φ = Φ∘G_i".into(),
        pass: conj_ok,
        residual: render_float(&worst),
        detail: None,
    };

    // (2) G_i - D_i supported in I^n.
    let mut off = None;
    let mut worst = float_zero(S::precision(&ctx));
    for (i, g) in result.g.iter().enumerate() {
        let lin = TruncatedMap::linear(&dfam.matrix(i), degree, &ctx);
        let diff = g.sub(&lin)?;
        let outside = diff.map_components(|c| c.filter(|q| !ideal.member(q)));
        let m = outside.max_abs(S::precision(&ctx));
        if m > worst {
            worst = m;
        }
        if off.is_none() && !outside.is_negligible() {
            let (q, j, _) = outside.coefficients().next().expect("nonzero");
            off = Some(format!("G_{} has a term at Q={:?}, component {}", i + 1, q.as_slice(), j + 1));
        }
    }
    let support = CheckOutcome {
        name: "G_i - D_i ∈ I^n".into(),
        pass: off.is_none(),
        residual: render_float(&worst),
        detail: off,
    };

    // (3) projection of Φ - Id on I^n ∪ C_D.
    let target = normalization_set(ideal, &resonance.resonant_set(), degree);
    let proj = phi.project(&target);
    let normalization = CheckOutcome {
        name: "proj_{I^n ∪ C_D}(Φ - Id) = 0".into(),
        pass: proj.is_negligible(),
        residual: residual_of(&proj),
        detail: proj
            .coefficients()
            .find(|(_, _, c)| !c.is_negligible(&ctx))
            .map(|(q, j, _)| format!("Q={:?}, component {}", q.as_slice(), j + 1)),
    };

    let tie_break = tie_break_check(result, family, &dfam, ideal)?;

    let rho = rhos
        .iter()
        .enumerate()
        .map(|(k, b)| rho_check(k, b, result, family, ideal, resonance))
        .collect::<Result<Vec<_>>>()?;

    Ok(VerificationReport {
        conjugacy,
        support,
        normalization,
        tie_break,
        rho,
    })
}

/// Recomputes, from the final `Φ` and `G_i`, every right-hand side at removable
/// cells and checks that all members with `δ^i_{Q,j} ≠ 0` give the same
/// quotient (and members with `δ^i_{Q,j} = 0` a vanishing right-hand side).
fn tie_break_check<S: Scalar>(
    result: &LinearizationResult<S>,
    family: &[TruncatedMap<S>],
    dfam: &DiagonalFamily<S>,
    ideal: &MonomialIdeal,
) -> Result<TieBreakReport> {
    let ctx = dfam.ctx();
    let n = dfam.n();
    let mut cells_checked = 0;
    let mut tied_cells = 0;
    let mut mismatches = Vec::new();
    for d in 2..=result.degree {
        let phi = result.phi.truncate(d - 1);
        let data: Vec<DegreeData<S>> = family
            .par_iter()
            .enumerate()
            .map(|(i, f)| degree_data(f, dfam.row(i), &phi, &result.g[i].truncate(d - 1), d))
            .collect();
        for q in Multiindex::shell(n, d) {
            if ideal.member(&q) {
                continue;
            }
            for j in 0..n {
                let delta = dfam.delta(&q, j);
                if delta.vanishes(ctx) {
                    continue;
                }
                cells_checked += 1;
                if delta.tied.len() > 1 {
                    tied_cells += 1;
                }
                let rhs: Vec<S> = data
                    .iter()
                    .map(|dd| dd.a.coeff(&q, j).sub(&dd.b.coeff(&q, j)))
                    .collect();
                let i0 = delta.argmax;
                let value = rhs[i0].mul(&delta.values[i0].inv().expect("nonzero"));
                for i in 0..rhs.len() {
                    if i == i0 {
                        continue;
                    }
                    let agrees = if delta.values[i].is_negligible(ctx) {
                        rhs[i].is_negligible(ctx)
                    } else {
                        let other = rhs[i].mul(&delta.values[i].inv().expect("nonzero"));
                        other.sub(&value).is_negligible(ctx)
                    };
                    if !agrees {
                        mismatches.push((q.to_vec(), j + 1, i0 + 1, i + 1));
                    }
                }
            }
        }
    }
    Ok(TieBreakReport {
        cells_checked,
        tied_cells,
        pass: mismatches.is_empty(),
        mismatches,
    })
}

/// `ρ∘H∘ρ` for `ρ(z) = B z̄` and holomorphic `H`: the holomorphic map
/// `z -> B H̄(B̄ z)`.
pub fn conjugate_by_linear_involution<S: Scalar>(b: &Matrix<S>, h: &TruncatedMap<S>) -> TruncatedMap<S> {
    let inner = TruncatedMap::linear(&b.conj(), h.degree(), h.ctx());
    h.conjugate_coefficients()
        .compose_to(&inner, h.degree())
        .left_mul(b)
}

fn rho_check<S: Scalar>(
    k: usize,
    b: &Matrix<S>,
    result: &LinearizationResult<S>,
    family: &[TruncatedMap<S>],
    ideal: &MonomialIdeal,
    resonance: &ResonanceReport,
) -> Result<RhoCheck> {
    let ctx = result.phi.ctx().clone();
    let degree = result.degree;
    let skipped = |why: String| RhoCheck {
        index: k + 1,
        hypotheses_hold: false,
        failed_hypothesis: Some(why),
        pass: None,
        residual: None,
    };
    if !b.mul(&b.conj(), &ctx).is_identity(&ctx) {
        return Ok(skipped("B·conj(B) ≠ Id".into()));
    }
    let compat = ideal.check_linear_map(b, degree, CompatibilityCheck::RhoCompatibility, &ctx)?;
    if !compat.holds {
        return Ok(skipped("ρ is not compatible with the ideal".into()));
    }
    // ρ C_D ρ = C_D: every resonant monomial vector goes to resonant ones.
    let resonant = resonance.resonant_set();
    let n = b.n();
    for (q, j) in &resonant {
        let mut comps = vec![crate::powerseries::TruncatedSeries::zero(n, degree, &ctx); n];
        comps[*j] = crate::powerseries::TruncatedSeries::monomial(q.clone(), S::one(&ctx), degree, &ctx);
        let h = TruncatedMap::new(comps)?;
        let image = conjugate_by_linear_involution(b, &h);
        let stray = image
            .coefficients()
            .find(|(p, m, c)| !c.is_negligible(&ctx) && !resonant.contains(&((*p).clone(), *m)))
            .map(|(p, m, _)| (p.clone(), m));
        if let Some((p, m)) = stray {
            return Ok(skipped(format!(
                "ρ maps the resonant vector (Q={:?}, {}) outside C_D at (Q={:?}, {})",
                q.as_slice(),
                j + 1,
                p.as_slice(),
                m + 1
            )));
        }
    }
    // ρ∘F_i∘ρ belongs to the group: compared with Id, every F_m and F_m^{-1}.
    let mut candidates = vec![TruncatedMap::identity(n, degree, &ctx)];
    for f in family {
        candidates.push(f.clone());
        candidates.push(f.invert()?);
    }
    for (i, f) in family.iter().enumerate() {
        let image = conjugate_by_linear_involution(b, f);
        let found = candidates
            .iter()
            .any(|c| c.sub(&image).map(|r| r.is_negligible()).unwrap_or(false));
        if !found {
            return Ok(skipped(format!("ρ∘F_{}∘ρ is not a member, an inverse or the identity", i + 1)));
        }
    }
    let image = conjugate_by_linear_involution(b, &result.phi);
    let diff = image.sub(&result.phi)?;
    Ok(RhoCheck {
        index: k + 1,
        hypotheses_hold: true,
        failed_hypothesis: None,
        pass: Some(diff.is_negligible()),
        residual: Some(residual_of(&diff)),
    })
}

/// `φ̃_Q = Σ_j |φ_{j,Q}|` for every `Q` carrying a coefficient of `Φ - Id`.
pub fn phi_tilde<S: Scalar>(phi: &TruncatedMap<S>) -> Vec<(Multiindex, Float)> {
    let prec = S::precision(phi.ctx());
    let mut acc: std::collections::BTreeMap<Multiindex, Float> = std::collections::BTreeMap::new();
    for (q, _, c) in phi.nonlinear_part().coefficients() {
        let slot = acc.entry(q.clone()).or_insert_with(|| float_zero(prec));
        *slot = &*slot + c.modulus(prec);
    }
    acc.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powerseries::TruncatedSeries;
    use crate::scalar::{ExactCtx, GaussianRational as G};

    fn ctx() -> ExactCtx {
        ExactCtx::default()
    }

    fn r(p: i64, q: i64) -> G {
        G::from_fractions(p, q, 0, 1)
    }

    fn map(degree: usize, comps: Vec<Vec<(Vec<u32>, G)>>) -> TruncatedMap<G> {
        let n = comps.len();
        TruncatedMap::new(
            comps
                .into_iter()
                .map(|t| TruncatedSeries::from_terms(n, degree, &ctx(), t.into_iter().map(|(q, c)| (Multiindex::new(q), c))).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn commuting_checks() {
        let a = map(3, vec![vec![(vec![1, 0], r(2, 1))], vec![(vec![0, 1], r(1, 2))]]);
        assert!(check_commuting(std::slice::from_ref(&a)).unwrap());
        let b = map(3, vec![vec![(vec![1, 0], r(3, 1)), (vec![0, 2], r(1, 1))], vec![(vec![0, 1], r(1, 3))]]);
        assert!(!check_commuting(&[a.clone(), b]).unwrap());
        let c = map(3, vec![vec![(vec![1, 0], r(5, 1))], vec![(vec![0, 1], r(7, 1))]]);
        assert!(check_commuting(&[a, c]).unwrap());
    }

    #[test]
    fn recovers_the_generating_conjugator() {
        let f = map(4, vec![vec![(vec![1, 0], r(2, 1)), (vec![0, 2], r(-7, 4))], vec![(vec![0, 1], r(1, 2))]]);
        let i = ideal(2, &[&[1, 1]]);
        let res = linearize_on_ideal(std::slice::from_ref(&f), &i, SolveMode::Strict).unwrap();
        let expected = map(4, vec![vec![(vec![1, 0], r(1, 1)), (vec![0, 2], r(1, 1))], vec![(vec![0, 1], r(1, 1))]]);
        assert_eq!(res.phi, expected);
        let d = map(4, vec![vec![(vec![1, 0], r(2, 1))], vec![(vec![0, 1], r(1, 2))]]);
        assert_eq!(res.g, vec![d]);
        // Every (Q, j) with 2 <= |Q| <= 4 appears once.
        assert_eq!(res.trace.len(), 2 * (3 + 4 + 5));
        let report = DiagonalFamily::from_maps(std::slice::from_ref(&f)).unwrap().centralizer_report(4);
        let v = verify(&res, std::slice::from_ref(&f), &i, &report, &[]).unwrap();
        assert!(v.all_pass(), "{v:?}");
        assert_eq!(v.conjugacy.residual, "0");
    }

    #[test]
    fn both_members_give_the_same_quotient() {
        // (2x1, x2/2) and (4x1, x2/4) conjugated by (y1 + y2², y2).
        let f1 = map(3, vec![vec![(vec![1, 0], r(2, 1)), (vec![0, 2], r(-7, 4))], vec![(vec![0, 1], r(1, 2))]]);
        let f2 = map(3, vec![vec![(vec![1, 0], r(4, 1)), (vec![0, 2], r(-63, 16))], vec![(vec![0, 1], r(1, 4))]]);
        let family = vec![f1, f2];
        let i = MonomialIdeal::zero(2);
        let res = linearize_on_ideal(&family, &i, SolveMode::Strict).unwrap();
        let q = Multiindex::from([0, 2]);
        assert_eq!(res.phi.coeff(&q, 0), r(1, 1));
        let cell = res.trace.iter().find(|t| t.q == q && t.j == 0).unwrap();
        assert_eq!(cell.pivot, Some(1));
        assert_eq!(cell.divisor, Some(r(-63, 16)));
        // Each member's own quotient.
        for (mu_q, mu_j, rhs) in [(r(1, 4), r(2, 1), r(-7, 4)), (r(1, 16), r(4, 1), r(-63, 16))] {
            assert_eq!(rhs.mul(&mu_q.sub(&mu_j).inv().unwrap()), r(1, 1));
        }
        let report = DiagonalFamily::from_maps(&family).unwrap().centralizer_report(3);
        let v = verify(&res, &family, &i, &report, &[]).unwrap();
        assert!(v.tie_break.pass && v.tie_break.mismatches.is_empty());
        assert!(v.all_pass());
    }

    #[test]
    fn obstruction_and_ideal() {
        let f = map(4, vec![vec![(vec![1, 0], r(4, 1)), (vec![0, 2], r(1, 1))], vec![(vec![0, 1], r(2, 1))]]);
        let err = linearize_on_ideal(std::slice::from_ref(&f), &MonomialIdeal::zero(2), SolveMode::Strict).unwrap_err();
        match err {
            Error::Obstruction {
                multiindex,
                component,
                coefficient,
            } => {
                assert_eq!(multiindex, vec![0, 2]);
                assert_eq!(component, 1);
                assert_eq!(coefficient, "1");
            }
            other => panic!("unexpected {other:?}"),
        }
        let res = linearize_on_ideal(std::slice::from_ref(&f), &ideal(2, &[&[0, 2]]), SolveMode::Strict).unwrap();
        assert_eq!(res.phi, TruncatedMap::identity(2, 4, &ctx()));
        assert_eq!(res.g[0].coeff(&Multiindex::from([0, 2]), 0), r(1, 1));

        let nf = linearize_on_ideal(std::slice::from_ref(&f), &MonomialIdeal::zero(2), SolveMode::NormalForm).unwrap();
        assert_eq!(nf.obstructions.len(), 1);
        assert_eq!(nf.g[0], f);
    }

    #[test]
    fn injected_normalization_violation() {
        let f = map(4, vec![vec![(vec![1, 0], r(2, 1)), (vec![0, 2], r(-7, 4))], vec![(vec![0, 1], r(1, 2))]]);
        let i = ideal(2, &[&[1, 1]]);
        let mut res = linearize_on_ideal(std::slice::from_ref(&f), &i, SolveMode::Strict).unwrap();
        res.phi.component_mut(0).set(Multiindex::from([1, 1]), r(1, 1));
        let report = DiagonalFamily::from_maps(std::slice::from_ref(&f)).unwrap().centralizer_report(4);
        let v = verify(&res, std::slice::from_ref(&f), &i, &report, &[]).unwrap();
        assert!(!v.normalization.pass);
    }

    #[test]
    fn rejects_bad_inputs() {
        let nd = map(3, vec![vec![(vec![1, 0], r(2, 1)), (vec![0, 1], r(1, 1))], vec![(vec![0, 1], r(1, 2))]]);
        assert!(matches!(
            linearize_on_ideal(&[nd], &MonomialIdeal::zero(2), SolveMode::Strict),
            Err(Error::NonDiagonalLinearPart { index: 1 })
        ));
        let a = map(3, vec![vec![(vec![1, 0], r(2, 1))], vec![(vec![0, 1], r(1, 2))]]);
        let b = map(3, vec![vec![(vec![1, 0], r(3, 1)), (vec![0, 2], r(1, 1))], vec![(vec![0, 1], r(1, 3))]]);
        assert!(matches!(
            linearize_on_ideal(&[a, b], &MonomialIdeal::zero(2), SolveMode::Strict),
            Err(Error::NotCommuting { .. })
        ));
    }
}
