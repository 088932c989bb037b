//! Totally real manifolds as fixed points of anti-holomorphic involutions
//! `ρ(z) = B z̄ + R(z̄)`, the group of pair maps `F_{i,j} = ρ_i ∘ ρ_j` and the
//! straightening pipeline.
//!
//! An anti-holomorphic germ is stored through its holomorphic representative
//! `H(w) = B w + R(w)`, so that `ρ(z) = H(z̄)`. Then `ρ_1 ∘ ρ_2` is the
//! holomorphic map `H_1 ∘ H̄_2`, where `H̄_2` has conjugated coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{CompatibilityReport, MonomialIdeal};
use crate::linearizer::{
    check_commuting, linearize_on_ideal, verify, CheckOutcome, LinearizationResult, SolveMode,
    VerificationReport,
};
use crate::powerseries::{Matrix, Multiindex, TruncatedMap};
use crate::resonance::{DiagonalFamily, ResonanceReport};
use crate::scalar::{float_zero, render_float, Float, RealValue, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct AntiInvolution<S: Scalar> {
    h: TruncatedMap<S>,
}

impl<S: Scalar> AntiInvolution<S> {
    /// `ρ(z) = B z̄ + R(z̄)`; `R` must have no constant or linear terms.
    pub fn new(b: &Matrix<S>, r: &TruncatedMap<S>) -> Result<Self> {
        if b.n() != r.n() {
            return Err(Error::DimensionMismatch {
                expected: r.n(),
                found: b.n(),
            });
        }
        if r.truncate(1).coefficients().any(|(_, _, c)| !c.is_exact_zero()) {
            return Err(Error::Invalid("R must start at degree 2".into()));
        }
        let lin = TruncatedMap::linear(b, r.degree(), r.ctx());
        Ok(AntiInvolution { h: lin.add(r)? })
    }

    /// From `H` with `ρ(z) = H(z̄)`.
    pub fn from_representative(h: TruncatedMap<S>) -> Result<Self> {
        if !h.has_zero_constant() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(AntiInvolution { h })
    }

    pub fn representative(&self) -> &TruncatedMap<S> {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    pub fn degree(&self) -> usize {
        self.h.degree()
    }

    pub fn b(&self) -> Matrix<S> {
        self.h.linear_part()
    }

    pub fn r(&self) -> TruncatedMap<S> {
        self.h.nonlinear_part()
    }

    /// The holomorphic map `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<TruncatedMap<S>> {
        self.h.compose(&other.h.conjugate_coefficients())
    }

    /// `h ∘ ρ ∘ h^{-1}` for a holomorphic `h` fixing the origin.
    pub fn transport(&self, h: &TruncatedMap<S>) -> Result<Self> {
        let hinv = h.invert()?;
        let rep = h.compose(&self.h)?.compose(&hinv.conjugate_coefficients())?;
        Ok(AntiInvolution { h: rep })
    }

    /// Checks `B·B̄ = Id` and `ρ∘ρ = Id` modulo degree `N + 1`.
    pub fn validate(&self) -> InvolutionValidation {
        let ctx = self.h.ctx();
        let prec = S::precision(ctx);
        let b = self.b();
        let bb = b.mul(&b.conj(), ctx);
        let id = Matrix::identity(b.n(), ctx);
        let b_unitary = bb.is_identity(ctx);
        let b_residual = bb.max_deviation(&id).render_sqrt(prec);
        let square = self.compose(self).expect("same shape");
        let diff = square
            .sub(&TruncatedMap::identity(self.n(), self.degree(), ctx))
            .expect("same shape");
        let involution = diff.is_negligible();
        let witness = diff
            .coefficients()
            .find(|(_, _, c)| !c.is_negligible(ctx))
            .map(|(q, j, _)| (q.to_vec(), j + 1));
        InvolutionValidation {
            b_unitary,
            b_residual,
            involution,
            residual: render_float(&diff.max_abs(prec)),
            witness,
            valid: b_unitary && involution,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvolutionValidation {
    pub b_unitary: bool,
    /// Largest modulus of an entry of `B·B̄ - Id`.
    pub b_residual: String,
    pub involution: bool,
    /// Largest coefficient modulus of `ρ∘ρ - Id`.
    pub residual: String,
    /// First nonzero coefficient `(Q, component)` (1-based) of `ρ∘ρ - Id`.
    pub witness: Option<(Vec<u32>, usize)>,
    pub valid: bool,
}

/// All `F_{i,j} = ρ_i ∘ ρ_j` and their linear parts `D_{i,j} = B_i B̄_j`.
#[derive(Clone, Debug)]
pub struct PairFamily<S: Scalar> {
    m: usize,
    maps: Vec<Vec<TruncatedMap<S>>>,
    linear: Vec<Vec<Matrix<S>>>,
    diagonal: bool,
    commuting: bool,
}

impl<S: Scalar> PairFamily<S> {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn map(&self, i: usize, j: usize) -> &TruncatedMap<S> {
        &self.maps[i][j]
    }

    pub fn linear(&self, i: usize, j: usize) -> &Matrix<S> {
        &self.linear[i][j]
    }

    /// Whether every `D_{i,j}` is diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    /// Whether the generators commute modulo degree `N + 1`.
    pub fn is_commuting(&self) -> bool {
        self.commuting
    }

    /// `μ_{i,j,k}`, the diagonal of `D_{i,j}`.
    pub fn eigenvalues(&self, i: usize, j: usize) -> Vec<S> {
        self.linear[i][j].diagonal_entries()
    }

    /// Ordered pairs `(i, j)`, `i ≠ j`, labelling the generators; `[(0, 0)]`
    /// for a single involution.
    pub fn generator_labels(&self) -> Vec<(usize, usize)> {
        if self.m == 1 {
            return vec![(0, 0)];
        }
        (0..self.m)
            .flat_map(|i| (0..self.m).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect()
    }

    pub fn generators(&self) -> Vec<TruncatedMap<S>> {
        self.generator_labels()
            .into_iter()
            .map(|(i, j)| self.maps[i][j].clone())
            .collect()
    }
}

pub fn pair_maps<S: Scalar>(rhos: &[AntiInvolution<S>]) -> Result<PairFamily<S>> {
    let first = rhos
        .first()
        .ok_or_else(|| Error::Invalid("no involutions".into()))?;
    for r in rhos {
        first.h.check_compatible(&r.h)?;
    }
    let ctx = first.h.ctx().clone();
    let m = rhos.len();
    let mut maps = Vec::with_capacity(m);
    let mut linear = Vec::with_capacity(m);
    let mut diagonal = true;
    for ri in rhos {
        let mut row = Vec::with_capacity(m);
        let mut lin = Vec::with_capacity(m);
        for rj in rhos {
            let f = ri.compose(rj)?;
            let d = f.linear_part();
            diagonal &= d.is_diagonal(&ctx);
            row.push(f);
            lin.push(d);
        }
        maps.push(row);
        linear.push(lin);
    }
    let mut fam = PairFamily {
        m,
        maps,
        linear,
        diagonal,
        commuting: false,
    };
    fam.commuting = check_commuting(&fam.generators())?;
    Ok(fam)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonresonanceReport {
    /// Whether monomials of the ideal were skipped.
    pub on_ideal: bool,
    pub degree: usize,
    /// `(i, k, Q)` (1-based `i`, `k`) with `conj(μ_{i,j})^Q = μ_{i,j,k}^{-1}` for every `j`.
    pub violations: Vec<(usize, usize, Vec<u32>)>,
    pub nonresonant: bool,
}

/// Looks for `(i, k, Q)`, `2 <= |Q| <= degree` (and `x^Q ∉ I` when `I ≠ 0`),
/// such that `conj(μ_{i,j})^Q · μ_{i,j,k} = 1` for all `j`.
pub fn nonresonance_check<S: Scalar>(
    pairs: &PairFamily<S>,
    ideal: &MonomialIdeal,
    degree: usize,
) -> Result<NonresonanceReport> {
    if !pairs.is_diagonal() {
        return Err(Error::Invalid("pair maps have non-diagonal linear parts".into()));
    }
    let ctx = pairs.maps[0][0].ctx().clone();
    let n = pairs.maps[0][0].n();
    let m = pairs.m;
    let conj_mu: Vec<Vec<Vec<S>>> = (0..m)
        .map(|i| (0..m).map(|j| pairs.eigenvalues(i, j).iter().map(S::conj).collect()).collect())
        .collect();
    let one = S::one(&ctx);
    let mut violations = Vec::new();
    for q in Multiindex::range(n, 2, degree) {
        if ideal.member(&q) {
            continue;
        }
        for i in 0..m {
            let powers: Vec<S> = (0..m)
                .map(|j| {
                    q.as_slice()
                        .iter()
                        .zip(&conj_mu[i][j])
                        .fold(S::one(&ctx), |acc, (&e, c)| acc.mul(&c.pow(e, &ctx)))
                })
                .collect();
            for k in 0..n {
                let resonant = (0..m).all(|j| {
                    powers[j]
                        .mul(&pairs.linear[i][j].get(k, k).clone())
                        .sub(&one)
                        .is_negligible(&ctx)
                });
                if resonant {
                    violations.push((i + 1, k + 1, q.to_vec()));
                }
            }
        }
    }
    violations.sort_by(|a, b| (a.0, a.1, a.2.iter().sum::<u32>(), &a.2).cmp(&(b.0, b.1, b.2.iter().sum::<u32>(), &b.2)));
    Ok(NonresonanceReport {
        on_ideal: !ideal.is_zero(),
        degree,
        nonresonant: violations.is_empty(),
        violations,
    })
}

/// Real-linear description of `M_k ∩ {z_a = 0, a ∈ T}` at the linear level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedSetComponent {
    /// 1-based coordinates set to zero.
    pub vanishing: Vec<usize>,
    /// Real dimension of `{z : z_a = 0 (a ∈ T), B_k z̄ = z}`.
    pub real_dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixedSetDescription {
    /// 1-based involution index.
    pub k: usize,
    pub components: Vec<FixedSetComponent>,
    pub rendered: String,
}

/// `V(I)` as an intersection of unions of coordinate hyperplanes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarietyDescription {
    /// One union per generator; 1-based coordinate indices.
    pub unions: Vec<Vec<usize>>,
    /// Irreducible components, each a list of vanishing coordinates (1-based).
    pub components: Vec<Vec<usize>>,
    pub rendered: String,
}

pub fn describe_variety(ideal: &MonomialIdeal) -> VarietyDescription {
    let one_based = |v: Vec<Vec<usize>>| -> Vec<Vec<usize>> {
        v.into_iter().map(|s| s.into_iter().map(|a| a + 1).collect()).collect()
    };
    let unions = one_based(ideal.variety_unions());
    let rendered = if unions.is_empty() {
        format!("C^{}", ideal.n())
    } else {
        unions
            .iter()
            .map(|u| {
                let prod: String = u.iter().map(|a| format!("z{a}")).collect();
                format!("{{{prod} = 0}}")
            })
            .collect::<Vec<_>>()
            .join(" ∩ ")
    };
    VarietyDescription {
        unions,
        components: one_based(ideal.variety_components()),
        rendered,
    }
}

fn real_part<S: Scalar>(z: &S, ctx: &S::Ctx) -> S {
    let half = S::parse("1/2", "0", ctx)
        .or_else(|_| S::parse("0.5", "0", ctx))
        .expect("one half");
    z.add(&z.conj()).mul(&half)
}

fn imag_part<S: Scalar>(z: &S, ctx: &S::Ctx) -> S {
    let minus_half_i = S::parse("0", "-1/2", ctx)
        .or_else(|_| S::parse("0", "-0.5", ctx))
        .expect("-i/2");
    z.sub(&z.conj()).mul(&minus_half_i)
}

/// Rank of a matrix of (real-valued) scalars by elimination with the
/// mode-aware zero test.
fn rank<S: Scalar>(mut rows: Vec<Vec<S>>, ctx: &S::Ctx) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let pivot = (r..rows.len())
            .filter(|&i| !rows[i][c].is_negligible(ctx))
            .max_by(|&a, &b| {
                rows[a][c]
                    .norm_sqr()
                    .partial_cmp(&rows[b][c].norm_sqr())
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(b.cmp(&a))
            });
        let Some(p) = pivot else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for i in r + 1..rows.len() {
            if rows[i][c].is_exact_zero() {
                continue;
            }
            let factor = rows[i][c].mul(&inv);
            for cc in c..cols {
                let v = rows[i][cc].sub(&factor.mul(&rows[r][cc]));
                rows[i][cc] = v;
            }
        }
        r += 1;
    }
    r
}

/// Real dimension of `{z : z_a = 0 (a ∈ vanishing), B z̄ = z}`.
pub fn fixed_dimension<S: Scalar>(b: &Matrix<S>, vanishing: &[usize], ctx: &S::Ctx) -> usize {
    let n = b.n();
    let zero = S::zero(ctx);
    let one = S::one(ctx);
    // Unknowns (x, y) with z = x + i y; B z̄ = (P x + Q y) + i (Q x - P y).
    let mut rows = Vec::new();
    for r in 0..n {
        let mut re = vec![zero.clone(); 2 * n];
        let mut im = vec![zero.clone(); 2 * n];
        for c in 0..n {
            let p = real_part(b.get(r, c), ctx);
            let q = imag_part(b.get(r, c), ctx);
            re[c] = p.clone();
            re[n + c] = q.clone();
            im[c] = q;
            im[n + c] = p.neg();
        }
        re[r] = re[r].sub(&one);
        im[n + r] = im[n + r].sub(&one);
        rows.push(re);
        rows.push(im);
    }
    for &a in vanishing {
        let mut x = vec![zero.clone(); 2 * n];
        x[a] = one.clone();
        let mut y = vec![zero.clone(); 2 * n];
        y[n + a] = one.clone();
        rows.push(x);
        rows.push(y);
    }
    2 * n - rank(rows, ctx)
}

#[derive(Clone, Debug)]
pub struct StraighteningReport<S: Scalar> {
    pub degree: usize,
    pub ideal: MonomialIdeal,
    pub validations: Vec<InvolutionValidation>,
    pub pairs: PairFamily<S>,
    /// Resonances of the generators `F_{i,j}`.
    pub resonance: ResonanceReport,
    /// Per involution: invariance of `I` under `z -> B_i z̄` and compatibility.
    pub ideal_checks: Vec<[CompatibilityReport; 2]>,
    pub nonresonance: NonresonanceReport,
    pub linearization: LinearizationResult<S>,
    pub verification: VerificationReport,
    /// `Φ^{-1} ∘ ρ_i ∘ Φ`.
    pub transported: Vec<AntiInvolution<S>>,
    /// Per involution: transported `R_i` supported in `conj(I)`.
    pub linear_mod_ideal: Vec<CheckOutcome>,
    /// `R_i(z̄) - D_{i,j} R_i(F̄_{i,j}) - D_{i,j} B_i f̄_{i,j}(z̄) - f_{i,j}(ρ_j)` on the inputs.
    pub conj_identity: CheckOutcome,
    /// `R_i(z̄) - D_{i,j} R_i(D̄_{i,j} z̄)` on the transported involutions.
    pub simultaneously_normalizable: CheckOutcome,
    /// Every coefficient of the transported `R_i` at `(Q, k)` satisfies
    /// `conj(μ_{i,j})^Q = μ_{i,j,k}^{-1}` for all `j`.
    pub normal_form_support: CheckOutcome,
    pub variety: VarietyDescription,
    pub fixed_sets: Vec<FixedSetDescription>,
}

impl<S: Scalar> StraighteningReport<S> {
    /// The involutions are linear modulo `conj(I)` and every certificate holds.
    pub fn success(&self) -> bool {
        self.linear_mod_ideal.iter().all(|c| c.pass)
            && self.conj_identity.pass
            && self.verification.all_pass()
    }
}

fn first_failure<T, F: Fn(&T) -> Option<String>>(items: &[T], f: F) -> Option<String> {
    items.iter().find_map(f)
}

fn outcome(name: &str, worst: &Float, pass: bool, detail: Option<String>) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        pass,
        residual: render_float(worst),
        detail,
    }
}

/// The straightening pipeline: pair maps, hypothesis checks, linearization of
/// the group on `I`, transport of the involutions and the certificates.
pub fn straighten<S: Scalar>(
    rhos: &[AntiInvolution<S>],
    ideal: &MonomialIdeal,
) -> Result<StraighteningReport<S>> {
    let first = rhos
        .first()
        .ok_or_else(|| Error::Invalid("no involutions".into()))?;
    let ctx = first.h.ctx().clone();
    let prec = S::precision(&ctx);
    let degree = first.degree();
    let n = first.n();
    if ideal.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: ideal.n(),
        });
    }

    let validations: Vec<InvolutionValidation> = rhos.iter().map(AntiInvolution::validate).collect();
    if let Some(w) = first_failure(&validations.iter().enumerate().collect::<Vec<_>>(), |(i, v)| {
        (!v.valid).then(|| {
            if !v.b_unitary {
                format!("ρ_{}: B·conj(B) - Id has modulus {}", i + 1, v.b_residual)
            } else {
                let (q, j) = v.witness.clone().unwrap_or_default();
                format!("ρ_{}: ρ∘ρ - Id has a term at Q={q:?}, component {j}", i + 1)
            }
        })
    }) {
        return Err(Error::HypothesisFailed {
            check: "involution".into(),
            witness: w,
        });
    }

    // (1) the group.
    let pairs = pair_maps(rhos)?;
    if !pairs.is_diagonal() {
        let (i, j) = (0..pairs.m)
            .flat_map(|i| (0..pairs.m).map(move |j| (i, j)))
            .find(|&(i, j)| !pairs.linear(i, j).is_diagonal(&ctx))
            .expect("some non-diagonal");
        return Err(Error::HypothesisFailed {
            check: "diagonal linear parts".into(),
            witness: format!("D_{{{},{}}} is not diagonal", i + 1, j + 1),
        });
    }
    if !pairs.is_commuting() {
        return Err(Error::NotCommutative { degree });
    }
    let generators = pairs.generators();
    let dfam = DiagonalFamily::from_maps(&generators)?;
    let resonance = dfam.centralizer_report(degree);

    // (2) the ideal against each z -> B_i z̄.
    let mut ideal_checks = Vec::with_capacity(rhos.len());
    for (i, r) in rhos.iter().enumerate() {
        let checks = ideal.invariance_and_compatibility(&r.b(), degree, &ctx)?;
        if let Some(c) = checks.iter().find(|c| !c.holds) {
            let w = c.witness.clone().expect("witness for a failed check");
            return Err(Error::HypothesisFailed {
                check: format!("{:?} of the ideal under z -> B_{} z̄", c.check, i + 1),
                witness: format!("x^{:?} goes to x^{:?}", w.monomial, w.image_monomial),
            });
        }
        ideal_checks.push(checks);
    }

    // (3) non-resonance on I.
    let nonresonance = nonresonance_check(&pairs, ideal, degree)?;
    if let Some((i, k, q)) = nonresonance.violations.first() {
        return Err(Error::HypothesisFailed {
            check: "non-resonance on the ideal".into(),
            witness: format!("i={i}, k={k}, Q={q:?}"),
        });
    }

    // (4) linearize the group on I.
    let linearization = linearize_on_ideal(&generators, ideal, SolveMode::Strict)?;
    let bs: Vec<Matrix<S>> = rhos.iter().map(AntiInvolution::b).collect();
    let verification = verify(&linearization, &generators, ideal, &resonance, &bs)?;

    // (5) transport by Φ^{-1}.
    let phi_inv = linearization.phi.invert()?;
    let transported: Vec<AntiInvolution<S>> = rhos
        .iter()
        .map(|r| r.transport(&phi_inv))
        .collect::<Result<_>>()?;
    let linear_mod_ideal: Vec<CheckOutcome> = transported
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let outside = t.r().map_components(|c| c.filter(|q| !ideal.member(q)));
            let detail = outside
                .coefficients()
                .find(|(_, _, c)| !c.is_negligible(&ctx))
                .map(|(q, j, _)| format!("conj(z)^{:?} in component {}", q.as_slice(), j + 1));
            outcome(
                &format!("ρ_{} = B_{} z̄ mod conj(I)", i + 1, i + 1),
                &outside.max_abs(prec),
                outside.is_negligible(),
                detail,
            )
        })
        .collect();

    // (6) the identity relating R_i, R_j and f_{i,j}, on the inputs.
    let conj_identity = {
        let mut worst = float_zero(prec);
        let mut pass = true;
        let mut detail = None;
        for (i, ri) in rhos.iter().enumerate() {
            let r_i = ri.r();
            let b_i = ri.b();
            for (j, rj) in rhos.iter().enumerate() {
                let f = pairs.map(i, j);
                let d = pairs.linear(i, j);
                let small = f.nonlinear_part();
                let lhs = r_i.sub(&r_i.compose(&f.conjugate_coefficients())?.left_mul(d))?;
                let rhs = small
                    .conjugate_coefficients()
                    .left_mul(&d.mul(&b_i, &ctx))
                    .add(&small.compose(rj.representative())?)?;
                let res = lhs.sub(&rhs)?;
                let m = res.max_abs(prec);
                if m > worst {
                    worst = m;
                }
                if !res.is_negligible() {
                    pass = false;
                    detail.get_or_insert_with(|| format!("i={}, j={}", i + 1, j + 1));
                }
            }
        }
        outcome("conj identity on the inputs", &worst, pass, detail)
    };

    // (7) simultaneous normalizability of the transported involutions.
    let simultaneously_normalizable = {
        let mut worst = float_zero(prec);
        let mut pass = true;
        let mut detail = None;
        for (i, t) in transported.iter().enumerate() {
            let r = t.r();
            for j in 0..rhos.len() {
                let d = pairs.linear(i, j);
                let res = r.sub(&r.scale_variables(&d.conj().diagonal_entries()).left_mul(d))?;
                let m = res.max_abs(prec);
                if m > worst {
                    worst = m;
                }
                if !res.is_negligible() {
                    pass = false;
                    detail.get_or_insert_with(|| format!("i={}, j={}", i + 1, j + 1));
                }
            }
        }
        outcome("R_i(z̄) = D_ij R_i(D̄_ij z̄)", &worst, pass, detail)
    };

    // Support of the transported R_i against the resonances of the involutions.
    let normal_form_support = {
        let mut pass = true;
        let mut detail = None;
        for (i, t) in transported.iter().enumerate() {
            for (q, k, c) in t.r().coefficients() {
                if c.is_negligible(&ctx) {
                    continue;
                }
                let ok = (0..rhos.len()).all(|j| {
                    let mu = pairs.eigenvalues(i, j);
                    let pw = q
                        .as_slice()
                        .iter()
                        .zip(&mu)
                        .fold(S::one(&ctx), |acc, (&e, v)| acc.mul(&v.conj().pow(e, &ctx)));
                    pw.mul(&mu[k]).sub(&S::one(&ctx)).is_negligible(&ctx)
                });
                if !ok {
                    pass = false;
                    detail.get_or_insert_with(|| {
                        format!("ρ_{}: conj(z)^{:?} in component {}", i + 1, q.as_slice(), k + 1)
                    });
                }
            }
        }
        outcome("resonant support of ρ_i - B_i z̄", &float_zero(prec), pass, detail)
    };

    // (8) the invariant variety and its intersections with the M_k.
    let variety = describe_variety(ideal);
    let comps0 = if ideal.is_zero() {
        vec![Vec::new()]
    } else {
        ideal.variety_components()
    };
    let fixed_sets = bs
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let components: Vec<FixedSetComponent> = comps0
                .iter()
                .map(|t| FixedSetComponent {
                    vanishing: t.iter().map(|a| a + 1).collect(),
                    real_dimension: fixed_dimension(b, t, &ctx),
                })
                .collect();
            let rendered = components
                .iter()
                .map(|c| {
                    let plane = if c.vanishing.is_empty() {
                        format!("C^{n}")
                    } else {
                        let eqs: Vec<String> = c.vanishing.iter().map(|a| format!("z{a} = 0")).collect();
                        format!("{{{}}}", eqs.join(", "))
                    };
                    format!("{plane} ∩ {{B_{} z̄ = z}} (real dim {})", k + 1, c.real_dimension)
                })
                .collect::<Vec<_>>()
                .join(" ∪ ");
            FixedSetDescription {
                k: k + 1,
                components,
                rendered,
            }
        })
        .collect();

    Ok(StraighteningReport {
        degree,
        ideal: ideal.clone(),
        validations,
        pairs,
        resonance,
        ideal_checks,
        nonresonance,
        linearization,
        verification,
        transported,
        linear_mod_ideal,
        conj_identity,
        simultaneously_normalizable,
        normal_form_support,
        variety,
        fixed_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powerseries::TruncatedSeries;
    use crate::scalar::{ExactCtx, GaussianRational as G};

    fn ctx() -> ExactCtx {
        ExactCtx::default()
    }

    fn scalar_rho(b: G, extra: &[(u32, G)], degree: usize) -> AntiInvolution<G> {
        let b = Matrix::diagonal(vec![b], &ctx());
        let r = TruncatedSeries::from_terms(1, degree, &ctx(), extra.iter().map(|(e, c)| (Multiindex::new(vec![*e]), c.clone()))).unwrap();
        AntiInvolution::new(&b, &TruncatedMap::new(vec![r]).unwrap()).unwrap()
    }

    fn b345() -> G {
        G::from_fractions(3, 5, 4, 5)
    }

    #[test]
    fn validation() {
        assert!(scalar_rho(G::from_i64(1, 0), &[], 6).validate().valid);
        assert!(scalar_rho(b345(), &[], 6).validate().valid);
        let bad = scalar_rho(b345(), &[(2, G::from_i64(1, 0))], 6).validate();
        assert!(bad.b_unitary);
        assert!(!bad.involution);
        assert_eq!(bad.witness, Some((vec![2], 1)));
        // z² coefficient of ρ∘ρ is B + B̄².
        let b = b345();
        let expected = b.add(&b.conj().mul(&b.conj()));
        let rho = scalar_rho(b345(), &[(2, G::from_i64(1, 0))], 6);
        let sq = rho.compose(&rho).unwrap();
        assert_eq!(sq.coeff(&Multiindex::from([2]), 0), expected);
    }

    #[test]
    fn pair_maps_examples() {
        let r1 = scalar_rho(G::from_i64(1, 0), &[], 5);
        let r2 = scalar_rho(b345(), &[], 5);
        let p = pair_maps(&[r1.clone(), r2]).unwrap();
        assert_eq!(p.eigenvalues(0, 1), vec![G::from_fractions(3, 5, -4, 5)]);
        assert!(p.is_diagonal() && p.is_commuting());

        let single = pair_maps(std::slice::from_ref(&r1)).unwrap();
        assert_eq!(single.generators(), vec![TruncatedMap::identity(1, 5, &ctx())]);

        let ri = scalar_rho(G::from_i64(0, 1), &[], 5);
        let p = pair_maps(&[r1, ri]).unwrap();
        assert_eq!(p.eigenvalues(0, 1), vec![G::from_i64(0, -1)]);
        let id = p.map(0, 1).compose(p.map(1, 0)).unwrap();
        assert_eq!(id, TruncatedMap::identity(1, 5, &ctx()));
    }

    #[test]
    fn nonresonance_examples() {
        let r1 = scalar_rho(G::from_i64(1, 0), &[], 8);
        let ri = scalar_rho(G::from_i64(0, 1), &[], 8);
        let p = pair_maps(&[r1.clone(), ri]).unwrap();
        let rep = nonresonance_check(&p, &MonomialIdeal::zero(1), 8).unwrap();
        assert!(!rep.nonresonant);
        assert!(rep.violations.iter().any(|(_, _, q)| q == &vec![5]));
        assert!(rep.violations.iter().all(|(_, _, q)| q[0] % 4 == 1));
        let i5 = MonomialIdeal::from_exponents(1, &[vec![5]]).unwrap();
        assert!(nonresonance_check(&p, &i5, 8).unwrap().nonresonant);

        let r2 = scalar_rho(b345(), &[], 12);
        let r1 = scalar_rho(G::from_i64(1, 0), &[], 12);
        let p = pair_maps(&[r1, r2]).unwrap();
        assert!(nonresonance_check(&p, &MonomialIdeal::zero(1), 12).unwrap().nonresonant);
    }

    #[test]
    fn linear_involutions_are_already_straight() {
        let r1 = scalar_rho(G::from_i64(1, 0), &[], 6);
        let r2 = scalar_rho(b345(), &[], 6);
        let rep = straighten(&[r1, r2], &MonomialIdeal::zero(1)).unwrap();
        assert!(rep.success());
        assert_eq!(rep.linearization.phi, TruncatedMap::identity(1, 6, &ctx()));
        assert_eq!(rep.conj_identity.residual, "0");
        assert_eq!(rep.variety.rendered, "C^1");
        // The fixed set of z -> z̄ is the real line.
        assert_eq!(rep.fixed_sets[0].components[0].real_dimension, 1);
    }

    #[test]
    fn fixed_dimensions() {
        let c = ctx();
        let z = G::zero(&c);
        let o = G::one(&c);
        let swap = Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o.clone(), z.clone()]]).unwrap();
        // {z2 = conj(z1)}: real dimension 2; on the axis z1 = 0 only the origin.
        assert_eq!(fixed_dimension(&swap, &[], &c), 2);
        assert_eq!(fixed_dimension(&swap, &[0], &c), 0);
        let id = Matrix::<G>::identity(2, &c);
        assert_eq!(fixed_dimension(&id, &[1], &c), 1);
    }
}
