//! Small-divisor sequences `ω_k(D, I)`, Brjuno partial sums, `θ`, and the
//! majorant sequences `σ_Q`, `η_Q`, `φ^(k)(Q)` with their bounds checked at
//! finite degree.
//!
//! Divisor sizes are compared through squared moduli, so in exact mode every
//! comparison of the form `|δ| < θ ω` is exact. Majorant quantities that need
//! square roots or logarithms are big floats at the scalar context's precision.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::powerseries::{Multiindex, TruncatedMap};
use crate::resonance::DiagonalFamily;
use crate::scalar::{float_int, float_sqrt, float_zero, pow2, rational_to_float, render_float, Float, RealValue, Scalar};

/// Largest degree enumerated exhaustively by [`omega`] before switching to the
/// tail certificate.
pub const DEFAULT_OMEGA_CAP: usize = 64;

/// How an entry of the ω table was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaSource {
    /// Every `(Q, j)` with `|Q| <= 2^k` was enumerated.
    Exhaustive,
    /// Enumeration stopped at the cap; a modulus bound proves that higher
    /// degrees cannot go below the value found at the cap.
    TailCertified,
    /// As above, but the modulus bound was inconclusive.
    Uncertified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OmegaEntry<S: Scalar> {
    pub k: usize,
    /// `ω_k²`.
    pub value_sqr: S::Real,
    /// A minimizing `(Q, j)` (0-based `j`), first in degree/lexicographic order.
    pub attained: (Multiindex, usize),
    pub source: OmegaSource,
}

#[derive(Clone, Debug)]
pub struct OmegaSequence<S: Scalar> {
    pub ideal: MonomialIdeal,
    pub entries: Vec<OmegaEntry<S>>,
    /// Largest degree enumerated exhaustively.
    pub exhaustive_degree: usize,
    pub precision: usize,
    pub warnings: Vec<String>,
}

impl<S: Scalar> OmegaSequence<S> {
    pub fn k_max(&self) -> usize {
        self.entries.len()
    }

    /// `ω_k²` for `1 <= k <= K`.
    pub fn value_sqr(&self, k: usize) -> &S::Real {
        &self.entries[k - 1].value_sqr
    }

    pub fn value(&self, k: usize) -> Float {
        float_sqrt(&self.value_sqr(k).to_float(self.precision))
    }

    pub fn all_certified(&self) -> bool {
        self.entries.iter().all(|e| e.source != OmegaSource::Uncertified)
    }
}

/// `ω_k(D, I)` for `k = 1..=depth`, enumerating exhaustively up to degree
/// `min(2^depth, cap)`.
pub fn omega<S: Scalar>(
    d: &DiagonalFamily<S>,
    ideal: &MonomialIdeal,
    depth: usize,
    cap: usize,
) -> Result<OmegaSequence<S>> {
    if depth == 0 {
        return Err(Error::Invalid("depth K must be at least 1".into()));
    }
    if ideal.n() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: ideal.n(),
        });
    }
    let n = d.n();
    let ctx = d.ctx();
    let precision = S::precision(ctx);
    let top = if depth >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        1usize << depth
    };
    let exhaustive_degree = top.min(cap.max(2));

    // Minimum over each degree shell, built from the previous shell's powers.
    let mut shell_min: Vec<Option<(S::Real, Multiindex, usize)>> = vec![None; exhaustive_degree + 1];
    let mut prev: HashMap<Multiindex, Vec<S>> = HashMap::new();
    prev.insert(Multiindex::zeros(n), vec![S::one(ctx); d.len()]);
    for deg in 1..=exhaustive_degree {
        let shell = Multiindex::shell(n, deg);
        let current: Vec<(Multiindex, Vec<S>)> = shell
            .par_iter()
            .map(|q| {
                let a = (0..n).rev().find(|&a| q[a] > 0).expect("nonzero");
                let base = &prev[&q.checked_sub(&Multiindex::unit(n, a)).expect("divides")];
                let powers = (0..d.len()).map(|i| base[i].mul(d.mu(i, a))).collect();
                (q.clone(), powers)
            })
            .collect();
        if deg >= 2 {
            let candidates: Vec<Option<(S::Real, Multiindex, usize)>> = current
                .par_iter()
                .filter(|(q, _)| !ideal.member(q))
                .map(|(q, powers)| {
                    let mut best: Option<(S::Real, Multiindex, usize)> = None;
                    for j in 0..n {
                        let delta = d.delta_from_powers(powers, j);
                        if delta.vanishes(ctx) {
                            continue;
                        }
                        if best.as_ref().is_none_or(|b| delta.max_norm_sqr < b.0) {
                            best = Some((delta.max_norm_sqr, q.clone(), j));
                        }
                    }
                    best
                })
                .collect();
            for c in candidates.into_iter().flatten() {
                let slot = &mut shell_min[deg];
                if slot.as_ref().is_none_or(|b| c.0 < b.0) {
                    *slot = Some(c);
                }
            }
        }
        prev = current.into_iter().collect();
    }

    let mut entries: Vec<OmegaEntry<S>> = Vec::with_capacity(depth);
    let mut running: Option<(S::Real, Multiindex, usize)> = None;
    let mut deg_done = 1;
    let mut warnings = Vec::new();
    let mut tail: Option<OmegaSource> = None;
    for k in 1..=depth {
        let limit = if k >= usize::BITS as usize - 1 {
            usize::MAX
        } else {
            1usize << k
        };
        while deg_done < limit.min(exhaustive_degree) {
            deg_done += 1;
            if let Some(c) = &shell_min[deg_done] {
                if running.as_ref().is_none_or(|r| c.0 < r.0) {
                    running = Some(c.clone());
                }
            }
        }
        let Some((value, q, j)) = running.clone() else {
            return Err(Error::AllDivisorsVanish {
                max_degree: limit.min(exhaustive_degree),
            });
        };
        let source = if limit <= exhaustive_degree {
            OmegaSource::Exhaustive
        } else {
            *tail.get_or_insert_with(|| {
                if tail_certified(d, ideal, exhaustive_degree, &value) {
                    OmegaSource::TailCertified
                } else {
                    warnings.push(format!(
                        "ω_k for 2^k > {exhaustive_degree} repeats the value at degree {exhaustive_degree} without a certificate"
                    ));
                    OmegaSource::Uncertified
                }
            })
        };
        entries.push(OmegaEntry {
            k,
            value_sqr: value,
            attained: (q, j),
            source,
        });
    }
    Ok(OmegaSequence {
        ideal: ideal.clone(),
        entries,
        exhaustive_degree,
        precision,
        warnings,
    })
}

/// Proves `max_i |μ_i^Q - μ_{i,j}| >= ω` for every `x^Q ∉ I` of degree
/// `> cap`.
///
/// Write `Q = P + T` where `T` is supported on the coordinates `F` where `Q`
/// has exponent at least the largest generator exponent `A`. No generator
/// support lies inside `F`, `P` has entries `< A` off `F`, and
/// `|T| >= cap + 1 - |P|`. If `|μ_{i,a}| > 1` on all of `F` the modulus of
/// `μ_i^Q` is at least `|μ_i^P| r^{|T|}`, and symmetrically when every
/// `|μ_{i,a}| < 1`.
fn tail_certified<S: Scalar>(d: &DiagonalFamily<S>, ideal: &MonomialIdeal, cap: usize, omega_sqr: &S::Real) -> bool {
    let n = d.n();
    let prec = S::precision(d.ctx());
    let omega = float_sqrt(&omega_sqr.to_float(prec));
    let margin = &omega * pow2(-64, prec);
    let threshold = &omega + &margin;
    let a_max = ideal
        .generators()
        .iter()
        .flat_map(|g| g.as_slice().iter().copied())
        .max()
        .unwrap_or(0);
    let supports: Vec<Vec<usize>> = ideal.variety_unions();
    let admissible = |mask: u64| {
        mask != 0 && supports.iter().all(|s| s.iter().any(|&a| mask & (1 << a) == 0))
    };
    let masks: Vec<u64> = (1u64..(1u64 << n)).filter(|&m| admissible(m)).collect();
    let maximal: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == m))
        .collect();
    let moduli: Vec<Vec<Float>> = (0..d.len())
        .map(|i| (0..n).map(|a| d.mu(i, a).modulus(prec)).collect())
        .collect();
    let one = float_int(1, prec);
    for mask in maximal {
        let off: Vec<usize> = (0..n).filter(|&a| mask & (1 << a) == 0).collect();
        let on: Vec<usize> = (0..n).filter(|&a| mask & (1 << a) != 0).collect();
        let bound = a_max.saturating_sub(1);
        for p in small_vectors(&off, n, bound) {
            let t0 = (cap + 1).saturating_sub(p.degree());
            for j in 0..n {
                let mut best: Option<Float> = None;
                for (i, row) in moduli.iter().enumerate() {
                    let mp = d.mu_power(i, &p).modulus(prec);
                    let growth = on.iter().all(|&a| row[a] > one);
                    let decay = on.iter().all(|&a| row[a] < one);
                    let b = if growth {
                        let r = on.iter().map(|&a| row[a].clone()).fold(None, min_opt).expect("nonempty");
                        Some(&mp * float_powi(&r, t0) - &row[j])
                    } else if decay {
                        let r = on.iter().map(|&a| row[a].clone()).fold(None, max_opt).expect("nonempty");
                        Some(&row[j] - &mp * float_powi(&r, t0))
                    } else {
                        None
                    };
                    if let Some(b) = b {
                        best = max_opt(best, b);
                    }
                }
                match best {
                    Some(b) if b >= threshold => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

/// Exponent vectors supported on `coords` with entries `<= bound`.
fn small_vectors(coords: &[usize], n: usize, bound: u32) -> Vec<Multiindex> {
    let mut out = vec![vec![0u32; n]];
    for &a in coords {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=bound).map(move |e| {
                    let mut w = v.clone();
                    w[a] = e;
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Multiindex::new).collect()
}

fn min_opt(acc: Option<Float>, x: Float) -> Option<Float> {
    Some(match acc {
        Some(a) if a <= x => a,
        _ => x,
    })
}

fn max_opt(acc: Option<Float>, x: Float) -> Option<Float> {
    Some(match acc {
        Some(a) if a >= x => a,
        _ => x,
    })
}

fn float_max(a: Float, b: Float) -> Float {
    if b > a {
        b
    } else {
        a
    }
}

fn float_powi(x: &Float, e: usize) -> Float {
    let mut acc = float_int(1, x.precision().max(2));
    let mut base = x.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Partial sums `S_K = -Σ_{k=1}^{K} ln(ω_k) / 2^k` for every `K` in the
/// sequence.
pub fn brjuno_partial<S: Scalar>(seq: &OmegaSequence<S>) -> Vec<Float> {
    let prec = seq.precision;
    let mut acc = float_zero(prec);
    let mut out = Vec::with_capacity(seq.k_max());
    for e in &seq.entries {
        let ln_sqr = e.value_sqr.to_float(prec).ln();
        acc -= ln_sqr * pow2(-(e.k as isize) - 1, prec);
        out.push(acc.clone());
    }
    out
}

#[derive(Clone, Debug)]
pub struct ThetaReport<S: Scalar> {
    /// `θ²`.
    pub theta_sqr: S::Real,
    /// `(4θ)² = min_j max_i |μ_{i,j}|²` over the indices used.
    pub four_theta_sqr: S::Real,
    /// `4θ <= 1`.
    pub satisfied: bool,
    /// Indices `j` (0-based) the minimum ranges over: the variables not
    /// involved in `I` when it is properly embedded, all of them otherwise.
    pub s_used: Vec<usize>,
    pub properly_embedded: bool,
    /// Indices in `s_used` with `max_i |μ_{i,j}| > 1`, listed when unsatisfied.
    pub violations: Vec<usize>,
    pub warnings: Vec<String>,
}

/// `4θ := min_j max_i |μ_{i,j}|`, with `j` restricted to the free variables
/// of a properly embedded ideal.
pub fn theta<S: Scalar>(d: &DiagonalFamily<S>, ideal: &MonomialIdeal) -> ThetaReport<S> {
    let ctx = d.ctx();
    let (s_used, properly_embedded) = match ideal.properly_embedded() {
        Some(s) if !ideal.is_zero() => (s, true),
        _ => ((0..d.n()).collect(), false),
    };
    let col_max = |j: usize| {
        (1..d.len()).fold(d.mu(0, j).norm_sqr(), |acc, i| {
            let v = d.mu(i, j).norm_sqr();
            if v > acc {
                v
            } else {
                acc
            }
        })
    };
    let maxes: Vec<(usize, S::Real)> = s_used.iter().map(|&j| (j, col_max(j))).collect();
    let four_theta_sqr = maxes
        .iter()
        .map(|(_, v)| v.clone())
        .reduce(|a, b| if b < a { b } else { a })
        .expect("at least one index");
    let one = S::real_from_ratio(&BigRational::one(), ctx);
    let satisfied = four_theta_sqr <= one;
    let sixteenth = S::real_from_ratio(&BigRational::new(BigInt::one(), BigInt::from(16)), ctx);
    let theta_sqr = four_theta_sqr.mul(&sixteenth);
    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    if !satisfied {
        violations = maxes
            .iter()
            .filter(|(_, v)| *v > one)
            .map(|(j, _)| *j)
            .collect();
        let names: Vec<String> = violations.iter().map(|j| format!("z{}", j + 1)).collect();
        warnings.push(format!(
            "4θ = {} > 1: max_i |μ_(i,j)| exceeds 1 for {}; replacing the offending maps by their inverses is left to the caller",
            four_theta_sqr.render_sqrt(S::precision(ctx)),
            names.join(", ")
        ));
    }
    ThetaReport {
        theta_sqr,
        four_theta_sqr,
        satisfied,
        s_used,
        properly_embedded,
        violations,
        warnings,
    }
}

/// Family obtained by replacing some `F_i` by `F_i^{-1}` so that `4θ <= 1`.
#[derive(Clone, Debug)]
pub struct ThetaReduction<S: Scalar> {
    /// Column `j` (0-based) the reduction is arranged around.
    pub column: usize,
    /// Indices `i` (0-based) of the inverted maps.
    pub inverted: Vec<usize>,
    pub family: Vec<TruncatedMap<S>>,
}

/// Fixes the column `j` of `s_used` with the smallest `max_i |μ_{i,j}|`
/// (lowest index on ties) and inverts every `F_i` with `|μ_{i,j}| > 1`.
///
/// A map linearizing the input family linearizes the reduced one as well.
/// Nothing here is called by [`majorant_diagnostics`].
pub fn theta_reduction<S: Scalar>(
    family: &[TruncatedMap<S>],
    ideal: &MonomialIdeal,
) -> Result<ThetaReduction<S>> {
    let d = DiagonalFamily::from_maps(family)?;
    let report = theta(&d, ideal);
    let one = S::real_from_ratio(&BigRational::one(), d.ctx());
    let mut best: Option<(usize, S::Real)> = None;
    for &j in &report.s_used {
        let m = (0..d.len())
            .map(|i| d.mu(i, j).norm_sqr())
            .reduce(|a, b| if b > a { b } else { a })
            .expect("nonempty family");
        if best.as_ref().is_none_or(|(_, v)| m < *v) {
            best = Some((j, m));
        }
    }
    let (column, _) = best.expect("at least one index");
    let mut inverted = Vec::new();
    let mut out = Vec::with_capacity(family.len());
    for (i, f) in family.iter().enumerate() {
        if d.mu(i, column).norm_sqr() > one {
            inverted.push(i);
            out.push(f.invert()?);
        } else {
            out.push(f.clone());
        }
    }
    Ok(ThetaReduction {
        column,
        inverted,
        family: out,
    })
}

/// Knobs of [`majorant_diagnostics`].
#[derive(Clone, Debug, PartialEq)]
pub struct MajorantParams {
    /// Free majorant constant `b > 0`.
    pub b: BigRational,
    /// Depth `K` of the ω table and of the `φ^(k)` sequences (`k = 0..=K`).
    pub depth: usize,
    /// Largest truncation degree accepted.
    pub max_degree: usize,
    /// Largest dimension accepted.
    pub max_dim: usize,
    pub omega_cap: usize,
}

impl Default for MajorantParams {
    fn default() -> Self {
        MajorantParams {
            b: BigRational::one(),
            depth: 3,
            max_degree: 10,
            max_dim: 3,
            omega_cap: DEFAULT_OMEGA_CAP,
        }
    }
}

/// One inequality checked at one multiindex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub q: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundSummary {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub pass: bool,
    pub per_q: Vec<BoundCheck>,
}

impl BoundSummary {
    fn new(name: &str, per_q: Vec<BoundCheck>) -> Self {
        let failures = per_q.iter().filter(|c| !c.pass).count();
        BoundSummary {
            name: name.to_string(),
            checked: per_q.len(),
            failures,
            pass: failures == 0,
            per_q,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PsiSplitViolation {
    pub k: usize,
    pub j: usize,
    pub q: Vec<u32>,
    pub p: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct MajorantDiagnostics<S: Scalar> {
    pub theta: ThetaReport<S>,
    pub omega: OmegaSequence<S>,
    pub degree: usize,
    pub a: Float,
    pub b: Float,
    /// `|δ_Q|²` for every `Q ∉ I`, `1 <= |Q| <= N` (zero for `|Q| = 1`).
    pub delta_q_sqr: Vec<(Multiindex, S::Real)>,
    /// `σ_Q`, `2 <= |Q| <= N` (zero on `I`).
    pub sigma: Vec<(Multiindex, Float)>,
    /// `η_Q` for `Q ∉ I`, `1 <= |Q| <= N`.
    pub eta: Vec<(Multiindex, Float)>,
    /// `φ^(k)(Q)` for `k = 0..=K`, `Q ∉ I`, `2 <= |Q| <= N`.
    pub phi: Vec<(usize, Multiindex, u64)>,
    /// `φ^(k)_j(Q)` with 0-based `j`.
    pub phi_j: Vec<(usize, Multiindex, Vec<u64>)>,
    /// `max η_Q^{1/|Q|}` over `|Q| >= 2`.
    pub c_estimate: Float,
    /// `ln c = -2n Σ_{k=0}^{K-1} ln ω_{k+1} / 2^k + 4n ln θ^{-1}`.
    pub ln_c: Float,
    pub phi_sigma_eta: Option<BoundSummary>,
    pub eta_growth: BoundSummary,
    pub phi_count: BoundSummary,
    pub psi_splits_checked: usize,
    pub psi_split_violations: Vec<PsiSplitViolation>,
    pub warnings: Vec<String>,
}

impl<S: Scalar> MajorantDiagnostics<S> {
    pub fn eta_of(&self, q: &Multiindex) -> Option<&Float> {
        self.eta.iter().find(|(p, _)| p == q).map(|(_, v)| v)
    }

    pub fn sigma_of(&self, q: &Multiindex) -> Option<&Float> {
        self.sigma.iter().find(|(p, _)| p == q).map(|(_, v)| v)
    }

    pub fn phi_of(&self, k: usize, q: &Multiindex) -> Option<u64> {
        self.phi
            .iter()
            .find(|(kk, p, _)| *kk == k && p == q)
            .map(|(_, _, v)| *v)
    }

    /// All certified inequalities hold.
    pub fn all_pass(&self) -> bool {
        self.phi_sigma_eta.as_ref().is_none_or(|b| b.pass)
            && self.eta_growth.pass
            && self.phi_count.pass
            && self.psi_split_violations.is_empty()
    }
}

/// Per-`Q` divisor data shared by the η and φ recursions.
struct DivisorTable<S: Scalar> {
    /// Every `Q ∉ I` with `1 <= |Q| <= N`, by degree then lexicographically.
    order: Vec<Multiindex>,
    /// `δ_{Q,j}² = max_i |δ^i_{Q,j}|²`.
    delta_j: HashMap<Multiindex, Vec<S::Real>>,
    /// `δ_Q²` (zero when every `δ_{Q,j}` vanishes).
    delta_q: HashMap<Multiindex, S::Real>,
}

impl<S: Scalar> DivisorTable<S> {
    fn new(d: &DiagonalFamily<S>, ideal: &MonomialIdeal, degree: usize) -> Self {
        let ctx = d.ctx();
        let zero = S::real_from_ratio(&BigRational::zero(), ctx);
        let order: Vec<Multiindex> = Multiindex::range(d.n(), 1, degree)
            .into_iter()
            .filter(|q| !ideal.member(q))
            .collect();
        let rows: Vec<(Vec<S::Real>, S::Real)> = order
            .par_iter()
            .map(|q| {
                let dj: Vec<S::Real> = (0..d.n())
                    .map(|j| {
                        let delta = d.delta(q, j);
                        if delta.vanishes(ctx) {
                            zero.clone()
                        } else {
                            delta.max_norm_sqr
                        }
                    })
                    .collect();
                let dq = dj
                    .iter()
                    .filter(|v| !S::real_is_negligible(v, ctx))
                    .cloned()
                    .reduce(|a, b| if b < a { b } else { a })
                    .unwrap_or_else(|| zero.clone());
                (dj, dq)
            })
            .collect();
        let mut delta_j = HashMap::new();
        let mut delta_q = HashMap::new();
        for (q, (dj, dq)) in order.iter().zip(rows) {
            delta_j.insert(q.clone(), dj);
            delta_q.insert(q.clone(), dq);
        }
        DivisorTable {
            order,
            delta_j,
            delta_q,
        }
    }
}

/// Max-over-decompositions recursion shared by `η` and `φ^(k)`.
///
/// For `|Q| >= 2` the node sees `M(Q) = max Π_l v(Q_l)` over families of
/// nonzero `Q_l` with `Σ Q_l <= Q` and each `|Q_l| < |Q|` (`Π` is `combine`).
/// `ex(R)` is the best exact decomposition of `R`, `pre(R)` its prefix maximum
/// over nonzero `R' <= R`.
fn decomposition_dp<T, B, N, C>(order: &[Multiindex], base: B, node: N, combine: C) -> HashMap<Multiindex, T>
where
    T: Clone + PartialOrd,
    B: Fn(&Multiindex) -> T,
    N: Fn(&Multiindex, T) -> T,
    C: Fn(&T, &T) -> T,
{
    let better = |a: T, b: T| if b > a { b } else { a };
    let mut value: HashMap<Multiindex, T> = HashMap::new();
    let mut ex: HashMap<Multiindex, T> = HashMap::new();
    let mut pre: HashMap<Multiindex, T> = HashMap::new();
    for q in order {
        let n = q.len();
        let proper: Vec<Multiindex> = q
            .divisors()
            .into_iter()
            .filter(|p| !p.is_zero() && p != q)
            .collect();
        let split = proper
            .iter()
            .map(|p| combine(&value[p], &ex[&q.checked_sub(p).expect("divisor")]))
            .reduce(&better);
        let v = if q.degree() == 1 {
            base(q)
        } else {
            let below = (0..n)
                .filter(|&k| q[k] > 0)
                .filter_map(|k| {
                    let r = q.checked_sub(&Multiindex::unit(n, k)).expect("divides");
                    pre.get(&r).cloned()
                })
                .reduce(&better);
            let m = match (below, split.clone()) {
                (Some(a), Some(b)) => better(a, b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => unreachable!("|Q| >= 2 has a proper divisor"),
            };
            node(q, m)
        };
        let e = match split {
            Some(s) => better(v.clone(), s),
            None => v.clone(),
        };
        let p = (0..n)
            .filter(|&k| q[k] > 0)
            .filter_map(|k| pre.get(&q.checked_sub(&Multiindex::unit(n, k)).expect("divides")).cloned())
            .fold(e.clone(), &better);
        value.insert(q.clone(), v);
        ex.insert(q.clone(), e);
        pre.insert(q.clone(), p);
    }
    value
}

/// Majorant sequences and their certified bounds for a family `F` with linear
/// parts `D`, on the ideal `I`, up to the family's truncation degree.
///
/// When `phi` (the conjugator of a successful strict linearization) is given,
/// `Σ_j |φ_{j,Q}| <= σ_Q η_Q` is checked as well.
pub fn majorant_diagnostics<S: Scalar>(
    family: &[TruncatedMap<S>],
    d: &DiagonalFamily<S>,
    ideal: &MonomialIdeal,
    params: &MajorantParams,
    phi: Option<&TruncatedMap<S>>,
) -> Result<MajorantDiagnostics<S>> {
    let first = family
        .first()
        .ok_or_else(|| Error::Invalid("empty family".into()))?;
    let n = d.n();
    let degree = first.degree();
    if degree > params.max_degree {
        return Err(Error::BudgetExceeded(format!(
            "truncation degree {degree} exceeds the cap {}",
            params.max_degree
        )));
    }
    if n > params.max_dim {
        return Err(Error::BudgetExceeded(format!(
            "dimension {n} exceeds the cap {}",
            params.max_dim
        )));
    }
    if !params.b.is_positive() {
        return Err(Error::Invalid("majorant constant b must be positive".into()));
    }
    let ctx = d.ctx();
    let prec = S::precision(ctx);
    let tol = pow2(-64, prec);
    let mut warnings = Vec::new();

    let theta = theta(d, ideal);
    if !theta.satisfied {
        warnings.extend(theta.warnings.iter().cloned());
    }
    let omega = omega(d, ideal, params.depth.max(1), params.omega_cap)?;
    warnings.extend(omega.warnings.iter().cloned());

    // (i) a = max_Q Σ_{i,j} |f_{i,j,Q}| / (b^{|Q|-2} |Q|!/Q!).
    let b = rational_to_float(&params.b, prec);
    let mut a = float_zero(prec);
    for q in Multiindex::range(n, 2, degree) {
        let mut total = float_zero(prec);
        for f in family {
            for j in 0..n {
                if let Some(c) = f.component(j).get(&q) {
                    total += c.modulus(prec);
                }
            }
        }
        if total == float_zero(prec) {
            continue;
        }
        let mult = rational_to_float(
            &BigRational::from_integer(BigInt::from_biguint(num_bigint::Sign::Plus, q.multinomial())),
            prec,
        );
        let scale = float_powi(&b, q.degree() - 2) * mult;
        a = float_max(a, total / scale);
    }

    // (ii) σ by the recursion h = a w² + b w h with w = Σ y_j + σ.
    let sigma = sigma_series(n, degree, &a, &b, ideal, prec);

    // (iii) η.
    let table = DivisorTable::new(d, ideal, degree);
    let one = float_int(1, prec);
    let eta = decomposition_dp(
        &table.order,
        |_| one.clone(),
        |q, m: Float| {
            let dq = &table.delta_q[q];
            if S::real_is_negligible(dq, ctx) {
                float_zero(prec)
            } else {
                m / float_sqrt(&dq.to_float(prec))
            }
        },
        |x, y| x * y,
    );

    // (iv) φ^(k) and φ^(k)_j.
    let omega_sqr = |k: usize| -> Option<S::Real> {
        if k == 0 {
            None
        } else {
            Some(omega.value_sqr(k).clone())
        }
    };
    let psi_j = |k: usize, q: &Multiindex, j: usize| -> bool {
        let dq = &table.delta_q[q];
        let dj = &table.delta_j[q][j];
        if q.degree() < 2 || S::real_is_negligible(dq, ctx) || !S::reals_tied(dq, dj, ctx) {
            return false;
        }
        match omega_sqr(k) {
            None => true,
            Some(w) => *dj < theta.theta_sqr.mul(&w),
        }
    };
    let psi = |k: usize, q: &Multiindex| -> bool {
        let dq = &table.delta_q[q];
        if q.degree() < 2 || S::real_is_negligible(dq, ctx) {
            return false;
        }
        match omega_sqr(k) {
            None => true,
            Some(w) => *dq < theta.theta_sqr.mul(&w),
        }
    };
    let depth = params.depth;
    let phi_tables: Vec<(HashMap<Multiindex, u64>, Vec<HashMap<Multiindex, u64>>)> = (0..=depth)
        .into_par_iter()
        .map(|k| {
            let total = decomposition_dp(&table.order, |_| 0u64, |q, m| m + psi(k, q) as u64, |x, y| x + y);
            let per_j = (0..n)
                .map(|j| decomposition_dp(&table.order, |_| 0u64, |q, m| m + psi_j(k, q, j) as u64, |x, y| x + y))
                .collect();
            (total, per_j)
        })
        .collect();

    let order2: Vec<&Multiindex> = table.order.iter().filter(|q| q.degree() >= 2).collect();

    // Certified bound: η_Q <= c^{|Q|}.
    let half = pow2(-1, prec);
    let ln_theta_inv = -(theta.theta_sqr.to_float(prec).ln() * &half);
    let mut sum = float_zero(prec);
    for k in 0..depth {
        let ln_w = omega.value_sqr(k + 1).to_float(prec).ln() * &half;
        sum += ln_w * pow2(-(k as isize), prec);
    }
    let two_n = float_int(2 * n as i64, prec);
    let four_n = float_int(4 * n as i64, prec);
    let ln_c = -(&two_n * sum) + &four_n * ln_theta_inv;
    let mut growth = Vec::new();
    let mut c_estimate = float_zero(prec);
    for q in &order2 {
        let e = &eta[*q];
        let qd = float_int(q.degree() as i64, prec);
        let rhs = &ln_c * &qd;
        let (lhs_s, pass) = if *e == float_zero(prec) {
            ("0".to_string(), true)
        } else {
            let lhs = e.ln();
            let slack = &tol * float_max(one.clone(), abs(&rhs));
            let root = (lhs.clone() / &qd).exp();
            c_estimate = float_max(c_estimate, root);
            (render_float(&lhs), lhs <= &rhs + slack)
        };
        growth.push(BoundCheck {
            q: q.to_vec(),
            lhs: lhs_s,
            rhs: render_float(&rhs),
            pass,
        });
    }

    // Certified bound: φ^(k)(Q) = 0 for |Q| <= 2^k, <= 2n|Q|/2^k beyond.
    let mut counts = Vec::new();
    let mut phi_rows = Vec::new();
    let mut phi_j_rows = Vec::new();
    for (k, (total, per_j)) in phi_tables.iter().enumerate() {
        for q in &order2 {
            let v = total[*q];
            let qd = q.degree() as u128;
            let pow = 1u128 << k.min(100);
            let pass = if qd <= pow {
                v == 0
            } else {
                (v as u128) * pow <= 2 * n as u128 * qd
            };
            counts.push(BoundCheck {
                q: q.to_vec(),
                lhs: format!("phi^({k}) = {v}"),
                rhs: if qd <= pow {
                    "0".to_string()
                } else {
                    format!("{}/2^{k}", 2 * n as u128 * qd)
                },
                pass,
            });
            phi_rows.push((k, (*q).clone(), v));
            phi_j_rows.push((k, (*q).clone(), per_j.iter().map(|t| t[*q]).collect()));
        }
    }

    // ψ^(k)_j(Q) = 1 and Q = P + P' with 1 <= |P| <= 2^k - 1, |P'| >= 2
    // force ψ^(k)_j(P') = 0.
    let mut split_checked = 0;
    let mut split_violations = Vec::new();
    for k in 1..=depth {
        let limit = (1usize << k.min(60)) - 1;
        for q in &order2 {
            for j in 0..n {
                if !psi_j(k, q, j) {
                    continue;
                }
                for p in q.divisors() {
                    let dp = p.degree();
                    if dp == 0 || dp > limit || q.degree() - dp < 2 {
                        continue;
                    }
                    split_checked += 1;
                    let rest = q.checked_sub(&p).expect("divisor");
                    if ideal.member(&p) || ideal.member(&rest) || psi_j(k, &rest, j) {
                        split_violations.push(PsiSplitViolation {
                            k,
                            j: j + 1,
                            q: q.to_vec(),
                            p: p.to_vec(),
                        });
                    }
                }
            }
        }
    }

    // Certified bound: Σ_j |φ_{j,Q}| <= σ_Q η_Q.
    let phi_sigma_eta = phi.map(|phi| {
        let checks = order2
            .iter()
            .map(|q| {
                let mut lhs = float_zero(prec);
                for j in 0..n {
                    if let Some(c) = phi.component(j).get(q) {
                        lhs += c.modulus(prec);
                    }
                }
                let s = sigma.get(*q).cloned().unwrap_or_else(|| float_zero(prec));
                let rhs = s * &eta[*q];
                let pass = lhs <= &rhs + &tol * float_max(one.clone(), rhs.clone());
                BoundCheck {
                    q: q.to_vec(),
                    lhs: render_float(&lhs),
                    rhs: render_float(&rhs),
                    pass,
                }
            })
            .collect();
        BoundSummary::new("phi_tilde <= sigma * eta", checks)
    });

    let delta_q_sqr = table
        .order
        .iter()
        .map(|q| (q.clone(), table.delta_q[q].clone()))
        .collect();
    let sigma_rows = Multiindex::range(n, 2, degree)
        .into_iter()
        .map(|q| {
            let v = sigma.get(&q).cloned().unwrap_or_else(|| float_zero(prec));
            (q, v)
        })
        .collect();
    let eta_rows = table
        .order
        .iter()
        .map(|q| (q.clone(), eta[q].clone()))
        .collect();

    Ok(MajorantDiagnostics {
        theta,
        omega,
        degree,
        a,
        b,
        delta_q_sqr,
        sigma: sigma_rows,
        eta: eta_rows,
        phi: phi_rows,
        phi_j: phi_j_rows,
        c_estimate,
        ln_c,
        phi_sigma_eta,
        eta_growth: BoundSummary::new("eta <= c^|Q|", growth),
        phi_count: BoundSummary::new("phi^(k) <= 2n|Q|/2^k", counts),
        psi_splits_checked: split_checked,
        psi_split_violations: split_violations,
        warnings,
    })
}

fn abs(x: &Float) -> Float {
    if *x < Float::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}

/// Coefficients of `σ` for `2 <= |Q| <= N`: `σ_Q = {a w² / (1 - b w)}_Q` off
/// `I`, zero on `I`, with `w = Σ y_j + σ`.
fn sigma_series(
    n: usize,
    degree: usize,
    a: &Float,
    b: &Float,
    ideal: &MonomialIdeal,
    prec: usize,
) -> HashMap<Multiindex, Float> {
    // Homogeneous parts of w and of h = a w² / (1 - b w) = a w² + b w h.
    let mut w: Vec<HashMap<Multiindex, Float>> = vec![HashMap::new(); degree + 1];
    let mut h: Vec<HashMap<Multiindex, Float>> = vec![HashMap::new(); degree + 1];
    for k in 0..n {
        w[1].insert(Multiindex::unit(n, k), float_int(1, prec));
    }
    let mut sigma = HashMap::new();
    let product = |x: &HashMap<Multiindex, Float>, y: &HashMap<Multiindex, Float>, out: &mut HashMap<Multiindex, Float>, scale: &Float| {
        for (p, u) in x {
            for (q, v) in y {
                let term = u * v * scale;
                let key = p.add(q);
                let slot = out.entry(key).or_insert_with(|| float_zero(prec));
                *slot = &*slot + term;
            }
        }
    };
    for d in 2..=degree {
        let mut hd: HashMap<Multiindex, Float> = HashMap::new();
        for e in 1..d {
            product(&w[e], &w[d - e], &mut hd, a);
        }
        for e in 1..d.saturating_sub(1) {
            product(&w[e], &h[d - e], &mut hd, b);
        }
        for (q, v) in &hd {
            if !ideal.member(q) {
                sigma.insert(q.clone(), v.clone());
                w[d].insert(q.clone(), v.clone());
            }
        }
        h[d] = hd;
    }
    sigma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powerseries::TruncatedSeries;
    use crate::scalar::{float_to_f64, ExactCtx, GaussianRational as G};

    fn fam(rows: &[&[(i64, i64)]]) -> DiagonalFamily<G> {
        DiagonalFamily::new(
            rows.iter()
                .map(|r| r.iter().map(|&(p, q)| G::from_fractions(p, q, 0, 1)).collect())
                .collect(),
            &ExactCtx::default(),
        )
        .unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Brute-force ω_k² over every (Q, j) with 2 <= |Q| <= 2^k, Q ∉ I.
    fn omega_oracle(d: &DiagonalFamily<G>, i: &MonomialIdeal, k: usize) -> Option<BigRational> {
        let mut best: Option<BigRational> = None;
        for qq in Multiindex::range(d.n(), 2, 1 << k) {
            if i.member(&qq) {
                continue;
            }
            for j in 0..d.n() {
                let mut m = BigRational::zero();
                for row in 0..d.len() {
                    let mut p = G::one(&ExactCtx::default());
                    for (a, &e) in qq.as_slice().iter().enumerate() {
                        for _ in 0..e {
                            p = p.mul(d.mu(row, a));
                        }
                    }
                    let v = p.sub(d.mu(row, j)).norm_sqr();
                    if v > m {
                        m = v;
                    }
                }
                if !m.is_zero() && best.as_ref().is_none_or(|b| m < *b) {
                    best = Some(m);
                }
            }
        }
        best
    }

    #[test]
    fn theta_reduction_inverts_expanding_maps() {
        let ctx = ExactCtx::default();
        let lin = |a: i64, b: i64, c: i64, d: i64| {
            TruncatedMap::new(vec![
                TruncatedSeries::from_terms(2, 3, &ctx, [(Multiindex::from([1, 0]), G::from_fractions(a, b, 0, 1))])
                    .unwrap(),
                TruncatedSeries::from_terms(2, 3, &ctx, [(Multiindex::from([0, 1]), G::from_fractions(c, d, 0, 1))])
                    .unwrap(),
            ])
            .unwrap()
        };
        let family = vec![lin(2, 1, 3, 1), lin(1, 3, 5, 1)];
        let zero = MonomialIdeal::zero(2);
        assert!(!theta(&DiagonalFamily::from_maps(&family).unwrap(), &zero).satisfied);
        let red = theta_reduction(&family, &zero).unwrap();
        assert_eq!(red.column, 0);
        assert_eq!(red.inverted, vec![0]);
        let d = DiagonalFamily::from_maps(&red.family).unwrap();
        assert_eq!(*d.mu(0, 0), G::from_fractions(1, 2, 0, 1));
        assert!(theta(&d, &zero).satisfied);
    }

    #[test]
    fn omega_on_the_ideal() {
        let d = fam(&[&[(2, 1), (1, 2)]]);
        let i = ideal(2, &[&[1, 1]]);
        let seq = omega(&d, &i, 5, DEFAULT_OMEGA_CAP).unwrap();
        for k in 1..=5 {
            assert_eq!(*seq.value_sqr(k), q(1, 16));
            assert_eq!(omega_oracle(&d, &i, k), Some(q(1, 16)));
            assert_eq!(seq.entries[k - 1].source, OmegaSource::Exhaustive);
        }
        assert_eq!(seq.entries[0].attained, (Multiindex::from([0, 2]), 1));
    }

    #[test]
    fn omega_zero_ideal_skips_resonances() {
        let d = fam(&[&[(2, 1), (1, 2)]]);
        let seq = omega(&d, &MonomialIdeal::zero(2), 3, DEFAULT_OMEGA_CAP).unwrap();
        for k in 1..=3 {
            assert_eq!(*seq.value_sqr(k), q(1, 16));
            assert_eq!(omega_oracle(&d, &MonomialIdeal::zero(2), k), Some(q(1, 16)));
        }
    }

    #[test]
    fn omega_identity_family_fails() {
        let d = fam(&[&[(1, 1), (1, 1)]]);
        assert!(matches!(
            omega(&d, &MonomialIdeal::zero(2), 2, 64),
            Err(Error::AllDivisorsVanish { .. })
        ));
    }

    #[test]
    fn omega_tail_certificate() {
        let d = fam(&[&[(2, 1), (1, 2)]]);
        let seq = omega(&d, &ideal(2, &[&[1, 1]]), 12, 16).unwrap();
        assert_eq!(seq.exhaustive_degree, 16);
        assert!(seq.all_certified());
        assert_eq!(seq.entries[11].source, OmegaSource::TailCertified);
        assert_eq!(*seq.value_sqr(12), q(1, 16));
        // Mixed moduli on the zero ideal: no certificate.
        let seq = omega(&d, &MonomialIdeal::zero(2), 6, 16).unwrap();
        assert!(!seq.all_certified());
        assert!(!seq.warnings.is_empty());
    }

    #[test]
    fn brjuno_sums() {
        let d = fam(&[&[(2, 1), (1, 2)]]);
        let seq = omega(&d, &ideal(2, &[&[1, 1]]), 8, DEFAULT_OMEGA_CAP).unwrap();
        let sums = brjuno_partial(&seq);
        let ln4 = 4f64.ln();
        assert!((float_to_f64(&sums[0]) - ln4 / 2.0).abs() < 1e-15);
        for (k, s) in sums.iter().enumerate() {
            let closed = ln4 * (1.0 - 0.5f64.powi(k as i32 + 1));
            assert!((float_to_f64(s) - closed).abs() < 1e-14);
        }
        let unit = fam(&[&[(1, 1), (-1, 1)]]);
        let seq = omega(&unit, &MonomialIdeal::zero(2), 2, 64).unwrap();
        assert_eq!(*seq.value_sqr(1), q(4, 1));
    }

    #[test]
    fn theta_examples() {
        let t = theta(&fam(&[&[(2, 1), (1, 2)]]), &MonomialIdeal::zero(2));
        assert_eq!(t.theta_sqr, q(1, 64));
        assert!(t.satisfied);
        let t = theta(&fam(&[&[(2, 1), (3, 1)]]), &MonomialIdeal::zero(2));
        assert_eq!(t.four_theta_sqr, q(4, 1));
        assert!(!t.satisfied);
        assert_eq!(t.violations, vec![0, 1]);
        assert_eq!(t.warnings.len(), 1);
        let t = theta(&fam(&[&[(2, 1), (1, 2), (1, 1)]]), &ideal(3, &[&[1, 1, 0]]));
        assert_eq!(t.s_used, vec![2]);
        assert_eq!(t.theta_sqr, q(1, 16));
        assert!(t.satisfied);
    }

    fn sample_map() -> TruncatedMap<G> {
        let ctx = ExactCtx::default();
        let c0 = TruncatedSeries::from_terms(
            2,
            6,
            &ctx,
            [
                (Multiindex::from([1, 0]), G::from_i64(2, 0)),
                (Multiindex::from([0, 2]), G::from_fractions(-7, 4, 0, 1)),
            ],
        )
        .unwrap();
        let c1 = TruncatedSeries::from_terms(2, 6, &ctx, [(Multiindex::from([0, 1]), G::from_fractions(1, 2, 0, 1))]).unwrap();
        TruncatedMap::new(vec![c0, c1]).unwrap()
    }

    #[test]
    fn eta_and_phi_small_cases() {
        let f = sample_map();
        let d = DiagonalFamily::from_maps(std::slice::from_ref(&f)).unwrap();
        let i = ideal(2, &[&[1, 1]]);
        let diag = majorant_diagnostics(std::slice::from_ref(&f), &d, &i, &MajorantParams::default(), None).unwrap();
        // δ_(0,2) = min(|1/4 - 2|, |1/4 - 1/2|) = 1/4, one decomposition into (0,1)s.
        assert_eq!(float_to_f64(diag.eta_of(&Multiindex::from([0, 2])).unwrap()), 4.0);
        assert_eq!(diag.phi_of(1, &Multiindex::from([0, 2])), Some(0));
        assert!(diag.phi_count.pass);
        assert!(diag.psi_split_violations.is_empty());
        // a = 7/4 at Q = (0, 2) with b = 1.
        assert_eq!(float_to_f64(&diag.a), 1.75);
        // σ_(0,2) = a.
        assert_eq!(float_to_f64(diag.sigma_of(&Multiindex::from([0, 2])).unwrap()), 1.75);
        assert_eq!(float_to_f64(diag.sigma_of(&Multiindex::from([1, 1])).unwrap()), 0.0);
    }

    #[test]
    fn psi_vanishes_for_large_divisors() {
        let f = sample_map();
        let d = DiagonalFamily::from_maps(std::slice::from_ref(&f)).unwrap();
        let i = ideal(2, &[&[1, 1]]);
        let params = MajorantParams {
            depth: 1,
            ..MajorantParams::default()
        };
        let diag = majorant_diagnostics(std::slice::from_ref(&f), &d, &i, &params, None).unwrap();
        // θ ω_1 = (1/8)(1/4): every δ_{Q,j} on the non-ideal monomials is larger.
        let thr = q(1, 64) * q(1, 16);
        for (qq, _) in diag.delta_q_sqr.iter().filter(|(qq, _)| qq.degree() >= 2 && qq.degree() <= 4) {
            for j in 0..2 {
                let dj = d.delta(qq, j).max_norm_sqr;
                assert!(dj >= thr);
            }
        }
        for (k, _, counts) in &diag.phi_j {
            if *k == 1 {
                assert!(counts.iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn linear_family_has_zero_majorants() {
        let ctx = ExactCtx::default();
        let m = crate::powerseries::Matrix::diagonal(vec![G::from_i64(2, 0), G::from_fractions(1, 2, 0, 1)], &ctx);
        let f = TruncatedMap::linear(&m, 6, &ctx);
        let d = DiagonalFamily::from_maps(std::slice::from_ref(&f)).unwrap();
        let diag = majorant_diagnostics(
            std::slice::from_ref(&f),
            &d,
            &ideal(2, &[&[1, 1]]),
            &MajorantParams::default(),
            Some(&TruncatedMap::identity(2, 6, &ctx)),
        )
        .unwrap();
        assert_eq!(float_to_f64(&diag.a), 0.0);
        assert!(diag.sigma.iter().all(|(_, v)| *v == float_zero(128)));
        assert!(diag.all_pass());
    }

    #[test]
    fn budget_guard() {
        let f = sample_map();
        let d = DiagonalFamily::from_maps(std::slice::from_ref(&f)).unwrap();
        let params = MajorantParams {
            max_degree: 4,
            ..MajorantParams::default()
        };
        assert!(matches!(
            majorant_diagnostics(std::slice::from_ref(&f), &d, &MonomialIdeal::zero(2), &params, None),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
