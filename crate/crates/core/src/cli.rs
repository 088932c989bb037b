//! Job files, report rendering and exit codes for the `germlin` binary.
//!
//! A job is a TOML file:
//!
//! ```toml
//! mode = "exact"        # or "float"
//! precision = 128
//! n = 2
//! degree = 4
//! depth = 3             # K for the small-divisor table
//! b = "1"               # majorant constant
//! solve = "strict"      # or "normalform"
//! family = [ [ [[[1, 0], "2", "0"], [[0, 2], "-7/4", "0"]], [[[0, 1], "1/2", "0"]] ] ]
//! ideal = [[1, 1]]
//!
//! [[involutions]]
//! b = [[["1", "0"]]]
//! r = [[[[2], "1", "0"]]]
//! ```
//!
//! `family` is a list of maps, each a list of components, each a list of
//! terms `[[q_1, ..., q_n], re, im]`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideal::MonomialIdeal;
use crate::linearizer::{linearize_on_ideal, verify, CellCase, LinearizationResult, SolveMode, VerificationReport};
use crate::powerseries::{MapLiteral, Matrix, MatrixLiteral, Multiindex, TruncatedMap};
use crate::realmanifolds::{straighten, AntiInvolution, StraighteningReport};
use crate::resonance::DiagonalFamily;
use crate::scalar::{
    parse_rational, render_float, ExactCtx, FloatComplex, FloatCtx, GaussianRational, Mode, RealValue, Scalar,
    DEFAULT_PRECISION,
};
use crate::smalldivisors::{brjuno_partial, majorant_diagnostics, MajorantDiagnostics, MajorantParams, OmegaSequence};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "germlin", version, about = "Linearization of commuting germs on monomial ideals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Resonances, invariant monomials and ideal checks of a family.
    Analyze(JobArgs),
    /// ω table, Brjuno partial sums and majorant certificates.
    Smalldiv(JobArgs),
    /// Conjugacy on the ideal and its verification.
    Linearize(JobArgs),
    /// Straightening of a family of anti-holomorphic involutions.
    Straighten(JobArgs),
}

impl Command {
    pub fn kind(&self) -> CommandKind {
        match self {
            Command::Analyze(_) => CommandKind::Analyze,
            Command::Smalldiv(_) => CommandKind::Smalldiv,
            Command::Linearize(_) => CommandKind::Linearize,
            Command::Straighten(_) => CommandKind::Straighten,
        }
    }

    pub fn args(&self) -> &JobArgs {
        match self {
            Command::Analyze(a) | Command::Smalldiv(a) | Command::Linearize(a) | Command::Straighten(a) => a,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Analyze,
    Smalldiv,
    Linearize,
    Straighten,
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// Job file (TOML).
    pub job: PathBuf,
    #[arg(long, value_parser = ["exact", "float"])]
    pub mode: Option<String>,
    #[arg(long)]
    pub precision: Option<usize>,
    /// Truncation degree N.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Depth K of the small-divisor table.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, conflicts_with = "normalform")]
    pub strict: bool,
    #[arg(long)]
    pub normalform: bool,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print a human-readable digest.
    #[arg(long)]
    pub summary: bool,
}

fn default_precision() -> usize {
    DEFAULT_PRECISION
}

fn default_depth() -> usize {
    3
}

fn default_b() -> String {
    "1".into()
}

fn default_solve() -> SolveMode {
    SolveMode::Strict
}

fn default_mode() -> Mode {
    Mode::Exact
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default = "default_precision")]
    pub precision: usize,
    pub n: usize,
    pub degree: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_b")]
    pub b: String,
    #[serde(default = "default_solve")]
    pub solve: SolveMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<MapLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involutions: Option<Vec<InvolutionSpec>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvolutionSpec {
    pub b: MatrixLiteral,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<MapLiteral>,
}

impl JobSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Applies command-line overrides.
    pub fn with_overrides(mut self, args: &JobArgs) -> Self {
        if let Some(m) = &args.mode {
            self.mode = if m == "float" { Mode::Float } else { Mode::Exact };
        }
        if let Some(p) = args.precision {
            self.precision = p;
        }
        if let Some(d) = args.degree {
            self.degree = d;
        }
        if let Some(k) = args.depth {
            self.depth = k;
        }
        if args.strict {
            self.solve = SolveMode::Strict;
        }
        if args.normalform {
            self.solve = SolveMode::NormalForm;
        }
        self
    }

    fn validate_for(&self, kind: CommandKind) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        if self.degree < 1 {
            return Err(Error::Invalid("degree must be at least 1".into()));
        }
        if self.precision < 16 {
            return Err(Error::Invalid("precision must be at least 16 bits".into()));
        }
        match kind {
            CommandKind::Straighten => {
                if self.involutions.as_ref().is_none_or(Vec::is_empty) {
                    return Err(Error::Invalid("straighten needs [[involutions]]".into()));
                }
                if self.family.is_some() {
                    return Err(Error::Invalid("straighten takes involutions, not a family".into()));
                }
            }
            _ => {
                if self.family.as_ref().is_none_or(Vec::is_empty) {
                    return Err(Error::Invalid(format!("{kind:?} needs a family").to_lowercase()));
                }
                if self.involutions.is_some() {
                    return Err(Error::Invalid("involutions are only used by straighten".into()));
                }
            }
        }
        Ok(())
    }
}

/// Report, exit code and digest of one job.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Value,
    pub summary: String,
}

impl Outcome {
    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Obstruction { .. } => EXIT_OBSTRUCTION,
        Error::HypothesisFailed { .. }
        | Error::NotCommuting { .. }
        | Error::NotCommutative { .. }
        | Error::NonDiagonalLinearPart { .. }
        | Error::ZeroEigenvalue { .. }
        | Error::Incompatible { .. }
        | Error::AllDivisorsVanish { .. }
        | Error::SingularMatrix => EXIT_HYPOTHESIS,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

/// Runs a job already loaded in memory.
pub fn execute(kind: CommandKind, spec: &JobSpec) -> Outcome {
    let result = spec.validate_for(kind).and_then(|_| match spec.mode {
        Mode::Exact => {
            let ctx = ExactCtx {
                precision: spec.precision,
            };
            dispatch::<GaussianRational>(kind, spec, &ctx)
        }
        Mode::Float => dispatch::<FloatComplex>(kind, spec, &FloatCtx::with_precision(spec.precision)),
    });
    let (exit_code, status, body, summary, error) = match result {
        Ok(r) => (r.exit_code, r.status, Some(r.body), r.summary, None),
        Err(e) => {
            let code = exit_code_for(&e);
            let status = match code {
                EXIT_OBSTRUCTION => "obstruction",
                EXIT_HYPOTHESIS => "hypothesis_failed",
                EXIT_INPUT => "invalid_input",
                _ => "internal_error",
            };
            let summary = format!("{kind:?}: {status}: {e}\n").to_lowercase();
            (code, status.to_string(), None, summary, Some(error_json(&e)))
        }
    };
    let report = json!({
        "command": kind,
        "status": status,
        "exit_code": exit_code,
        "spec": spec,
        "result": body,
        "error": error,
    });
    Outcome {
        exit_code,
        report,
        summary,
    }
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::Obstruction {
            multiindex,
            component,
            coefficient,
        } => json!({
            "kind": "obstruction",
            "message": e.to_string(),
            "q": multiindex,
            "j": component,
            "coefficient": coefficient,
        }),
        Error::HypothesisFailed { check, witness } => json!({
            "kind": "hypothesis_failed",
            "message": e.to_string(),
            "check": check,
            "witness": witness,
        }),
        _ => json!({ "kind": "error", "message": e.to_string() }),
    }
}

/// Parses arguments, runs the job, writes the report and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stdout, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let kind = cli.command.kind();
    let args = cli.command.args();
    let outcome = match JobSpec::load(&args.job) {
        Ok(spec) => execute(kind, &spec.with_overrides(args)),
        Err(e) => Outcome {
            exit_code: EXIT_INPUT,
            report: json!({
                "command": kind,
                "status": "invalid_input",
                "exit_code": EXIT_INPUT,
                "spec": Value::Null,
                "result": Value::Null,
                "error": error_json(&e),
            }),
            summary: format!("cannot read {}: {e}\n", args.job.display()),
        },
    };
    let rendered = outcome.render();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                let _ = writeln!(stdout, "cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None if !args.summary => {
            let _ = stdout.write_all(rendered.as_bytes());
        }
        None => {}
    }
    if args.summary {
        let _ = stdout.write_all(outcome.summary.as_bytes());
    }
    outcome.exit_code
}

struct Success {
    exit_code: i32,
    status: String,
    body: Value,
    summary: String,
}

fn dispatch<S: Scalar>(kind: CommandKind, spec: &JobSpec, ctx: &S::Ctx) -> Result<Success> {
    let ideal = match &spec.ideal {
        Some(gens) => MonomialIdeal::from_exponents(spec.n, gens)?,
        None => MonomialIdeal::zero(spec.n),
    };
    match kind {
        CommandKind::Straighten => {
            let rhos = load_involutions::<S>(spec, ctx)?;
            let report = straighten(&rhos, &ideal)?;
            let ok = report.success();
            Ok(Success {
                exit_code: if ok { EXIT_OK } else { EXIT_HYPOTHESIS },
                status: if ok { "ok" } else { "check_failed" }.into(),
                summary: straighten_summary(&report),
                body: straighten_json(&report),
            })
        }
        _ => {
            let family = load_family::<S>(spec, ctx)?;
            match kind {
                CommandKind::Analyze => analyze(&family, &ideal),
                CommandKind::Smalldiv => smalldiv(&family, &ideal, spec),
                _ => linearize(&family, &ideal, spec.solve),
            }
        }
    }
}

fn load_family<S: Scalar>(spec: &JobSpec, ctx: &S::Ctx) -> Result<Vec<TruncatedMap<S>>> {
    let lits = spec.family.as_ref().expect("validated");
    lits.iter()
        .map(|lit| {
            let m = TruncatedMap::from_literal(lit, spec.degree, ctx)?;
            if m.n() != spec.n {
                return Err(Error::DimensionMismatch {
                    expected: spec.n,
                    found: m.n(),
                });
            }
            Ok(m)
        })
        .collect()
}

fn load_involutions<S: Scalar>(spec: &JobSpec, ctx: &S::Ctx) -> Result<Vec<AntiInvolution<S>>> {
    let lits = spec.involutions.as_ref().expect("validated");
    lits.iter()
        .map(|inv| {
            let b = Matrix::<S>::from_literal(&inv.b, ctx)?;
            if b.n() != spec.n {
                return Err(Error::DimensionMismatch {
                    expected: spec.n,
                    found: b.n(),
                });
            }
            let r = match &inv.r {
                Some(lit) => TruncatedMap::from_literal(lit, spec.degree, ctx)?,
                None => TruncatedMap::zero(spec.n, spec.degree, ctx),
            };
            AntiInvolution::new(&b, &r)
        })
        .collect()
}

fn scalar_json<S: Scalar>(s: &S) -> Value {
    let (re, im) = s.to_literal();
    json!([re, im])
}

fn q_json(q: &Multiindex) -> Value {
    json!(q.as_slice())
}

fn analyze<S: Scalar>(family: &[TruncatedMap<S>], ideal: &MonomialIdeal) -> Result<Success> {
    let d = DiagonalFamily::from_maps(family)?;
    let degree = family[0].degree();
    let ctx = d.ctx();
    let resonance = d.centralizer_report(degree);
    let commuting = crate::linearizer::check_commuting(family)?;
    let checks = (0..d.len())
        .map(|i| ideal.invariance_and_compatibility(&d.matrix(i), degree, ctx))
        .collect::<Result<Vec<_>>>()?;
    let variety = crate::realmanifolds::describe_variety(ideal);
    let gens: Vec<String> = resonance.res_ideal.generators().iter().map(|g| format!("{:?}", g.as_slice())).collect();
    let summary = format!(
        "analyze: {} map(s), n = {}, N = {degree}\n  commuting: {commuting}\n  resonant pairs: {}\n  ResIdeal: ({})\n  cutoff limited: {}\n  V(I): {}\n",
        family.len(),
        d.n(),
        resonance.resonant_pairs.len(),
        gens.join(", "),
        resonance.cutoff_limited,
        variety.rendered,
    );
    Ok(Success {
        exit_code: EXIT_OK,
        status: "ok".into(),
        body: json!({
            "eigenvalues": d.render(),
            "commuting": commuting,
            "resonance": resonance,
            "ideal": ideal,
            "properly_embedded": ideal.properly_embedded().map(|s| s.iter().map(|a| a + 1).collect::<Vec<_>>()),
            "variety": variety,
            "ideal_checks": checks,
        }),
        summary,
    })
}

fn omega_json<S: Scalar>(seq: &OmegaSequence<S>) -> Value {
    let partial = brjuno_partial(seq);
    let entries: Vec<Value> = seq
        .entries
        .iter()
        .zip(&partial)
        .map(|(e, s)| {
            json!({
                "k": e.k,
                "omega": e.value_sqr.render_sqrt(seq.precision),
                "omega_sqr": e.value_sqr.render(),
                "attained": { "q": q_json(&e.attained.0), "j": e.attained.1 + 1 },
                "source": e.source,
                "brjuno_partial": render_float(s),
            })
        })
        .collect();
    json!({
        "ideal": seq.ideal,
        "exhaustive_degree": seq.exhaustive_degree,
        "entries": entries,
        "all_certified": seq.all_certified(),
        "warnings": seq.warnings,
    })
}

fn majorant_json<S: Scalar>(m: &MajorantDiagnostics<S>) -> Value {
    let prec = m.omega.precision;
    let floats = |v: &[(Multiindex, crate::scalar::Float)]| -> Vec<Value> {
        v.iter().map(|(q, x)| json!([q.as_slice(), render_float(x)])).collect()
    };
    json!({
        "theta": {
            "theta": m.theta.theta_sqr.render_sqrt(prec),
            "four_theta": m.theta.four_theta_sqr.render_sqrt(prec),
            "satisfied": m.theta.satisfied,
            "indices": m.theta.s_used.iter().map(|j| j + 1).collect::<Vec<_>>(),
            "properly_embedded": m.theta.properly_embedded,
        },
        "omega": omega_json(&m.omega),
        "a": render_float(&m.a),
        "b": render_float(&m.b),
        "sigma": floats(&m.sigma),
        "eta": floats(&m.eta),
        "phi_counts": m.phi.iter().map(|(k, q, v)| json!([k, q.as_slice(), v])).collect::<Vec<_>>(),
        "c_estimate": render_float(&m.c_estimate),
        "ln_c": render_float(&m.ln_c),
        "phi_sigma_eta": m.phi_sigma_eta,
        "eta_growth": m.eta_growth,
        "phi_count": m.phi_count,
        "psi_splits": {
            "checked": m.psi_splits_checked,
            "violations": m.psi_split_violations,
        },
        "all_pass": m.all_pass(),
        "warnings": m.warnings,
    })
}

fn smalldiv<S: Scalar>(family: &[TruncatedMap<S>], ideal: &MonomialIdeal, spec: &JobSpec) -> Result<Success> {
    let d = DiagonalFamily::from_maps(family)?;
    let params = MajorantParams {
        b: parse_rational(&spec.b)?,
        depth: spec.depth,
        ..MajorantParams::default()
    };
    let mut notes = Vec::new();
    let phi = match linearize_on_ideal(family, ideal, SolveMode::Strict) {
        Ok(r) => Some(r.phi),
        Err(e) => {
            notes.push(format!("no conjugator for the σ·η bound: {e}"));
            None
        }
    };
    let m = majorant_diagnostics(family, &d, ideal, &params, phi.as_ref())?;
    let prec = m.omega.precision;
    let mut summary = format!("smalldiv: K = {}, N = {}\n", m.omega.k_max(), m.degree);
    for e in &m.omega.entries {
        summary.push_str(&format!(
            "  ω_{} = {} at Q={:?}, j={} ({:?})\n",
            e.k,
            e.value_sqr.render_sqrt(prec),
            e.attained.0.as_slice(),
            e.attained.1 + 1,
            e.source
        ));
    }
    if let Some(s) = brjuno_partial(&m.omega).last() {
        summary.push_str(&format!("  Brjuno partial sum: {}\n", render_float(s)));
    }
    summary.push_str(&format!(
        "  4θ <= 1: {}\n  certificates: {}\n",
        m.theta.satisfied,
        if m.all_pass() { "pass" } else { "FAIL" }
    ));
    let mut body = majorant_json(&m);
    body["notes"] = json!(notes);
    Ok(Success {
        exit_code: EXIT_OK,
        status: "ok".into(),
        body,
        summary,
    })
}

pub fn linearization_json<S: Scalar>(r: &LinearizationResult<S>) -> Value {
    let trace: Vec<Value> = r
        .trace
        .iter()
        .map(|t| {
            json!({
                "q": q_json(&t.q),
                "j": t.j + 1,
                "case": t.case,
                "pivot": t.pivot.map(|i| i + 1),
                "divisor": t.divisor.as_ref().map(scalar_json),
                "tied": t.tied.iter().map(|i| i + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "mode": r.mode,
        "degree": r.degree,
        "phi": r.phi.to_literal(),
        "g": r.g.iter().map(TruncatedMap::to_literal).collect::<Vec<_>>(),
        "trace": trace,
        "obstructions": r.obstructions.iter().map(|o| json!({
            "q": q_json(&o.q), "j": o.j + 1, "member": o.member + 1, "coefficient": scalar_json(&o.coefficient),
        })).collect::<Vec<_>>(),
        "incompatibilities": r.incompatibilities.iter().map(|o| json!({
            "q": q_json(&o.q), "j": o.j + 1, "pivot": o.pivot + 1, "member": o.member + 1, "residual": scalar_json(&o.residual),
        })).collect::<Vec<_>>(),
    })
}

fn verification_summary(v: &VerificationReport) -> String {
    let mut s = String::new();
    for c in [&v.conjugacy, &v.support, &v.normalization] {
        s.push_str(&format!(
            "  {}: {} (residual {})\n",
            c.name,
            if c.pass { "pass" } else { "FAIL" },
            c.residual
        ));
    }
    s.push_str(&format!(
        "  tie-break: {} ({} cells, {} tied, {} mismatches)\n",
        if v.tie_break.pass { "pass" } else { "FAIL" },
        v.tie_break.cells_checked,
        v.tie_break.tied_cells,
        v.tie_break.mismatches.len()
    ));
    for r in &v.rho {
        let state = match r.pass {
            Some(true) => "pass".to_string(),
            Some(false) => "FAIL".to_string(),
            None => format!("skipped ({})", r.failed_hypothesis.clone().unwrap_or_default()),
        };
        s.push_str(&format!("  ρ_{}∘Φ∘ρ_{} = Φ: {state}\n", r.index, r.index));
    }
    s
}

fn linearize<S: Scalar>(family: &[TruncatedMap<S>], ideal: &MonomialIdeal, mode: SolveMode) -> Result<Success> {
    let result = linearize_on_ideal(family, ideal, mode)?;
    let d = DiagonalFamily::from_maps(family)?;
    let resonance = d.centralizer_report(result.degree);
    let v = verify(&result, family, ideal, &resonance, &[])?;
    let (exit_code, status) = if !result.obstructions.is_empty() {
        (EXIT_OBSTRUCTION, "normal_form")
    } else if !v.all_pass() {
        (EXIT_HYPOTHESIS, "check_failed")
    } else {
        (EXIT_OK, "ok")
    };
    let removable = result.trace.iter().filter(|t| t.case == CellCase::Removable).count();
    let mut summary = format!(
        "linearize ({:?}): N = {}, {} cells, {} removable, {} resonant terms kept\n",
        mode,
        result.degree,
        result.trace.len(),
        removable,
        result.obstructions.len()
    );
    summary.push_str(&verification_summary(&v));
    let mut body = linearization_json(&result);
    body["verification"] = serde_json::to_value(&v).expect("serializable");
    Ok(Success {
        exit_code,
        status: status.into(),
        body,
        summary,
    })
}

pub fn straighten_json<S: Scalar>(r: &StraighteningReport<S>) -> Value {
    let m = r.pairs.m();
    let pairs: Vec<Value> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| {
            json!({
                "i": i + 1,
                "j": j + 1,
                "map": r.pairs.map(i, j).to_literal(),
                "linear": r.pairs.linear(i, j).to_literal(),
            })
        })
        .collect();
    let transported: Vec<Value> = r
        .transported
        .iter()
        .map(|t| json!({ "b": t.b().to_literal(), "r": t.r().to_literal() }))
        .collect();
    json!({
        "degree": r.degree,
        "ideal": r.ideal,
        "validations": r.validations,
        "pairs": pairs,
        "commuting": r.pairs.is_commuting(),
        "resonance": r.resonance,
        "ideal_checks": r.ideal_checks,
        "nonresonance": r.nonresonance,
        "linearization": linearization_json(&r.linearization),
        "verification": r.verification,
        "transported": transported,
        "linear_mod_ideal": r.linear_mod_ideal,
        "conj_identity": r.conj_identity,
        "simultaneously_normalizable": r.simultaneously_normalizable,
        "normal_form_support": r.normal_form_support,
        "variety": r.variety,
        "fixed_sets": r.fixed_sets,
        "success": r.success(),
    })
}

fn straighten_summary<S: Scalar>(r: &StraighteningReport<S>) -> String {
    let gens: Vec<String> = r.resonance.res_ideal.generators().iter().map(|g| format!("{:?}", g.as_slice())).collect();
    let mut s = format!(
        "straighten: {} involution(s), N = {}\n  ResIdeal of the pair maps: ({})\n",
        r.pairs.m(),
        r.degree,
        gens.join(", ")
    );
    for c in &r.linear_mod_ideal {
        s.push_str(&format!("  {}: {}\n", c.name, if c.pass { "pass" } else { "FAIL" }));
    }
    s.push_str(&format!(
        "  conj identity residual: {}\n  simultaneously normalizable: {}\n",
        r.conj_identity.residual, r.simultaneously_normalizable.pass
    ));
    s.push_str(&verification_summary(&r.verification));
    s.push_str(&format!("  invariant variety: {}\n", r.variety.rendered));
    for f in &r.fixed_sets {
        s.push_str(&format!("  M_{} ∩ S: {}\n", f.k, f.rendered));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const LIN: &str = r#"
n = 2
degree = 4
family = [ [ [[[1, 0], "2", "0"], [[0, 2], "-7/4", "0"]], [[[0, 1], "1/2", "0"]] ] ]
ideal = [[1, 1]]
"#;

    #[test]
    fn linearize_job() {
        let spec = JobSpec::from_toml(LIN).unwrap();
        let out = execute(CommandKind::Linearize, &spec);
        assert_eq!(out.exit_code, EXIT_OK, "{}", out.render());
        let phi = &out.report["result"]["phi"];
        assert_eq!(phi[0][0], json!([[0, 2], "1", "0"]));
        assert_eq!(out.report["spec"]["n"], json!(2));
    }

    #[test]
    fn obstruction_job() {
        let spec = JobSpec::from_toml(
            r#"
n = 2
degree = 4
family = [ [ [[[1, 0], "4", "0"], [[0, 2], "1", "0"]], [[[0, 1], "2", "0"]] ] ]
"#,
        )
        .unwrap();
        let out = execute(CommandKind::Linearize, &spec);
        assert_eq!(out.exit_code, EXIT_OBSTRUCTION);
        assert_eq!(out.report["error"]["q"], json!([0, 2]));
        assert_eq!(out.report["error"]["j"], json!(1));
        let nf = JobSpec {
            solve: SolveMode::NormalForm,
            ..spec
        };
        assert_eq!(execute(CommandKind::Linearize, &nf).exit_code, EXIT_OBSTRUCTION);
    }

    #[test]
    fn malformed_inputs() {
        assert!(JobSpec::from_toml("n = 2\ndegree = 4\nfamily = [ [ [[[1], \"2\", \"0\"]] ] ]\nbogus = 1").is_err());
        let spec = JobSpec::from_toml("n = 2\ndegree = 4\nfamily = [ [ [[[1], \"2\", \"0\"]], [] ] ]").unwrap();
        assert_eq!(execute(CommandKind::Analyze, &spec).exit_code, EXIT_INPUT);
        let spec = JobSpec::from_toml("n = 2\ndegree = 4\nfamily = [ [ [[[1, 0], \"0.5\", \"0\"]], [[[0, 1], \"1\", \"0\"]] ] ]").unwrap();
        assert_eq!(execute(CommandKind::Analyze, &spec).exit_code, EXIT_INPUT);
        let float = JobSpec {
            mode: Mode::Float,
            ..spec
        };
        assert_eq!(execute(CommandKind::Analyze, &float).exit_code, EXIT_OK);
    }
}
