//! ω_k table, Brjuno partial sums and the majorant certificates.

use germlin::scalar::{render_float, RealValue};
use germlin::smalldivisors::{brjuno_partial, majorant_diagnostics, omega, theta, MajorantParams, DEFAULT_OMEGA_CAP};
use germlin::{DiagonalFamily, ExactCtx, GaussianRational as G, Matrix, MonomialIdeal, Result, TruncatedMap};

fn main() -> Result<()> {
    let ctx = ExactCtx::default();
    let ideal = MonomialIdeal::from_exponents(2, &[vec![1, 1]])?;

    let d = DiagonalFamily::new(vec![vec![G::from_fractions(2, 1, 0, 1), G::from_fractions(1, 2, 0, 1)]], &ctx)?;
    let seq = omega(&d, &ideal, 12, DEFAULT_OMEGA_CAP)?;
    let sums = brjuno_partial(&seq);
    println!("diag(2, 1/2) on (z1z2)");
    for e in &seq.entries {
        println!(
            "  ω_{:<2} = {:<6} at Q = {:?}, j = {}  S_{} = {}",
            e.k,
            e.value_sqr.render_sqrt(128),
            e.attained.0.as_slice(),
            e.attained.1 + 1,
            e.k,
            render_float(&sums[e.k - 1])
        );
    }

    // A unit-circle spectrum: the ψ^(k) splits are not vacuous here.
    let mu = vec![G::from_fractions(3, 5, 4, 5), G::from_fractions(3, 5, -4, 5)];
    let f = TruncatedMap::linear(&Matrix::diagonal(mu.clone(), &ctx), 8, &ctx);
    let d = DiagonalFamily::new(vec![mu], &ctx)?;
    let t = theta(&d, &ideal);
    println!("diag(μ, conj μ) on (z1z2): 4θ = {}", t.four_theta_sqr.render_sqrt(64));
    let diag = majorant_diagnostics(std::slice::from_ref(&f), &d, &ideal, &MajorantParams::default(), None)?;
    println!("  η <= c^|Q|: {} ({} checks)", diag.eta_growth.pass, diag.eta_growth.checked);
    println!("  φ^(k) count: {} ({} checks)", diag.phi_count.pass, diag.phi_count.checked);
    println!("  ψ splits: {} checked, {} violations", diag.psi_splits_checked, diag.psi_split_violations.len());
    Ok(())
}
