//! Resonances of a diagonal family, the resonant ideal and the variety it cuts out.

use germlin::realmanifolds::describe_variety;
use germlin::{DiagonalFamily, ExactCtx, GaussianRational as G, Result};

fn main() -> Result<()> {
    let ctx = ExactCtx::default();
    let families: [(&str, Vec<Vec<G>>); 3] = [
        ("diag(2, 1/2)", vec![vec![G::from_fractions(2, 1, 0, 1), G::from_fractions(1, 2, 0, 1)]]),
        (
            "diag(μ, conj μ), μ = (3+4i)/5",
            vec![vec![G::from_fractions(3, 5, 4, 5), G::from_fractions(3, 5, -4, 5)]],
        ),
        (
            "{diag(2, 3), diag(4, 9)}",
            vec![
                vec![G::from_fractions(2, 1, 0, 1), G::from_fractions(3, 1, 0, 1)],
                vec![G::from_fractions(4, 1, 0, 1), G::from_fractions(9, 1, 0, 1)],
            ],
        ),
    ];
    for (name, mu) in families {
        let d = DiagonalFamily::new(mu, &ctx)?;
        let report = d.centralizer_report(6);
        println!("{name}");
        println!("  resonant pairs up to degree 6: {}", report.resonant_pairs.len());
        for (q, j) in report.resonant_pairs.iter().take(4) {
            println!("    Q = {:?}, j = {}", q.as_slice(), j + 1);
        }
        println!("  invariant monomials: {:?}", report.invariant_generators.iter().map(|q| q.to_vec()).collect::<Vec<_>>());
        println!("  ResIdeal: {:?}", report.res_ideal.to_literal());
        println!("  V(I): {}", describe_variety(&report.res_ideal).rendered);
    }
    Ok(())
}
