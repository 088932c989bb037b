//! Simultaneous linearization on an ideal, with the verification report.

use germlin::linearizer::{linearize_on_ideal, verify, SolveMode};
use germlin::{DiagonalFamily, Error, ExactCtx, GaussianRational as G, MonomialIdeal, Result, TruncatedMap};

fn parse(json: &str, degree: usize) -> Result<TruncatedMap<G>> {
    TruncatedMap::from_literal(&serde_json::from_str(json).expect("literal"), degree, &ExactCtx::default())
}

fn main() -> Result<()> {
    let degree = 6;
    // (2x1, x2/2) and its square, conjugated by (y1 + y2², y2).
    let f1 = parse(r#"[ [[[1, 0], "2", "0"], [[0, 2], "-7/4", "0"]], [[[0, 1], "1/2", "0"]] ]"#, degree)?;
    let f2 = f1.compose(&f1)?;
    let family = vec![f1, f2];
    let ideal = MonomialIdeal::from_exponents(2, &[vec![1, 1]])?;

    let res = linearize_on_ideal(&family, &ideal, SolveMode::Strict)?;
    println!("Φ = {}", serde_json::to_string(&res.phi.to_literal()).expect("json"));
    let report = DiagonalFamily::from_maps(&family)?.centralizer_report(degree);
    let v = verify(&res, &family, &ideal, &report, &[])?;
    for c in [&v.conjugacy, &v.support, &v.normalization] {
        println!("{}: {} (residual {})", c.name, c.pass, c.residual);
    }
    println!("tie-break: {} tied of {} cells", v.tie_break.tied_cells, v.tie_break.cells_checked);

    // x2² in the first component cannot be removed off the ideal.
    let g = parse(r#"[ [[[1, 0], "4", "0"], [[0, 2], "1", "0"]], [[[0, 1], "2", "0"]] ]"#, degree)?;
    match linearize_on_ideal(std::slice::from_ref(&g), &MonomialIdeal::zero(2), SolveMode::Strict) {
        Err(Error::Obstruction { multiindex, component, coefficient }) => {
            println!("obstruction at Q = {multiindex:?}, component {component}: {coefficient}")
        }
        other => println!("unexpected: {other:?}"),
    }
    let nf = linearize_on_ideal(std::slice::from_ref(&g), &MonomialIdeal::zero(2), SolveMode::NormalForm)?;
    println!("normal form keeps {} resonant term(s)", nf.obstructions.len());
    Ok(())
}
