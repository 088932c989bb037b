//! The same linearization over binary floats, with tolerance 2^-(p/2).

use germlin::linearizer::{linearize_on_ideal, SolveMode};
use germlin::{FloatComplex, FloatCtx, MonomialIdeal, Result, TruncatedMap};

fn main() -> Result<()> {
    let lit = serde_json::from_str(
        r#"[ [[[1, 0], "2", "0"], [[0, 2], "-1.75", "0"]], [[[0, 1], "0.5", "0"]] ]"#,
    )
    .expect("literal");
    let ideal = MonomialIdeal::from_exponents(2, &[vec![1, 1]])?;
    for precision in [64, 128, 256] {
        let ctx = FloatCtx::with_precision(precision);
        let f = TruncatedMap::<FloatComplex>::from_literal(&lit, 6, &ctx)?;
        let res = linearize_on_ideal(std::slice::from_ref(&f), &ideal, SolveMode::Strict)?;
        let residual = f.compose(&res.phi)?.sub(&res.phi.compose(&res.g[0])?)?;
        println!(
            "p = {precision:>3}: ε = 2^-{}, Φ = {}, residual {}",
            ctx.eps_bits,
            serde_json::to_string(&res.phi.to_literal()).expect("json"),
            germlin::scalar::render_float(&residual.max_abs(precision))
        );
    }
    Ok(())
}
