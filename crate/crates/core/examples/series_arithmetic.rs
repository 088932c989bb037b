//! Truncated series and maps: products, composition, inversion.

use germlin::powerseries::MapLiteral;
use germlin::{ExactCtx, GaussianRational as G, Multiindex, Result, TruncatedMap, TruncatedSeries};

fn main() -> Result<()> {
    let ctx = ExactCtx::default();
    let degree = 5;

    // s = z1 + (1/2 + i) z2
    let s = TruncatedSeries::from_terms(
        2,
        degree,
        &ctx,
        [(Multiindex::from([1, 0]), G::from_fractions(1, 1, 0, 1)), (Multiindex::from([0, 1]), G::from_fractions(1, 2, 1, 1))],
    )?;
    let cube = s.mul(&s)?.mul(&s)?;
    println!("s^3:");
    for (q, c) in cube.terms() {
        println!("  {:?}  {c}", q.as_slice());
    }

    let lit: MapLiteral = serde_json::from_str(
        r#"[ [[[1, 0], "2", "0"], [[0, 2], "1", "0"]], [[[0, 1], "1/3", "0"], [[2, 0], "0", "1"]] ]"#,
    )
    .expect("literal");
    let f = TruncatedMap::<G>::from_literal(&lit, degree, &ctx)?;
    let inv = f.invert()?;
    println!("F^-1 = {}", serde_json::to_string(&inv.to_literal()).expect("json"));
    let back = f.compose(&inv)?;
    println!("F∘F^-1 = Id: {}", back == TruncatedMap::identity(2, degree, &ctx));
    println!("conj(F) = {}", serde_json::to_string(&f.conjugate_coefficients().to_literal()).expect("json"));
    Ok(())
}
