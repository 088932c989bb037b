//! Two totally real planes through the origin, moved by a holomorphic change of
//! coordinates and straightened back.

use germlin::realmanifolds::{straighten, AntiInvolution};
use germlin::{ExactCtx, GaussianRational as G, Matrix, MonomialIdeal, Result, TruncatedMap};

fn main() -> Result<()> {
    let ctx = ExactCtx::default();
    let degree = 6;
    let r = |p, q| G::from_fractions(p, q, 0, 1);
    let b1 = Matrix::from_rows(vec![vec![r(0, 1), r(1, 1)], vec![r(1, 1), r(0, 1)]])?;
    let b2 = Matrix::from_rows(vec![vec![r(0, 1), r(2, 1)], vec![r(1, 2), r(0, 1)]])?;
    let h = TruncatedMap::from_literal(
        &serde_json::from_str(r#"[ [[[1, 0], "1", "0"], [[0, 2], "1", "0"]], [[[0, 1], "1", "0"], [[2, 0], "1/3", "1/2"]] ]"#)
            .expect("literal"),
        degree,
        &ctx,
    )?;
    let zero = TruncatedMap::zero(2, degree, &ctx);
    let rhos = [b1, b2]
        .iter()
        .map(|b| AntiInvolution::new(b, &zero)?.transport(&h))
        .collect::<Result<Vec<_>>>()?;

    let rep = straighten(&rhos, &MonomialIdeal::from_exponents(2, &[vec![1, 1]])?)?;
    println!("D_12 eigenvalues: {:?}", rep.pairs.eigenvalues(0, 1));
    println!("ResIdeal: {:?}", rep.resonance.res_ideal.to_literal());
    for c in &rep.linear_mod_ideal {
        println!("{}: {}", c.name, c.pass);
    }
    println!("conj identity residual: {}", rep.conj_identity.residual);
    println!("invariant variety: {}", rep.variety.rendered);
    for f in &rep.fixed_sets {
        println!("M_{} ∩ S: {}", f.k, f.rendered);
    }
    println!("success: {}", rep.success());
    Ok(())
}
