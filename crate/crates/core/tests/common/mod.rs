#![allow(dead_code)]

use germlin::{ExactCtx, GaussianRational as G, Matrix, MonomialIdeal, Multiindex, Scalar, TruncatedMap, TruncatedSeries};
use rand::Rng;

pub fn ctx() -> ExactCtx {
    ExactCtx::default()
}

pub fn q(re_num: i64, re_den: i64) -> G {
    G::from_fractions(re_num, re_den, 0, 1)
}

pub fn c(re_num: i64, im_num: i64, den: i64) -> G {
    G::from_fractions(re_num, den, im_num, den)
}

/// Map from per-component term lists.
pub fn map(degree: usize, comps: Vec<Vec<(Vec<u32>, G)>>) -> TruncatedMap<G> {
    let n = comps.len();
    TruncatedMap::new(
        comps
            .into_iter()
            .map(|t| {
                TruncatedSeries::from_terms(n, degree, &ctx(), t.into_iter().map(|(e, v)| (Multiindex::new(e), v)))
                    .unwrap()
            })
            .collect(),
    )
    .unwrap()
}

pub fn diag_map(mu: &[G], degree: usize) -> TruncatedMap<G> {
    TruncatedMap::linear(&Matrix::diagonal(mu.to_vec(), &ctx()), degree, &ctx())
}

pub fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
}

pub fn random_gaussian<R: Rng>(rng: &mut R) -> G {
    let den = rng.gen_range(1..=4);
    loop {
        let re = rng.gen_range(-3..=3);
        let im = rng.gen_range(-3..=3);
        if re != 0 || im != 0 {
            return G::from_fractions(re, den, im, den);
        }
    }
}

/// `Id` plus random coefficients on cells `(Q, j)`, `2 <= |Q| <= degree`,
/// accepted by `keep`.
pub fn random_tangent<R: Rng, F: Fn(&Multiindex, usize) -> bool>(
    rng: &mut R,
    n: usize,
    degree: usize,
    density: f64,
    keep: F,
) -> TruncatedMap<G> {
    let mut m = TruncatedMap::identity(n, degree, &ctx());
    for d in 2..=degree {
        for qq in Multiindex::shell(n, d) {
            for j in 0..n {
                if keep(&qq, j) && rng.gen_bool(density) {
                    m.component_mut(j).set(qq.clone(), random_gaussian(rng));
                }
            }
        }
    }
    m
}

/// `Φ ∘ G ∘ Φ^{-1}`.
pub fn conjugate(phi: &TruncatedMap<G>, g: &TruncatedMap<G>) -> TruncatedMap<G> {
    phi.compose(g).unwrap().compose(&phi.invert().unwrap()).unwrap()
}

pub fn is_zero_map(m: &TruncatedMap<G>) -> bool {
    m.coefficients().all(|(_, _, v)| v.is_exact_zero())
}
