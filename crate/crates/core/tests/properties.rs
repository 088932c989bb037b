mod common;

use common::*;
use germlin::realmanifolds::{pair_maps, AntiInvolution};
use germlin::{DiagonalFamily, GaussianRational as G, Matrix, MonomialIdeal, Multiindex, Scalar, TruncatedMap, TruncatedSeries};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DEGREE: usize = 5;

fn coeff() -> impl Strategy<Value = G> {
    (-3i64..=3, -3i64..=3, 1i64..=4).prop_map(|(re, im, den)| G::from_fractions(re, den, im, den))
}

fn series(min_degree: u32) -> impl Strategy<Value = TruncatedSeries<G>> {
    prop::collection::vec(((0u32..=3, 0u32..=3), coeff()), 0..6).prop_map(move |terms| {
        TruncatedSeries::from_terms(
            2,
            DEGREE,
            &ctx(),
            terms
                .into_iter()
                .filter(|((a, b), _)| a + b >= min_degree)
                .map(|((a, b), c)| (Multiindex::new(vec![a, b]), c)),
        )
        .unwrap()
    })
}

fn nonzero() -> impl Strategy<Value = G> {
    coeff().prop_filter("nonzero", |c| !c.is_exact_zero())
}

/// Invertible germ: diagonal linear part plus higher-order terms.
fn germ() -> impl Strategy<Value = TruncatedMap<G>> {
    (nonzero(), nonzero(), series(2), series(2)).prop_map(|(a, b, s, t)| {
        let lin = diag_map(&[a, b], DEGREE);
        let comps = vec![lin.component(0).add(&s).unwrap(), lin.component(1).add(&t).unwrap()];
        TruncatedMap::new(comps).unwrap()
    })
}

fn unit_modulus() -> impl Strategy<Value = G> {
    prop::sample::select(vec![q(1, 1), q(-1, 1), c(0, 1, 1), c(3, 4, 5), c(5, -12, 13), c(-8, 15, 17)])
}

/// `B` with `B B̄ = Id`.
fn real_structure() -> impl Strategy<Value = Matrix<G>> {
    prop_oneof![
        (unit_modulus(), unit_modulus()).prop_map(|(a, b)| Matrix::diagonal(vec![a, b], &ctx())),
        (1i64..=3, 1i64..=3).prop_map(|(p, r)| {
            Matrix::from_rows(vec![vec![q(0, 1), q(p, r)], vec![q(r, p), q(0, 1)]]).unwrap()
        }),
    ]
}

fn tangent(seed: u64) -> TruncatedMap<G> {
    random_tangent(&mut ChaCha8Rng::seed_from_u64(seed), 2, 4, 0.3, |_, _| true)
}

fn involution(b: &Matrix<G>, seed: u64) -> AntiInvolution<G> {
    AntiInvolution::new(b, &TruncatedMap::zero(2, 4, &ctx()))
        .unwrap()
        .transport(&tangent(seed))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_ring_laws(a in series(0), b in series(0), c in series(0)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().mul(&c).unwrap(),
            a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn conjugation_is_multiplicative(a in series(0), b in series(0)) {
        prop_assert_eq!(
            a.mul(&b).unwrap().conjugate_coefficients(),
            a.conjugate_coefficients().mul(&b.conjugate_coefficients()).unwrap()
        );
    }

    #[test]
    fn order_is_a_filtration(a in series(1), b in series(1)) {
        let p = a.mul(&b).unwrap();
        if let (Some(oa), Some(ob)) = (a.order(), b.order()) {
            match p.order() {
                Some(op) => prop_assert!(op >= oa + ob),
                None => prop_assert!(oa + ob > DEGREE),
            }
        }
        prop_assert!(p.terms().all(|(q, _)| q.degree() <= DEGREE));
    }

    #[test]
    fn composition_is_associative(f in germ(), g in germ(), h in germ()) {
        prop_assert_eq!(
            f.compose(&g).unwrap().compose(&h).unwrap(),
            f.compose(&g.compose(&h).unwrap()).unwrap()
        );
    }

    #[test]
    fn inversion(f in germ()) {
        let inv = f.invert().unwrap();
        let id = TruncatedMap::identity(2, DEGREE, &ctx());
        prop_assert_eq!(f.compose(&inv).unwrap(), id.clone());
        prop_assert_eq!(inv.compose(&f).unwrap(), id);
        prop_assert_eq!(inv.invert().unwrap(), f);
    }

    #[test]
    fn resonance_factors_are_multiplicative(
        mu in prop::collection::vec(nonzero(), 2),
        p in (0u32..=3, 0u32..=3),
        r in (0u32..=3, 0u32..=3),
    ) {
        let d = DiagonalFamily::new(vec![mu.clone()], &ctx()).unwrap();
        let p = Multiindex::new(vec![p.0, p.1]);
        let r = Multiindex::new(vec![r.0, r.1]);
        prop_assert_eq!(d.mu_power(0, &p.add(&r)), d.mu_power(0, &p).mul(&d.mu_power(0, &r)));
        for j in 0..2 {
            let delta = d.delta(&p, j);
            prop_assert_eq!(&delta.values[0], &d.mu_power(0, &p).sub(&mu[j]));
        }
    }

    #[test]
    fn ideal_is_closed_under_multiplication(
        gens in prop::collection::vec((0u32..=3, 0u32..=3), 1..3),
        q in (0u32..=4, 0u32..=4),
        a in 0usize..2,
        s in series(0),
    ) {
        let gens: Vec<Vec<u32>> = gens
            .into_iter()
            .filter(|(x, y)| x + y > 0)
            .map(|(x, y)| vec![x, y])
            .collect();
        prop_assume!(!gens.is_empty());
        let i = MonomialIdeal::from_exponents(2, &gens).unwrap();
        let q = Multiindex::new(vec![q.0, q.1]);
        if i.member(&q) {
            prop_assert!(i.member(&q.add(&Multiindex::unit(2, a))));
        }
        let inside = s.filter(|m| i.member(m));
        let prod = inside.mul(&s).unwrap();
        prop_assert!(prod.terms().all(|(m, _)| i.member(m)));
    }

    #[test]
    fn transport_preserves_involutions(b in real_structure(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let rho = involution(&b, s1);
        prop_assert!(rho.validate().valid);
        let moved = rho.transport(&tangent(s2)).unwrap();
        let v = moved.validate();
        prop_assert!(v.valid, "{:?}", v);
        prop_assert_eq!(moved.b(), b);
    }

    #[test]
    fn paired_maps_are_mutually_inverse(
        b1 in real_structure(),
        b2 in real_structure(),
        s1 in any::<u64>(),
        s2 in any::<u64>(),
    ) {
        let pairs = pair_maps(&[involution(&b1, s1), involution(&b2, s2)]).unwrap();
        let id = Matrix::<G>::identity(2, &ctx());
        prop_assert_eq!(pairs.linear(0, 1).mul(pairs.linear(1, 0), &ctx()), id);
        prop_assert_eq!(
            pairs.map(0, 1).compose(pairs.map(1, 0)).unwrap(),
            TruncatedMap::identity(2, 4, &ctx())
        );
    }
}
