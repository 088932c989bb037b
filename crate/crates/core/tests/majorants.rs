mod common;

use common::*;
use germlin::smalldivisors::{majorant_diagnostics, theta_reduction, MajorantDiagnostics, MajorantParams};
use germlin::{DiagonalFamily, GaussianRational as G, MonomialIdeal};

fn diagnostics(mu: &[G], i: &MonomialIdeal) -> MajorantDiagnostics<G> {
    let f = diag_map(mu, 8);
    let d = DiagonalFamily::from_maps(std::slice::from_ref(&f)).unwrap();
    majorant_diagnostics(std::slice::from_ref(&f), &d, i, &MajorantParams::default(), None).unwrap()
}

#[test]
fn psi_splits_holds_on_unit_circle_spectra() {
    let cases = [
        (vec![c(3, 4, 5), c(3, -4, 5)], ideal(2, &[&[1, 1]]), 16),
        (vec![c(3, 4, 5), c(5, 12, 13)], ideal(2, &[&[0, 2]]), 4),
        (vec![c(3, 4, 5), c(5, 12, 13)], MonomialIdeal::zero(2), 30),
        (vec![c(3, 4, 5), q(1, 1)], ideal(2, &[&[0, 1]]), 8),
    ];
    for (mu, i, splits) in cases {
        let diag = diagnostics(&mu, &i);
        assert_eq!(diag.psi_splits_checked, splits, "{mu:?}");
        assert!(diag.psi_split_violations.is_empty(), "{mu:?}: {:?}", diag.psi_split_violations);
    }
}

// z1 z2 is invariant and outside I, so the step |μ^(P+E_a) - μ_a| >= ω_k has
// nothing to stand on when P = (1,1).
#[test]
fn psi_splits_reports_resonant_small_parts() {
    let diag = diagnostics(&[c(3, 4, 5), c(3, -4, 5)], &MonomialIdeal::zero(2));
    let found: Vec<(usize, usize, Vec<u32>, Vec<u32>)> =
        diag.psi_split_violations.iter().map(|v| (v.k, v.j, v.q.clone(), v.p.clone())).collect();
    assert_eq!(found, vec![(2, 1, vec![1, 7], vec![1, 1]), (2, 2, vec![7, 1], vec![1, 1])]);
    assert!(!diag.all_pass());
}

#[test]
fn reduction_restores_eta_growth() {
    let f = diag_map(&[q(2, 1), q(3, 1)], 6);
    let g = f.compose(&f).unwrap();
    let family = vec![f, g];
    let zero = MonomialIdeal::zero(2);
    let before = {
        let d = DiagonalFamily::from_maps(&family).unwrap();
        majorant_diagnostics(&family, &d, &zero, &MajorantParams::default(), None).unwrap()
    };
    assert!(!before.theta.satisfied);
    assert!(!before.warnings.is_empty());
    let red = theta_reduction(&family, &zero).unwrap();
    assert_eq!(red.inverted, vec![0, 1]);
    let d = DiagonalFamily::from_maps(&red.family).unwrap();
    let after = majorant_diagnostics(&red.family, &d, &zero, &MajorantParams::default(), None).unwrap();
    assert!(after.theta.satisfied);
    assert!(after.eta_growth.pass);
    assert!(after.phi_count.pass);
}
