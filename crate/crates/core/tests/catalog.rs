use std::sync::Arc;

use dlv_core::field::{Rotated, Scaled, SolutionField};
use dlv_core::numerics::SampleSpec;
use dlv_core::residual::{certify, SystemSpec};
use dlv_core::solutions::{catalog_variants, ExactSolution, SolutionId};

fn boxes(sol: &ExactSolution, seed: u64, n: usize) -> SampleSpec {
    sol.default_samples(seed, n)
}

fn variants() -> Vec<ExactSolution> {
    catalog_variants()
}

#[test]
fn every_entry_certifies_in_its_native_frame() {
    for sol in variants() {
        let spec = sol.target_system();
        let rep = certify(&spec, &sol, &boxes(&sol, 7, 500), 1e-9).unwrap();
        assert!(rep.pass, "{} {:?}: {}", sol.id, sol.params, rep.to_json());
    }
}

#[test]
fn every_entry_certifies_in_the_lab_frame() {
    for sol in variants() {
        let lab = sol.to_lab_frame().unwrap();
        let spec = lab.target_system();
        let rep = certify(&spec, &lab, &boxes(&lab, 11, 500), 1e-9).unwrap();
        assert!(rep.pass, "{} {:?}: {}", lab.id, lab.params, rep.to_json());
    }
}

#[test]
fn rotated_wrapper_matches_direct_lab_form() {
    let rot = ExactSolution::default_for(SolutionId::Sec);
    let lab = rot.to_lab_frame().unwrap();
    let wrapped = Rotated::to_lab(Arc::new(rot));
    for p in [[0.3, 0.2, -0.4], [2.0, -0.7, 0.1]] {
        let a = lab.jets(p).unwrap();
        let b = wrapped.jets(p).unwrap();
        for i in 0..3 {
            assert!(a[i].max_diff(&b[i]) < 1e-12);
        }
    }
}

#[test]
fn negative_controls_fail() {
    for id in [SolutionId::Rational, SolutionId::Weier, SolutionId::SsA] {
        let lab = ExactSolution::default_for(id).to_lab_frame().unwrap();
        let spec = lab.target_system();
        let bad = Scaled { inner: Arc::new(lab.clone()), factors: [1.01, 1.0, 1.0] };
        let rep = certify(&spec, &bad, &boxes(&lab, 3, 200), 1e-9).unwrap();
        assert!(!rep.pass && rep.max_rel > 1e-3, "{id}: {}", rep.max_rel);
    }
}

#[test]
fn weierstrass_report_is_seed_independent_in_outcome() {
    let lab = ExactSolution::default_for(SolutionId::Weier).to_lab_frame().unwrap();
    let spec = lab.target_system();
    let a = certify(&spec, &lab, &boxes(&lab, 1, 300), 1e-9).unwrap();
    let b = certify(&spec, &lab, &boxes(&lab, 1, 300), 1e-9).unwrap();
    assert_eq!(a, b);
    let c = certify(&spec, &lab, &boxes(&lab, 2, 300), 1e-9).unwrap();
    assert!(a.pass && c.pass);
}

#[test]
fn steady_solutions_fail_the_wrong_alpha() {
    let sol = ExactSolution::default_for(SolutionId::SteadyRat);
    let mut spec = sol.target_system();
    spec.params.alpha += 0.1;
    let rep = certify(&spec, &sol, &boxes(&sol, 5, 100), 1e-9).unwrap();
    assert!(!rep.pass);
    let _ = SystemSpec::case10(sol.params);
}
