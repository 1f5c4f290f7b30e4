use std::sync::Arc;

use dlv_core::field::{SharedField, SolutionField};
use dlv_core::numerics::sampling::{rng_from_seed, unit_f64};
use dlv_core::numerics::SampleSpec;
use dlv_core::residual::{certify, SystemSpec};
use dlv_core::solutions::{ExactSolution, SolutionId, SystemParams};
use dlv_core::symmetry::table::{case10_h, h_shift, time_translation};
use dlv_core::symmetry::{
    case10_algebra, coefficient_gap, frame_system, lie_bracket, rotating_frame, swap, zero_generator, Coef,
    FrameDirection, LieGenerator, ScalingRotation, Transported,
};

fn lab_box(seed: u64, n: usize) -> SampleSpec {
    SampleSpec::new(seed, n, (0.0, 3.0), (-1.0, 1.0), (-1.0, 1.0))
}

fn rational_lab() -> ExactSolution {
    ExactSolution::default_for(SolutionId::Rational).to_lab_frame().unwrap()
}

#[test]
fn bracket_relations_of_the_rotating_algebra() {
    let [p1, p2, j12, _pt, d] = case10_algebra();
    let zero = zero_generator();
    let cases: [(&LieGenerator, &LieGenerator, LieGenerator); 6] = [
        (&j12, &p1, p2.clone()),
        (&j12, &p2, p1.neg()),
        (&p1, &p2, zero.clone()),
        (&d, &p1, p1.neg()),
        (&d, &p2, p2.neg()),
        (&d, &j12, zero),
    ];
    for (a, b, want) in cases {
        let got = lie_bracket(a, b);
        let gap = coefficient_gap(&got, &want, 50, 9).unwrap();
        assert!(gap < 1e-10, "[{}, {}] vs {}: {gap:e}", a.label, b.label, want.label);
    }
    // A wrong relation must be detected.
    let gap = coefficient_gap(&lie_bracket(&j12, &p1), &p1, 50, 9).unwrap();
    assert!(gap > 0.1);
}

#[test]
fn time_translation_commutes_with_case10_rotation() {
    let [_, _, j12, pt, _] = case10_algebra();
    assert!(coefficient_gap(&lie_bracket(&pt, &j12), &zero_generator(), 50, 4).unwrap() < 1e-10);
}

#[test]
fn transport_of_rational_solution_certifies() {
    let sol: SharedField = Arc::new(rational_lab());
    let spec = rational_lab().target_system();
    let [p1, p2, j12, _pt, d] = case10_algebra();
    for g in [p1, p2, j12, d] {
        for eps in [0.1, 0.5] {
            let moved = Transported::new(sol.clone(), g.clone(), eps);
            let rep = certify(&spec, &moved, &lab_box(21, 500), 1e-7).unwrap();
            assert!(rep.pass, "{} eps={eps}: {}", g.label, rep.to_json());
        }
    }
}

#[test]
fn transport_differs_from_the_original() {
    let sol: SharedField = Arc::new(rational_lab());
    let d = case10_algebra()[4].clone();
    let moved = Transported::new(sol.clone(), d, 0.5);
    let p = [1.0, 0.3, -0.4];
    let (a, b) = (sol.values(p).unwrap(), moved.values(p).unwrap());
    assert!((a[0] - b[0]).abs() > 1e-3);
}

#[test]
fn time_translation_leaves_steady_solution_unchanged() {
    let sol = ExactSolution::default_for(SolutionId::SteadyRat).to_lab_frame().unwrap();
    let moved = Transported::new(Arc::new(sol.clone()), time_translation(), 0.7);
    for p in [[1.0, 0.5, 0.8], [2.0, -1.0, 0.4]] {
        let (a, b) = (sol.jets(p).unwrap(), moved.jets(p).unwrap());
        for k in 0..3 {
            assert!(a[k].max_diff(&b[k]) < 1e-10);
        }
    }
}

#[test]
fn h_shift_adds_eps_h_to_w() {
    let sol = rational_lab();
    let spec = sol.target_system();
    let g = h_shift("H d_w", case10_h());
    let moved = Transported::new(Arc::new(sol.clone()), g, 0.4);
    let p = [0.7, 0.2, -0.5];
    let (a, b) = (sol.values(p).unwrap(), moved.values(p).unwrap());
    let h = 0.2 * (1.4f64).sin() - 0.5 * (1.4f64).cos();
    assert!((b[2] - a[2] - 0.4 * h).abs() < 1e-12);
    assert!((b[0] - a[0]).abs() < 1e-14);
    let rep = certify(&spec, &moved, &lab_box(5, 300), 1e-9).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
}

#[test]
fn value_only_generators_fall_back_to_differences() {
    let sol: SharedField = Arc::new(rational_lab());
    let spec = rational_lab().target_system();
    let [p1, _, j12, _, _] = case10_algebra();
    // [J12, P1] = P2 with value-only coefficients.
    let moved = Transported::new(sol, lie_bracket(&j12, &p1), 0.3);
    let rep = certify(&spec, &moved, &lab_box(8, 100), 1e-7).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
}

#[test]
fn rotating_frame_carries_weierstrass_profile() {
    let weier = ExactSolution::default_for(SolutionId::Weier);
    let params = weier.params;
    let profile: SharedField = Arc::new(weier);
    let lab = rotating_frame(FrameDirection::ToLab, profile.clone());
    let rep = certify(&frame_system(FrameDirection::ToLab, params), &lab, &lab_box(13, 500), 1e-9).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
    let back = rotating_frame(FrameDirection::ToRotated, lab);
    for p in [[0.0, 0.1, 0.2], [1.3, -0.6, 0.9], [2.9, 0.8, -0.3]] {
        let (a, b) = (profile.jets(p).unwrap(), back.jets(p).unwrap());
        for k in 0..3 {
            assert!(a[k].max_diff(&b[k]) < 1e-12 * (1.0 + a[k].v.abs()));
        }
    }
    let r = dlv_core::field::lab_to_rotated([std::f64::consts::FRAC_PI_4, 1.0, 0.0]);
    assert!((r[1] - 1.0).abs() < 1e-15 && r[2].abs() < 1e-15);
}

fn draw(seed: u64) -> ScalingRotation {
    let mut rng = rng_from_seed(seed);
    let mut u = |a: f64, b: f64| a + (b - a) * unit_f64(&mut rng);
    ScalingRotation {
        a0: u(0.5, 2.0),
        t0: u(-0.5, 0.5),
        a1: u(-1.5, 1.5),
        a2: u(-1.5, 1.5),
        s: if u(0.0, 1.0) < 0.5 { -1.0 } else { 1.0 },
        shift: [u(-0.5, 0.5), u(-0.5, 0.5)],
        a3: u(0.5, 2.0),
        psi0: u(-1.0, 1.0),
    }
}

fn certify_pair(spec: &SystemSpec, field: &SharedField, seed: u64) {
    let rep = certify(spec, field, &lab_box(seed, 500), 1e-9).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
}

#[test]
fn scaling_rotation_preserves_solutions() {
    let sols = [rational_lab(), ExactSolution::default_for(SolutionId::SteadyRat).to_lab_frame().unwrap()];
    for seed in 1..=5 {
        let m = draw(seed);
        for sol in &sols {
            let spec = sol.target_system();
            let h = if sol.id == SolutionId::Rational { Some(case10_h()) } else { Some(Coef::Const(0.7)) };
            let new_spec = m.apply_system(&spec).unwrap();
            let field = m.apply_field(Arc::new(sol.clone()), h).unwrap();
            certify_pair(&new_spec, &field, 30 + seed);
        }
    }
}

#[test]
fn scaling_with_a0_two_halves_diffusivities() {
    let sol = ExactSolution::default_for(SolutionId::SteadyRat).to_lab_frame().unwrap();
    let spec = sol.target_system();
    let m = ScalingRotation { a0: 2.0, ..Default::default() };
    let new_spec = m.apply_system(&spec).unwrap();
    assert_eq!(new_spec.params.d(), spec.params.d().map(|d| d / 2.0));
    certify_pair(&new_spec, &m.apply_field(Arc::new(sol), None).unwrap(), 2);
}

#[test]
fn identity_transform_is_identity() {
    let sol = rational_lab();
    let f = ScalingRotation::default().apply_field(Arc::new(sol.clone()), None).unwrap();
    let p = [0.4, 0.3, 0.2];
    let (a, b) = (sol.jets(p).unwrap(), f.jets(p).unwrap());
    for k in 0..3 {
        assert!(a[k].max_diff(&b[k]) == 0.0);
    }
}

#[test]
fn wrong_transformed_system_fails() {
    let sol = rational_lab();
    let spec = sol.target_system();
    let m = draw(3);
    let field = m.apply_field(Arc::new(sol), None).unwrap();
    let rep = certify(&spec, &field, &lab_box(1, 200), 1e-9).unwrap();
    assert!(!rep.pass);
}

#[test]
fn swap_exchanges_components_and_diffusivities() {
    let sol = rational_lab();
    let spec = sol.target_system();
    let (new_spec, field) = swap(&spec, Arc::new(sol.clone()));
    assert_eq!((new_spec.params.d1, new_spec.params.d2), (spec.params.d2, spec.params.d1));
    let p = [0.5, 0.1, 0.3];
    let (a, b) = (sol.values(p).unwrap(), field.values(p).unwrap());
    assert_eq!([a[1], a[0], a[2]], b);
    certify_pair(&new_spec, &field, 17);
    // Unswapped diffusivities reject the swapped solution.
    assert!(!certify(&spec, &field, &lab_box(17, 200), 1e-9).unwrap().pass);
    let _ = SystemParams::new(1.0, 2.0, 3.0);
}
