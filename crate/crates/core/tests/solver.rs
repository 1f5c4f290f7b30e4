use std::sync::Arc;

use dlv_core::field::SharedField;
use dlv_core::residual::{SystemKind, SystemSpec};
use dlv_core::solutions::{ExactSolution, SolutionId, SystemParams};
use dlv_core::solver::radial::radial_convergence;
use dlv_core::solver::{convergence_study, simulate, Grid2D, HeatKernel, RadialConfig, RadialGrid, Scheme, SimConfig};

fn rational() -> (SystemSpec, SharedField) {
    let sol = ExactSolution::default_for(SolutionId::Rational).to_lab_frame().unwrap();
    (sol.target_system(), Arc::new(sol))
}

fn cfg(n: usize, scheme: Scheme) -> SimConfig {
    SimConfig { grid: Grid2D::square(n, 0.2, 1.0).unwrap(), t0: 0.0, t_end: 0.1, cfl: 1.2, scheme }
}

#[test]
fn heat_kernel_control_is_second_order() {
    let params = SystemParams::new(0.5, 1.0, 1.5).with_k(1.0);
    let mut params0 = params;
    params0.k = 0.0;
    let spec = SystemSpec::new(SystemKind::PdeRotatedFree, params0);
    let h: SharedField = Arc::new(HeatKernel::new(params.d(), [1.0, 2.0, 0.5], [0.1, -0.1], 0.05).unwrap());
    let c = SimConfig {
        grid: Grid2D::square(9, -1.0, 1.0).unwrap(),
        t0: 0.0,
        t_end: 0.1,
        cfl: 0.4,
        scheme: Scheme::Central,
    };
    let rep = convergence_study(&c, &spec, h, 3).unwrap();
    for o in &rep.orders {
        assert!((1.7..=2.3).contains(o), "{rep:?}");
    }
}

#[test]
fn rational_solution_converges_on_coarse_levels() {
    let (spec, sol) = rational();
    let rep = convergence_study(&cfg(17, Scheme::Central), &spec, sol, 3).unwrap();
    for w in rep.linf.windows(2) {
        assert!(w[1] < w[0]);
    }
    for o in &rep.orders {
        assert!((1.7..=2.3).contains(o), "{rep:?}");
    }
}

#[test]
fn upwind_variant_is_first_order() {
    let (spec, sol) = rational();
    let rep = convergence_study(&cfg(17, Scheme::Upwind), &spec, sol, 3).unwrap();
    let last = *rep.orders.last().unwrap();
    assert!((0.7..=1.3).contains(&last), "{rep:?}");
}

#[test]
fn time_step_refinement_barely_changes_the_error() {
    let (spec, sol) = rational();
    let a = simulate(&cfg(33, Scheme::Central), &spec, sol.clone()).unwrap().1.errors.linf;
    let b = simulate(&SimConfig { cfl: 0.4, ..cfg(33, Scheme::Central) }, &spec, sol).unwrap().1.errors.linf;
    assert!((a - b).abs() < 0.05 * b, "{a} {b}");
}

#[test]
fn radial_self_similar_solution_is_second_order() {
    let sol = ExactSolution::default_for(SolutionId::SsA);
    let spec = sol.target_system();
    let c = RadialConfig {
        grid: RadialGrid { n: 33, r: (0.5, 2.0) },
        t0: 1.0,
        t_end: 1.3,
        cfl: 0.4,
        scheme: Scheme::Central,
    };
    let rep = radial_convergence(&c, &spec, Arc::new(sol.clone()), 3).unwrap();
    for o in &rep.orders {
        assert!((1.7..=2.3).contains(o), "{rep:?}");
    }
    let up = radial_convergence(&RadialConfig { scheme: Scheme::Upwind, ..c }, &spec, Arc::new(sol), 3).unwrap();
    for o in &up.orders {
        assert!((0.7..=1.3).contains(o), "{up:?}");
    }
}

#[test]
fn missing_levels_are_rejected() {
    let (spec, sol) = rational();
    assert!(convergence_study(&cfg(17, Scheme::Central), &spec, sol, 2).is_err());
}
