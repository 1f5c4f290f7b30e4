//! Solver for the radially symmetric system
//! `u_t = d u_rr + (d + alpha) / r u_r - k uv` on an annulus `[r0, r1]`.

use serde::{Deserialize, Serialize};

use super::{check_box, observed_orders, ConvergenceReport, ErrorNorms, Scheme, SimReport, DEFAULT_CFL, MAX_CFL};
use crate::error::{param, Error, Result};
use crate::field::SharedField;
use crate::residual::{SystemKind, SystemSpec, REACTION_SIGN};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub n: usize,
    pub r: (f64, f64),
}

impl RadialGrid {
    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(Error::Config(format!("radial grid needs at least 8 nodes, got {}", self.n)));
        }
        if !(self.r.0 > 0.0 && self.r.1 > self.r.0) {
            return Err(Error::Config(format!("radial interval must satisfy 0 < r0 < r1, got {:?}", self.r)));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.r.1 - self.r.0) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.r.0 + i as f64 * self.h()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialConfig {
    pub grid: RadialGrid,
    pub t0: f64,
    pub t_end: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub scheme: Scheme,
}

fn default_cfl() -> f64 {
    DEFAULT_CFL
}

struct Radial {
    grid: RadialGrid,
    d: [f64; 3],
    alpha: f64,
    k: f64,
    scheme: Scheme,
}

impl Radial {
    fn rhs(&self, u: &[Vec<f64>; 3], out: &mut [Vec<f64>; 3]) {
        let n = self.grid.n;
        let h = self.grid.h();
        for c in 0..3 {
            out[c][0] = 0.0;
            out[c][n - 1] = 0.0;
        }
        for i in 1..n - 1 {
            let r = self.grid.node(i);
            let uv = self.k * u[0][i] * u[1][i];
            for c in 0..3 {
                let f = &u[c];
                let coef = (self.d[c] + self.alpha) / r;
                let fr = match self.scheme {
                    Scheme::Central => (f[i + 1] - f[i - 1]) / (2.0 * h),
                    Scheme::Upwind if coef > 0.0 => (f[i + 1] - f[i]) / h,
                    Scheme::Upwind => (f[i] - f[i - 1]) / h,
                };
                out[c][i] =
                    self.d[c] * (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h) + coef * fr + REACTION_SIGN[c] * uv;
            }
        }
    }
}

fn boundary(exact: &SharedField, grid: &RadialGrid, t: f64, u: &mut [Vec<f64>; 3]) -> Result<()> {
    for i in [0, grid.n - 1] {
        let v = exact.values([t, grid.node(i), 0.0])?;
        for c in 0..3 {
            u[c][i] = v[c];
        }
    }
    Ok(())
}

/// Runs a `pde_radial` system with exact initial and boundary data given in
/// radial coordinates `(t, r, .)`.
pub fn simulate_radial(
    cfg: &RadialConfig,
    spec: &SystemSpec,
    exact: SharedField,
) -> Result<(Vec<[f64; 3]>, SimReport)> {
    let g = cfg.grid;
    g.validate()?;
    if spec.kind != SystemKind::PdeRadial {
        return Err(param(format!("radial solver needs pde_radial, got {}", spec.kind.name())));
    }
    if spec.params.d().iter().any(|d| !(*d > 0.0)) || !(spec.params.k >= 0.0) {
        return Err(param("solver needs positive diffusivities and k >= 0"));
    }
    if !(cfg.t_end > cfg.t0) || !(cfg.cfl > 0.0 && cfg.cfl <= MAX_CFL) {
        return Err(Error::Config("need t_end > t0 and 0 < cfl <= MAX_CFL".into()));
    }
    check_box(&exact.label(), (cfg.t0, cfg.t_end), |ok| (0..g.n).all(|i| ok(g.node(i), 0.0)), exact.as_ref())?;
    let p = spec.params;
    let op = Radial { grid: g, d: p.d(), alpha: p.alpha, k: p.k, scheme: cfg.scheme };
    let dmax = p.d1.max(p.d2).max(p.d3);
    let h = g.h();
    let steps = ((cfg.t_end - cfg.t0) / (cfg.cfl * h * h / (4.0 * dmax))).ceil().max(1.0) as usize;
    let dt = (cfg.t_end - cfg.t0) / steps as f64;
    let n = g.n;
    let mut u: [Vec<f64>; 3] = std::array::from_fn(|_| vec![0.0; n]);
    for i in 0..n {
        let v = exact.values([cfg.t0, g.node(i), 0.0])?;
        for c in 0..3 {
            u[c][i] = v[c];
        }
    }
    let z = || -> [Vec<f64>; 3] { std::array::from_fn(|_| vec![0.0; n]) };
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (z(), z(), z(), z(), z());
    let combo = |tmp: &mut [Vec<f64>; 3], u: &[Vec<f64>; 3], k: &[Vec<f64>; 3], a: f64| {
        for c in 0..3 {
            for i in 0..n {
                tmp[c][i] = u[c][i] + a * k[c][i];
            }
        }
    };
    for s in 0..steps {
        let t = cfg.t0 + s as f64 * dt;
        op.rhs(&u, &mut k1);
        combo(&mut tmp, &u, &k1, 0.5 * dt);
        boundary(&exact, &g, t + 0.5 * dt, &mut tmp)?;
        op.rhs(&tmp, &mut k2);
        combo(&mut tmp, &u, &k2, 0.5 * dt);
        boundary(&exact, &g, t + 0.5 * dt, &mut tmp)?;
        op.rhs(&tmp, &mut k3);
        combo(&mut tmp, &u, &k3, dt);
        boundary(&exact, &g, t + dt, &mut tmp)?;
        op.rhs(&tmp, &mut k4);
        for c in 0..3 {
            for i in 0..n {
                u[c][i] += dt / 6.0 * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]);
            }
        }
        boundary(&exact, &g, t + dt, &mut u)?;
        if u.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Solver(format!("non-finite radial state at t = {}", t + dt)));
        }
    }
    let mut linf: f64 = 0.0;
    let mut sq = 0.0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let v = exact.values([cfg.t_end, g.node(i), 0.0])?;
        for c in 0..3 {
            let e = u[c][i] - v[c];
            linf = linf.max(e.abs());
            sq += e * e;
        }
        out.push([u[0][i], u[1][i], u[2][i]]);
    }
    let report = SimReport {
        schema: 1,
        system: spec.label(),
        solution: exact.label(),
        nodes: vec![n],
        t_end: cfg.t_end,
        dt,
        steps,
        scheme: cfg.scheme,
        errors: ErrorNorms { linf, l2: (sq * h).sqrt() },
    };
    Ok((out, report))
}

/// Radial analogue of [`super::convergence_study`].
pub fn radial_convergence(
    cfg: &RadialConfig,
    spec: &SystemSpec,
    exact: SharedField,
    levels: usize,
) -> Result<ConvergenceReport> {
    if levels < 3 {
        return Err(Error::Config(format!("a convergence study needs at least 3 levels, got {levels}")));
    }
    let (mut nodes, mut linf, mut l2) = (Vec::new(), Vec::new(), Vec::new());
    for l in 0..levels {
        let n = (cfg.grid.n - 1) * (1 << l) + 1;
        let c = RadialConfig { grid: RadialGrid { n, ..cfg.grid }, ..*cfg };
        let (_, rep) = simulate_radial(&c, spec, exact.clone())?;
        nodes.push(n);
        linf.push(rep.errors.linf);
        l2.push(rep.errors.l2);
    }
    Ok(ConvergenceReport {
        schema: 1,
        system: spec.label(),
        solution: exact.label(),
        scheme: cfg.scheme,
        orders: observed_orders(&linf, 2.0),
        nodes,
        linf,
        l2,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::solutions::{ExactSolution, SolutionId};

    #[test]
    fn self_similar_solution_converges_at_second_order() {
        let sol = ExactSolution::default_for(SolutionId::SsA);
        let spec = sol.target_system();
        let cfg = RadialConfig {
            grid: RadialGrid { n: 17, r: (0.5, 2.0) },
            t0: 1.0,
            t_end: 1.3,
            cfl: 0.4,
            scheme: Scheme::Central,
        };
        let rep = radial_convergence(&cfg, &spec, Arc::new(sol), 3).unwrap();
        for o in &rep.orders {
            assert!((o - 2.0).abs() < 0.3, "{:?}", rep);
        }
    }

    #[test]
    fn rejects_non_radial_systems() {
        let sol = ExactSolution::default_for(SolutionId::SsA);
        let spec = SystemSpec::case10(sol.params);
        let cfg = RadialConfig {
            grid: RadialGrid { n: 17, r: (0.5, 2.0) },
            t0: 1.0,
            t_end: 1.1,
            cfl: 0.4,
            scheme: Scheme::Central,
        };
        assert!(simulate_radial(&cfg, &spec, Arc::new(sol)).is_err());
    }
}
