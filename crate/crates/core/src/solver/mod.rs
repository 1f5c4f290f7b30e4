//! Method-of-lines solvers: second-order finite differences in space and
//! classical RK4 in time, with Dirichlet data taken from an exact solution.

pub mod heat;
pub mod radial;

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::field::{SharedField, SolutionField};
use crate::residual::{SystemKind, SystemSpec, REACTION_SIGN};
use crate::solutions::SystemParams;
use crate::stream::StreamFunction;

pub use heat::HeatKernel;
pub use radial::{simulate_radial, RadialConfig, RadialGrid};

/// Default Courant-type factor in `dt = cfl h^2 / (4 max d)`.
pub const DEFAULT_CFL: f64 = 0.4;

/// Largest `cfl` accepted. RK4 is stable for `dt |lambda| <= 2.78` on the
/// negative axis and `|lambda| <= 8 d / h^2` for the five-point Laplacian.
pub const MAX_CFL: f64 = 1.39;

/// Spatial discretization of the convection term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Central,
    /// First-order upwind differences; only useful as a negative control.
    Upwind,
}

/// Uniform node-centred grid including the boundary, stored row-major with
/// `x` varying fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64)) -> Result<Self> {
        let g = Grid2D { nx, ny, x, y };
        g.validate()?;
        Ok(g)
    }

    pub fn square(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Grid2D::new(n, n, (lo, hi), (lo, hi))
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 8 || self.ny < 8 {
            return Err(Error::Config(format!(
                "grid needs at least 8 nodes per direction, got {}x{}",
                self.nx, self.ny
            )));
        }
        if !(self.x.1 > self.x.0 && self.y.1 > self.y.0) {
            return Err(Error::Config("empty grid box".into()));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        (self.x.1 - self.x.0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y.1 - self.y.0) / (self.ny - 1) as f64
    }

    pub fn xi(&self, i: usize) -> f64 {
        self.x.0 + i as f64 * self.hx()
    }

    pub fn yj(&self, j: usize) -> f64 {
        self.y.0 + j as f64 * self.hy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny
    }

    /// Same box with `n` nodes per direction.
    pub fn with_nodes(&self, n: usize) -> Result<Self> {
        Grid2D::new(n, n, self.x, self.y)
    }
}

/// Nodal values of `(u, v, w)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub u: [Vec<f64>; 3],
}

impl FieldState {
    pub fn zeros(grid: &Grid2D, t: f64) -> Self {
        FieldState { t, u: std::array::from_fn(|_| vec![0.0; grid.len()]) }
    }

    /// Samples `f` at every node.
    pub fn sample(grid: &Grid2D, t: f64, f: &dyn SolutionField) -> Result<Self> {
        let mut s = FieldState::zeros(grid, t);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let v = f.values([t, grid.xi(i), grid.yj(j)])?;
                let k = grid.idx(i, j);
                for c in 0..3 {
                    s.u[c][k] = v[c];
                }
            }
        }
        Ok(s)
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().all(|a| a.iter().all(|v| v.is_finite()))
    }

    /// CSV rows `t,x,y,u,v,w`, row-major, 15 significant digits.
    pub fn write_csv<W: Write>(&self, grid: &Grid2D, header: bool, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        let io = |e: csv::Error| Error::Config(format!("csv output failed: {e}"));
        if header {
            w.write_record(["t", "x", "y", "u", "v", "w"]).map_err(io)?;
        }
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let k = grid.idx(i, j);
                let row = [self.t, grid.xi(i), grid.yj(j), self.u[0][k], self.u[1][k], self.u[2][k]];
                w.write_record(row.iter().map(|v| format!("{v:.14e}"))).map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::Config(format!("csv output failed: {e}")))
    }
}

/// Spatial operator of the convective system on a grid.
#[derive(Debug, Clone)]
pub struct Operator {
    pub grid: Grid2D,
    pub params: SystemParams,
    pub scheme: Scheme,
    /// `Psi_y` and `-Psi_x` at the nodes.
    vel: [Vec<f64>; 2],
    max_speed: f64,
}

impl Operator {
    pub fn new(grid: Grid2D, stream: Option<&StreamFunction>, params: SystemParams, scheme: Scheme) -> Result<Self> {
        grid.validate()?;
        // k = 0 is allowed here for decoupled controls.
        if params.d().iter().any(|d| !(*d > 0.0)) || !(params.k >= 0.0) {
            return Err(param("solver needs positive diffusivities and k >= 0"));
        }
        let mut vel = [vec![0.0; grid.len()], vec![0.0; grid.len()]];
        let mut max_speed: f64 = 0.0;
        if let Some(s) = stream {
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let (a, b) = s.velocity(grid.xi(i), grid.yj(j))?;
                    let k = grid.idx(i, j);
                    vel[0][k] = a;
                    vel[1][k] = b;
                    max_speed = max_speed.max(a.abs()).max(b.abs());
                }
            }
        }
        Ok(Operator { grid, params, scheme, vel, max_speed })
    }

    /// Operator of a `pde_full` or `pde_rotated_free` system.
    pub fn for_system(grid: Grid2D, spec: &SystemSpec, scheme: Scheme) -> Result<Self> {
        match spec.kind {
            SystemKind::PdeFull => Operator::new(grid, spec.stream.as_ref(), spec.params, scheme),
            SystemKind::PdeRotatedFree => Operator::new(grid, None, spec.params, scheme),
            k => Err(param(format!("the grid solver handles pde_full and pde_rotated_free, not {}", k.name()))),
        }
    }

    pub fn max_speed(&self) -> f64 {
        self.max_speed
    }

    /// `cfl min(hx, hy)^2 / (4 max d)`, capped by `h / max|U|`.
    pub fn stable_dt(&self, cfl: f64) -> f64 {
        let h = self.grid.hx().min(self.grid.hy());
        let dmax = self.params.d1.max(self.params.d2).max(self.params.d3);
        let mut dt = cfl * h * h / (4.0 * dmax);
        if self.max_speed > 0.0 {
            dt = dt.min(h / self.max_speed);
        }
        dt
    }

    /// Time derivative at interior nodes; boundary entries are set to zero.
    pub fn rhs(&self, u: &[Vec<f64>; 3], out: &mut [Vec<f64>; 3]) {
        let g = &self.grid;
        let nx = g.nx;
        let d = self.params.d();
        let k = self.params.k;
        let [o0, o1, o2] = out;
        o0.par_chunks_mut(nx).zip(o1.par_chunks_mut(nx)).zip(o2.par_chunks_mut(nx)).enumerate().for_each(
            |(j, ((r0, r1), r2))| {
                let rows = [r0, r1, r2];
                if j == 0 || j + 1 == g.ny {
                    for r in rows {
                        r.fill(0.0);
                    }
                    return;
                }
                let row = j * nx..(j + 1) * nx;
                let (a, b) = (&self.vel[0][row.clone()], &self.vel[1][row.clone()]);
                for (c, r) in rows.into_iter().enumerate() {
                    let f = &u[c];
                    self.row_kernel(
                        d[c],
                        &f[row.start - nx..row.end - nx],
                        &f[row.clone()],
                        &f[row.start + nx..row.end + nx],
                        a,
                        b,
                        r,
                    );
                }
            },
        );
        if k != 0.0 {
            for j in 1..g.ny - 1 {
                for m in j * nx + 1..(j + 1) * nx - 1 {
                    let uv = k * u[0][m] * u[1][m];
                    o0[m] += REACTION_SIGN[0] * uv;
                    o1[m] += REACTION_SIGN[1] * uv;
                    o2[m] += REACTION_SIGN[2] * uv;
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn row_kernel(&self, d: f64, s: &[f64], m: &[f64], n: &[f64], a: &[f64], b: &[f64], out: &mut [f64]) {
        let nx = m.len();
        let (s, n, a, b, out) = (&s[..nx], &n[..nx], &a[..nx], &b[..nx], &mut out[..nx]);
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let (ihx2, ihy2) = (d / (hx * hx), d / (hy * hy));
        out[0] = 0.0;
        out[nx - 1] = 0.0;
        match self.scheme {
            Scheme::Central => {
                let (cx, cy) = (0.5 / hx, 0.5 / hy);
                let inner = out[1..nx - 1]
                    .iter_mut()
                    .zip(m.windows(3))
                    .zip(s[1..].iter().zip(&n[1..]))
                    .zip(a[1..].iter().zip(&b[1..]));
                for (((o, w), (&fs, &fn_)), (&ai, &bi)) in inner {
                    let lap = (w[2] - 2.0 * w[1] + w[0]) * ihx2 + (fn_ - 2.0 * w[1] + fs) * ihy2;
                    *o = lap - ai * (w[2] - w[0]) * cx - bi * (fn_ - fs) * cy;
                }
            }
            Scheme::Upwind => {
                for i in 1..nx - 1 {
                    let (fc, fw, fe) = (m[i], m[i - 1], m[i + 1]);
                    let lap = (fe - 2.0 * fc + fw) * ihx2 + (n[i] - 2.0 * fc + s[i]) * ihy2;
                    let fx = if a[i] > 0.0 { (fc - fw) / hx } else { (fe - fc) / hx };
                    let fy = if b[i] > 0.0 { (fc - s[i]) / hy } else { (n[i] - fc) / hy };
                    out[i] = lap - a[i] * fx - b[i] * fy;
                }
            }
        }
    }
}

/// Boundary closure applied after every RK stage.
#[derive(Clone)]
pub enum Boundary {
    /// Time-dependent Dirichlet trace of a solution.
    Exact(SharedField),
    /// Homogeneous Neumann by copying the adjacent interior value.
    NoFlux,
}

/// Boundary nodes in a fixed order.
pub fn boundary_nodes(grid: &Grid2D) -> Vec<(usize, usize)> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut out = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        out.push((i, 0));
        out.push((i, ny - 1));
    }
    for j in 1..ny - 1 {
        out.push((0, j));
        out.push((nx - 1, j));
    }
    out
}

impl Boundary {
    /// Dirichlet values at `t` on `nodes`, if the closure has any.
    pub fn trace(&self, grid: &Grid2D, nodes: &[(usize, usize)], t: f64) -> Result<Option<Vec<[f64; 3]>>> {
        match self {
            Boundary::Exact(f) => {
                nodes.iter().map(|&(i, j)| f.values([t, grid.xi(i), grid.yj(j)])).collect::<Result<Vec<_>>>().map(Some)
            }
            Boundary::NoFlux => Ok(None),
        }
    }

    pub fn impose(&self, grid: &Grid2D, nodes: &[(usize, usize)], trace: Option<&[[f64; 3]]>, u: &mut [Vec<f64>; 3]) {
        let (nx, ny) = (grid.nx, grid.ny);
        for (q, &(i, j)) in nodes.iter().enumerate() {
            let k = grid.idx(i, j);
            match trace {
                Some(v) => {
                    for c in 0..3 {
                        u[c][k] = v[q][c];
                    }
                }
                None => {
                    let src = grid.idx(i.clamp(1, nx - 2), j.clamp(1, ny - 2));
                    for c in 0..3 {
                        u[c][k] = u[c][src];
                    }
                }
            }
        }
    }

    pub fn apply(&self, grid: &Grid2D, t: f64, u: &mut [Vec<f64>; 3]) -> Result<()> {
        let nodes = boundary_nodes(grid);
        let tr = self.trace(grid, &nodes, t)?;
        self.impose(grid, &nodes, tr.as_deref(), u);
        Ok(())
    }
}

fn axpy(out: &mut [Vec<f64>; 3], y: &[Vec<f64>; 3], k: &[Vec<f64>; 3], a: f64) {
    for c in 0..3 {
        for (o, (y, k)) in out[c].iter_mut().zip(y[c].iter().zip(&k[c])) {
            *o = y + a * k;
        }
    }
}

/// RK4 integrator with preallocated stage buffers.
pub struct Stepper {
    pub op: Operator,
    pub bc: Boundary,
    nodes: Vec<(usize, usize)>,
    k: [[Vec<f64>; 3]; 4],
    tmp: [Vec<f64>; 3],
}

impl Stepper {
    pub fn new(op: Operator, bc: Boundary) -> Self {
        let n = op.grid.len();
        let z = || std::array::from_fn(|_| vec![0.0; n]);
        let nodes = boundary_nodes(&op.grid);
        Stepper { op, bc, nodes, k: std::array::from_fn(|_| z()), tmp: z() }
    }

    /// One RK4 step of size `dt`.
    pub fn step(&mut self, state: &mut FieldState, dt: f64) -> Result<()> {
        let t = state.t;
        let grid = self.op.grid;
        let half = self.bc.trace(&grid, &self.nodes, t + 0.5 * dt)?;
        let full = self.bc.trace(&grid, &self.nodes, t + dt)?;
        let [k1, k2, k3, k4] = &mut self.k;
        self.op.rhs(&state.u, k1);
        axpy(&mut self.tmp, &state.u, k1, 0.5 * dt);
        self.bc.impose(&grid, &self.nodes, half.as_deref(), &mut self.tmp);
        self.op.rhs(&self.tmp, k2);
        axpy(&mut self.tmp, &state.u, k2, 0.5 * dt);
        self.bc.impose(&grid, &self.nodes, half.as_deref(), &mut self.tmp);
        self.op.rhs(&self.tmp, k3);
        axpy(&mut self.tmp, &state.u, k3, dt);
        self.bc.impose(&grid, &self.nodes, full.as_deref(), &mut self.tmp);
        self.op.rhs(&self.tmp, k4);
        let w = dt / 6.0;
        for c in 0..3 {
            let ks = k1[c].iter().zip(&k2[c]).zip(k3[c].iter().zip(&k4[c]));
            for (y, ((a, b), (c3, d))) in state.u[c].iter_mut().zip(ks) {
                *y += w * (a + 2.0 * b + 2.0 * c3 + d);
            }
        }
        state.t = t + dt;
        self.bc.impose(&grid, &self.nodes, full.as_deref(), &mut state.u);
        if !state.is_finite() {
            return Err(Error::Solver(format!("non-finite state at t = {}", state.t)));
        }
        Ok(())
    }
}

/// Settings of a manufactured-solution run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub grid: Grid2D,
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

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !(self.t_end > self.t0) {
            return Err(Error::Config(format!("t_end {} must exceed t0 {}", self.t_end, self.t0)));
        }
        if !(self.cfl > 0.0 && self.cfl <= MAX_CFL) {
            return Err(Error::Config(format!("cfl must lie in (0, {MAX_CFL}], got {}", self.cfl)));
        }
        Ok(())
    }
}

/// Error norms against the exact solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub linf: f64,
    /// `sqrt(h^d sum e^2)` over all components.
    pub l2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    pub schema: u32,
    pub system: String,
    pub solution: String,
    pub nodes: Vec<usize>,
    pub t_end: f64,
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub errors: ErrorNorms,
}

pub fn error_norms(grid: &Grid2D, state: &FieldState, exact: &dyn SolutionField) -> Result<ErrorNorms> {
    let mut linf: f64 = 0.0;
    let mut sq = 0.0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let v = exact.values([state.t, grid.xi(i), grid.yj(j)])?;
            let k = grid.idx(i, j);
            for c in 0..3 {
                let e = state.u[c][k] - v[c];
                linf = linf.max(e.abs());
                sq += e * e;
            }
        }
    }
    Ok(ErrorNorms { linf, l2: (sq * grid.hx() * grid.hy()).sqrt() })
}

/// Fails unless `f` is valid at every node on eleven time levels.
pub fn check_box(
    label: &str,
    t: (f64, f64),
    nodes: impl Fn(&mut dyn FnMut(f64, f64) -> bool) -> bool,
    f: &dyn SolutionField,
) -> Result<()> {
    for l in 0..=10 {
        let tl = t.0 + (t.1 - t.0) * l as f64 / 10.0;
        let ok = nodes(&mut |x, y| f.is_valid([tl, x, y], 0.0));
        if !ok {
            return Err(Error::Config(format!("{label} is singular inside the space-time box near t = {tl}")));
        }
    }
    Ok(())
}

/// Runs the system from the exact data at `t0` to `t_end` with the exact
/// solution as Dirichlet data, returning the final state.
pub fn simulate(cfg: &SimConfig, spec: &SystemSpec, exact: SharedField) -> Result<(FieldState, SimReport)> {
    cfg.validate()?;
    let g = cfg.grid;
    check_box(
        &exact.label(),
        (cfg.t0, cfg.t_end),
        |ok| (0..g.ny).all(|j| (0..g.nx).all(|i| ok(g.xi(i), g.yj(j)))),
        exact.as_ref(),
    )?;
    let op = Operator::for_system(g, spec, cfg.scheme)?;
    let steps = ((cfg.t_end - cfg.t0) / op.stable_dt(cfg.cfl)).ceil().max(1.0) as usize;
    let dt = (cfg.t_end - cfg.t0) / steps as f64;
    let mut state = FieldState::sample(&g, cfg.t0, exact.as_ref())?;
    let mut stepper = Stepper::new(op, Boundary::Exact(exact.clone()));
    for s in 0..steps {
        stepper.step(&mut state, dt)?;
        state.t = cfg.t0 + (s + 1) as f64 * dt;
    }
    let errors = error_norms(&g, &state, exact.as_ref())?;
    let report = SimReport {
        schema: 1,
        system: spec.label(),
        solution: exact.label(),
        nodes: vec![g.nx, g.ny],
        t_end: cfg.t_end,
        dt,
        steps,
        scheme: cfg.scheme,
        errors,
    };
    Ok((state, report))
}

/// Errors and observed orders over a sequence of grids.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub schema: u32,
    pub system: String,
    pub solution: String,
    pub scheme: Scheme,
    pub nodes: Vec<usize>,
    pub linf: Vec<f64>,
    pub l2: Vec<f64>,
    /// `log2(e_k / e_{k+1})` from the max-norm errors.
    pub orders: Vec<f64>,
}

pub fn observed_orders(errors: &[f64], ratio: f64) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).ln() / ratio.ln()).collect()
}

/// Repeats [`simulate`] on `levels` grids `n_k = (n_0 - 1) 2^k + 1`.
pub fn convergence_study(
    cfg: &SimConfig,
    spec: &SystemSpec,
    exact: SharedField,
    levels: usize,
) -> Result<ConvergenceReport> {
    if levels < 3 {
        return Err(Error::Config(format!("a convergence study needs at least 3 levels, got {levels}")));
    }
    let mut nodes = Vec::new();
    let (mut linf, mut l2) = (Vec::new(), Vec::new());
    for l in 0..levels {
        let n = (cfg.grid.nx - 1) * (1 << l) + 1;
        let c = SimConfig { grid: cfg.grid.with_nodes(n)?, ..*cfg };
        let (_, rep) = simulate(&c, spec, exact.clone())?;
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

    fn op(n: usize, stream: Option<&StreamFunction>, params: SystemParams) -> Operator {
        Operator::new(Grid2D::square(n, 0.0, 1.0).unwrap(), stream, params, Scheme::Central).unwrap()
    }

    fn fill(g: &Grid2D, f: impl Fn(f64, f64) -> [f64; 3]) -> [Vec<f64>; 3] {
        let mut s = FieldState::zeros(g, 0.0);
        for j in 0..g.ny {
            for i in 0..g.nx {
                let v = f(g.xi(i), g.yj(j));
                for c in 0..3 {
                    s.u[c][g.idx(i, j)] = v[c];
                }
            }
        }
        s.u
    }

    #[test]
    fn constants_are_stationary() {
        let o = op(12, Some(&StreamFunction::case10()), SystemParams::new(1.0, 2.0, 3.0));
        let u = fill(&o.grid, |_, _| [1.5, 0.0, -2.0]);
        let mut out = FieldState::zeros(&o.grid, 0.0).u;
        o.rhs(&u, &mut out);
        assert!(out.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn quadratic_has_exact_laplacian() {
        let o = op(12, None, SystemParams::new(1.5, 2.0, 3.0).with_k(0.0));
        let u = fill(&o.grid, |x, _| [x * x, 0.0, 0.0]);
        let mut out = FieldState::zeros(&o.grid, 0.0).u;
        o.rhs(&u, &mut out);
        for j in 1..11 {
            for i in 1..11 {
                assert!((out[0][o.grid.idx(i, j)] - 3.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn reaction_cancels_in_u_plus_w() {
        // With zero stream the reaction drops out of the u + w balance, which
        // then reduces to boundary fluxes of the diffusion terms.
        let p = SystemParams::new(1.0, 2.0, 3.0);
        let flux = |n: usize| {
            let o = op(n, None, p);
            let u = fill(&o.grid, |x, y| [(x + 0.5 * y).exp(), 1.0 + x * y, (x * y).sin()]);
            let mut out = FieldState::zeros(&o.grid, 0.0).u;
            o.rhs(&u, &mut out);
            let h = o.grid.hx();
            let total: f64 = (0..o.grid.len()).map(|m| out[0][m] + out[2][m]).sum::<f64>() * h * h;
            let mut k0 = o.clone();
            k0.params.k = 0.0;
            let mut out0 = FieldState::zeros(&o.grid, 0.0).u;
            k0.rhs(&u, &mut out0);
            let total0: f64 = (0..o.grid.len()).map(|m| out0[0][m] + out0[2][m]).sum::<f64>() * h * h;
            assert!((total - total0).abs() < 1e-10 * (1.0 + total.abs()));
            total
        };
        // Cells of the interior nodes tile [h/2, 1 - h/2]^2, so the sum is
        // the outward flux of d1 u + d3 w through that square.
        let exact = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let (a, b) = (0.5 * h, 1.0 - 0.5 * h);
            let g = |x: f64, y: f64| {
                let e = (x + 0.5 * y).exp();
                let c = (x * y).cos();
                (e + 3.0 * y * c, 0.5 * e + 3.0 * x * c)
            };
            let m = 4000;
            let mut acc = 0.0;
            for q in 0..m {
                let s = a + (b - a) * (q as f64 + 0.5) / m as f64;
                acc += g(b, s).0 - g(a, s).0 + g(s, b).1 - g(s, a).1;
            }
            acc * (b - a) / m as f64
        };
        let (e1, e2) = ((flux(33) - exact(33)).abs(), (flux(65) - exact(65)).abs());
        assert!(e2 < 0.3 * e1 && e2 < 1e-3, "{e1} {e2}");
    }

    #[test]
    fn zero_data_stays_zero() {
        let sol = Arc::new(ExactSolution::default_for(SolutionId::Zero));
        let spec = SystemSpec::case10(SystemParams::new(1.0, 2.0, 3.0));
        let cfg = SimConfig {
            grid: Grid2D::square(9, 0.0, 1.0).unwrap(),
            t0: 0.0,
            t_end: 0.05,
            cfl: 0.4,
            scheme: Scheme::Central,
        };
        let (s, rep) = simulate(&cfg, &spec, sol).unwrap();
        assert!(s.u.iter().flatten().all(|v| *v == 0.0));
        assert_eq!(rep.errors.linf, 0.0);
    }

    #[test]
    fn steady_solution_is_preserved() {
        let sol = ExactSolution::default_for(SolutionId::SteadyRat).to_lab_frame().unwrap();
        let spec = sol.target_system();
        let g = Grid2D::new(129, 129, (0.5, 1.0), (0.5, 1.0)).unwrap();
        let o = Operator::for_system(g, &spec, Scheme::Central).unwrap();
        let dt = o.stable_dt(0.4);
        let mut st = FieldState::sample(&g, 0.0, &sol).unwrap();
        let start = st.clone();
        let mut stepper = Stepper::new(o, Boundary::Exact(Arc::new(sol)));
        for _ in 0..100 {
            stepper.step(&mut st, dt).unwrap();
        }
        let drift = (0..3)
            .flat_map(|c| (0..g.len()).map(move |m| (c, m)))
            .map(|(c, m)| (st.u[c][m] - start.u[c][m]).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-6, "{drift}");
    }

    #[test]
    fn oversized_step_blows_up_or_is_rejected() {
        let sol: SharedField = Arc::new(ExactSolution::default_for(SolutionId::Rational).to_lab_frame().unwrap());
        let spec = SystemSpec::case10(SystemParams::new(1.0, 2.0, 3.0));
        let g = Grid2D::square(33, 0.2, 1.0).unwrap();
        let cfg = SimConfig { grid: g, t0: 0.0, t_end: 0.1, cfl: 3.0, scheme: Scheme::Central };
        assert!(matches!(simulate(&cfg, &spec, sol.clone()), Err(Error::Config(_))));
        let o = Operator::for_system(g, &spec, Scheme::Central).unwrap();
        let dt = 4.0 * o.stable_dt(1.0);
        let mut st = FieldState::sample(&g, 0.0, sol.as_ref()).unwrap();
        let mut stepper = Stepper::new(o, Boundary::Exact(sol));
        let mut blew = false;
        for _ in 0..2000 {
            if stepper.step(&mut st, dt).is_err() {
                blew = true;
                break;
            }
        }
        assert!(blew);
    }

    #[test]
    fn singular_box_is_a_config_error() {
        let sol: SharedField = Arc::new(ExactSolution::default_for(SolutionId::Rational));
        let spec = SystemSpec::new(SystemKind::PdeRotatedFree, SystemParams::new(1.0, 2.0, 3.0));
        let cfg = SimConfig {
            grid: Grid2D::new(9, 9, (-5.0, -3.0), (-1.0, 1.0)).unwrap(),
            t0: 0.0,
            t_end: 0.1,
            cfl: 0.4,
            scheme: Scheme::Central,
        };
        assert!(matches!(simulate(&cfg, &spec, sol), Err(Error::Config(_))));
    }

    #[test]
    fn rhs_matches_jets_to_second_order() {
        let sol = ExactSolution::default_for(SolutionId::Rational).to_lab_frame().unwrap();
        let spec = sol.target_system();
        let err = |n: usize| {
            let g = Grid2D::square(n, 0.2, 1.0).unwrap();
            let o = Operator::for_system(g, &spec, Scheme::Central).unwrap();
            let st = FieldState::sample(&g, 0.4, &sol).unwrap();
            let mut out = FieldState::zeros(&g, 0.0).u;
            o.rhs(&st.u, &mut out);
            let mut e: f64 = 0.0;
            for j in 1..n - 1 {
                for i in 1..n - 1 {
                    let jets = sol.jets([0.4, g.xi(i), g.yj(j)]).unwrap();
                    for c in 0..3 {
                        e = e.max((out[c][g.idx(i, j)] - jets[c].dt()).abs());
                    }
                }
            }
            e
        };
        let (e1, e2) = (err(17), err(33));
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.2, "{e1} {e2} {order}");
    }

    #[test]
    fn csv_has_one_row_per_node() {
        let g = Grid2D::square(9, 0.0, 1.0).unwrap();
        let s = FieldState::zeros(&g, 0.5);
        let mut buf = Vec::new();
        s.write_csv(&g, true, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 82);
        assert!(text.starts_with("t,x,y,u,v,w\n5.00000000000000e-1,"));
    }
}
