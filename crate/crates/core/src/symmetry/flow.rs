//! One-parameter groups generated by a [`LieGenerator`] and the action on solutions.

use std::sync::Arc;

use super::generator::{Coef, LieGenerator};
use crate::error::{Error, Result};
use crate::field::{SharedField, SolutionField};
use crate::numerics::{default_steps, fd_jets, rk4_fixed, rk4_integrate, Jet2, Point};

/// Tolerance of the adaptive point flow.
pub const FLOW_TOL: f64 = 1e-12;

/// Image of `z = (t, x, y, u, v, w)` under `exp(eps X)`.
pub fn flow_map(g: &LieGenerator, z: [f64; 6], eps: f64) -> Result<[f64; 6]> {
    let out = rk4_integrate(
        |_, y, dy| {
            let f = g.field(&[y[0], y[1], y[2], y[3], y[4], y[5]]);
            dy.copy_from_slice(&f);
            Ok(())
        },
        &z,
        0.0,
        eps,
        FLOW_TOL,
    )?;
    let mut r = [0.0; 6];
    r.copy_from_slice(&out.y);
    Ok(r)
}

/// Number of fixed RK4 steps used for transported fields.
pub fn transport_steps(eps: f64) -> usize {
    ((400.0 * eps.abs()).ceil() as usize).max(64)
}

fn rk4_jets<const N: usize, F>(rhs: F, y0: [Jet2; N], s1: f64, steps: usize) -> Result<[Jet2; N]>
where
    F: Fn(&[Jet2; N]) -> Result<[Jet2; N]>,
{
    let h = s1 / steps as f64;
    let mut y = y0;
    let axpy = |y: &[Jet2; N], k: &[Jet2; N], a: f64| -> [Jet2; N] { std::array::from_fn(|i| y[i] + k[i] * a) };
    for _ in 0..steps {
        let k1 = rhs(&y)?;
        let k2 = rhs(&axpy(&y, &k1, 0.5 * h))?;
        let k3 = rhs(&axpy(&y, &k2, 0.5 * h))?;
        let k4 = rhs(&axpy(&y, &k3, h))?;
        for i in 0..N {
            y[i] = y[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
    }
    if y.iter().all(Jet2::is_finite) {
        Ok(y)
    } else {
        Err(Error::Integration("transport state became non-finite".into()))
    }
}

fn compose(c: &Coef, args: &[Jet2; 3]) -> Result<Jet2> {
    c.compose(args).ok_or_else(|| Error::Precision("value-only coefficient in jet transport".into()))
}

/// The solution `u_eps` obtained from `inner` by `exp(eps X)`.
///
/// `u_eps(P) = Phi_fiber(u(P0))` with `P0 = exp(-eps X) P` on the base. Jets
/// are propagated through fixed-step RK4, so they are the exact derivatives
/// of the discrete map. Generators with value-only coefficients fall back to
/// finite differences of the same map.
#[derive(Clone)]
pub struct Transported {
    pub inner: SharedField,
    pub generator: Arc<LieGenerator>,
    pub eps: f64,
    steps: usize,
    jet_capable: bool,
}

impl Transported {
    pub fn new(inner: SharedField, generator: LieGenerator, eps: f64) -> Self {
        let jet_capable = generator
            .xi
            .iter()
            .chain(generator.lin.iter().flatten())
            .chain(generator.aff.iter())
            .all(|c| !matches!(c, Coef::Values(_)));
        Transported { inner, generator: Arc::new(generator), eps, steps: transport_steps(eps), jet_capable }
    }

    pub fn shared(self) -> SharedField {
        Arc::new(self)
    }

    fn base_rhs(&self, sign: f64) -> impl Fn(&[Jet2; 3]) -> Result<[Jet2; 3]> + '_ {
        move |x: &[Jet2; 3]| {
            let g = &self.generator;
            Ok([compose(&g.xi[0], x)? * sign, compose(&g.xi[1], x)? * sign, compose(&g.xi[2], x)? * sign])
        }
    }

    fn full_rhs(&self, z: &[Jet2; 6]) -> Result<[Jet2; 6]> {
        let g = &self.generator;
        let x = [z[0], z[1], z[2]];
        let mut out = [Jet2::default(); 6];
        for k in 0..3 {
            out[k] = compose(&g.xi[k], &x)?;
            let mut e = compose(&g.aff[k], &x)?;
            for j in 0..3 {
                if !g.lin[k][j].is_zero() {
                    e = e + compose(&g.lin[k][j], &x)? * z[3 + j];
                }
            }
            out[3 + k] = e;
        }
        Ok(out)
    }

    /// Preimage of `p` under the base flow.
    pub fn base_preimage(&self, p: Point) -> Result<Point> {
        let y = rk4_fixed(
            |_, y, dy| {
                let xi = self.generator.xi_at([y[0], y[1], y[2]]);
                dy.copy_from_slice(&xi);
                for v in dy.iter_mut() {
                    *v = -*v;
                }
                Ok(())
            },
            &p,
            0.0,
            self.eps,
            self.steps,
        )?;
        Ok([y[0], y[1], y[2]])
    }

    fn values_impl(&self, p: Point) -> Result<[f64; 3]> {
        let p0 = self.base_preimage(p)?;
        let u0 = self.inner.values(p0)?;
        let z0 = [p0[0], p0[1], p0[2], u0[0], u0[1], u0[2]];
        // Integrating the displacement keeps rounding proportional to it
        // rather than to the solution, which keeps difference quotients clean.
        let dz = rk4_fixed(
            |_, d, dy| {
                let z: [f64; 6] = std::array::from_fn(|k| z0[k] + d[k]);
                dy.copy_from_slice(&self.generator.field(&z));
                Ok(())
            },
            &[0.0; 6],
            0.0,
            self.eps,
            self.steps,
        )?;
        Ok([u0[0] + dz[3], u0[1] + dz[4], u0[2] + dz[5]])
    }
}

impl SolutionField for Transported {
    fn label(&self) -> String {
        format!("exp({} {}) {}", self.eps, self.generator.label, self.inner.label())
    }

    fn jets(&self, p: Point) -> Result<[Jet2; 3]> {
        if !self.jet_capable {
            return fd_jets(|q| self.values_impl(q), p, default_steps(p));
        }
        let x0 = rk4_jets(self.base_rhs(-1.0), Jet2::seed(p), self.eps, self.steps)?;
        let at = [x0[0].v, x0[1].v, x0[2].v];
        let u = self.inner.jets(at)?;
        let z0 = [x0[0], x0[1], x0[2], u[0].chain(&x0), u[1].chain(&x0), u[2].chain(&x0)];
        let z = rk4_jets(|z| self.full_rhs(z), z0, self.eps, self.steps)?;
        Ok([z[3], z[4], z[5]])
    }

    fn values(&self, p: Point) -> Result<[f64; 3]> {
        self.values_impl(p)
    }

    fn is_valid(&self, p: Point, margin: f64) -> bool {
        match self.base_preimage(p) {
            Ok(p0) => self.inner.is_valid(p0, margin),
            Err(_) => false,
        }
    }
}
