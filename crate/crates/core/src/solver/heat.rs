//! Decoupled heat kernels: the exact solution of the system with `k = 0`
//! and no convection, used as a classical control for the solver.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::field::SolutionField;
use crate::numerics::{Jet2, Point, Scalar};

/// `u_i = m_i / (4 pi d_i s) exp(-|X - X0|^2 / (4 d_i s))` with `s = t + tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatKernel {
    pub d: [f64; 3],
    pub mass: [f64; 3],
    pub center: [f64; 2],
    pub tau: f64,
}

impl HeatKernel {
    pub fn new(d: [f64; 3], mass: [f64; 3], center: [f64; 2], tau: f64) -> Result<Self> {
        if d.iter().any(|v| !(*v > 0.0)) {
            return Err(param("heat kernel diffusivities must be positive"));
        }
        Ok(HeatKernel { d, mass, center, tau })
    }

    pub fn eval<S: Scalar>(&self, t: S, x: S, y: S) -> Result<[S; 3]> {
        let s = t + self.tau;
        if !(s.value() > 0.0) {
            return Err(param(format!("heat kernel needs t + tau > 0, got {}", s.value())));
        }
        let r2 = (x - self.center[0]).sq() + (y - self.center[1]).sq();
        let inv = s.try_recip()?;
        let mut out = [S::cst(0.0); 3];
        for c in 0..3 {
            let k = self.mass[c] / (4.0 * std::f64::consts::PI * self.d[c]);
            out[c] = inv * k * (-(r2 * inv) / (4.0 * self.d[c])).exp();
        }
        Ok(out)
    }
}

impl SolutionField for HeatKernel {
    fn label(&self) -> String {
        "heat kernel".into()
    }

    fn jets(&self, p: Point) -> Result<[Jet2; 3]> {
        let [t, x, y] = Jet2::seed(p);
        self.eval(t, x, y)
    }

    fn values(&self, p: Point) -> Result<[f64; 3]> {
        self.eval(p[0], p[1], p[2])
    }

    fn is_valid(&self, p: Point, margin: f64) -> bool {
        p[0] + self.tau > margin
    }
}
