//! Equivalence transformations of the convective system: they change the
//! diffusivities, the rate constant and the stream function together with
//! the solution.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::generator::Coef;
use crate::error::{param, Result};
use crate::field::{Rotated, SharedField, SolutionField};
use crate::numerics::{Jet2, Point};
use crate::residual::{SystemKind, SystemSpec};
use crate::solutions::SystemParams;

/// `t* = a0 t + t0`, `X* = M X + shift` with `M = [[a1, a2], [-s a2, s a1]]`,
/// `u* = a3 u`, `v* = a3 v`, `w* = a3 w + H(t, X)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRotation {
    pub a0: f64,
    pub t0: f64,
    pub a1: f64,
    pub a2: f64,
    /// `+1` or `-1`.
    pub s: f64,
    pub shift: [f64; 2],
    pub a3: f64,
    /// Constant added to the new stream function.
    pub psi0: f64,
}

impl Default for ScalingRotation {
    fn default() -> Self {
        ScalingRotation { a0: 1.0, t0: 0.0, a1: 1.0, a2: 0.0, s: 1.0, shift: [0.0, 0.0], a3: 1.0, psi0: 0.0 }
    }
}

impl ScalingRotation {
    pub fn lambda(&self) -> f64 {
        self.a1 * self.a1 + self.a2 * self.a2
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a0 > 0.0 && self.a3 > 0.0) {
            return Err(param(format!("a0 and a3 must be positive, got {} and {}", self.a0, self.a3)));
        }
        if self.lambda() == 0.0 {
            return Err(param("a1^2 + a2^2 must be nonzero"));
        }
        if self.s != 1.0 && self.s != -1.0 {
            return Err(param(format!("s must be +1 or -1, got {}", self.s)));
        }
        Ok(())
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a1, self.a2], [-self.s * self.a2, self.s * self.a1]]
    }

    pub fn inverse_matrix(&self) -> [[f64; 2]; 2] {
        let det = self.s * self.lambda();
        [[self.s * self.a1 / det, -self.a2 / det], [self.s * self.a2 / det, self.a1 / det]]
    }

    /// New coordinates of an old point.
    pub fn forward(&self, p: Point) -> Point {
        let m = self.matrix();
        [
            self.a0 * p[0] + self.t0,
            m[0][0] * p[1] + m[0][1] * p[2] + self.shift[0],
            m[1][0] * p[1] + m[1][1] * p[2] + self.shift[1],
        ]
    }

    /// Old coordinates of a new point.
    pub fn backward(&self, q: Point) -> Point {
        let m = self.inverse_matrix();
        let (x, y) = (q[1] - self.shift[0], q[2] - self.shift[1]);
        [(q[0] - self.t0) / self.a0, m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y]
    }

    fn backward_jets(&self, q: Point) -> [Jet2; 3] {
        let [t, x, y] = Jet2::seed(q);
        let m = self.inverse_matrix();
        let (x, y) = (x - self.shift[0], y - self.shift[1]);
        [(t - self.t0) / self.a0, x * m[0][0] + y * m[0][1], x * m[1][0] + y * m[1][1]]
    }

    /// Transformed `pde_full` system.
    pub fn apply_system(&self, spec: &SystemSpec) -> Result<SystemSpec> {
        self.validate()?;
        if spec.kind != SystemKind::PdeFull {
            return Err(param("scaling-rotation acts on pde_full systems"));
        }
        let stream = spec.stream.as_ref().ok_or_else(|| param("pde_full needs a stream function"))?;
        let lam = self.lambda();
        let p = spec.params;
        let params = SystemParams {
            d1: lam * p.d1 / self.a0,
            d2: lam * p.d2 / self.a0,
            d3: lam * p.d3 / self.a0,
            k: p.k / (self.a0 * self.a3),
            alpha: p.alpha,
        };
        let scale = self.s * lam / self.a0;
        let stream = stream.affine(self.inverse_matrix(), self.shift, scale, self.psi0);
        Ok(SystemSpec { params, stream: Some(stream), ..spec.clone() })
    }

    /// Transformed solution. `h` must solve the linear `w` equation without
    /// reaction in the old system.
    pub fn apply_field(&self, inner: SharedField, h: Option<Coef>) -> Result<SharedField> {
        self.validate()?;
        Ok(Arc::new(TransformedField { map: *self, inner, h }))
    }
}

struct TransformedField {
    map: ScalingRotation,
    inner: SharedField,
    h: Option<Coef>,
}

impl SolutionField for TransformedField {
    fn label(&self) -> String {
        format!("scaling-rotation of {}", self.inner.label())
    }

    fn jets(&self, q: Point) -> Result<[Jet2; 3]> {
        let old = self.map.backward_jets(q);
        let at = [old[0].v, old[1].v, old[2].v];
        let u = self.inner.jets(at)?;
        let a3 = self.map.a3;
        let mut out = [u[0].chain(&old) * a3, u[1].chain(&old) * a3, u[2].chain(&old) * a3];
        if let Some(h) = &self.h {
            let hj = match h.compose(&old) {
                Some(j) => j,
                None => h.jet_at(at).chain(&old),
            };
            out[2] = out[2] + hj;
        }
        Ok(out)
    }

    fn values(&self, q: Point) -> Result<[f64; 3]> {
        let p = self.map.backward(q);
        let u = self.inner.values(p)?;
        let h = self.h.as_ref().map_or(0.0, |h| h.value(p));
        let a3 = self.map.a3;
        Ok([a3 * u[0], a3 * u[1], a3 * u[2] + h])
    }

    fn is_valid(&self, q: Point, margin: f64) -> bool {
        self.inner.is_valid(self.map.backward(q), margin)
    }
}

struct Swapped(SharedField);

impl SolutionField for Swapped {
    fn label(&self) -> String {
        format!("swap of {}", self.0.label())
    }

    fn jets(&self, p: Point) -> Result<[Jet2; 3]> {
        let [u, v, w] = self.0.jets(p)?;
        Ok([v, u, w])
    }

    fn values(&self, p: Point) -> Result<[f64; 3]> {
        let [u, v, w] = self.0.values(p)?;
        Ok([v, u, w])
    }

    fn is_valid(&self, p: Point, margin: f64) -> bool {
        self.0.is_valid(p, margin)
    }
}

/// `u <-> v` together with `d1 <-> d2`.
pub fn swap(spec: &SystemSpec, inner: SharedField) -> (SystemSpec, SharedField) {
    let mut out = spec.clone();
    std::mem::swap(&mut out.params.d1, &mut out.params.d2);
    (out, Arc::new(Swapped(inner)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameDirection {
    ToRotated,
    ToLab,
}

/// Moves a solution between the lab frame of the `Psi = x^2 + y^2` system
/// and the rotating frame, where the convection term disappears.
pub fn rotating_frame(direction: FrameDirection, sol: SharedField) -> SharedField {
    match direction {
        FrameDirection::ToRotated => Arc::new(Rotated::to_rotated(sol)),
        FrameDirection::ToLab => Arc::new(Rotated::to_lab(sol)),
    }
}

/// System matching the output of [`rotating_frame`].
pub fn frame_system(direction: FrameDirection, params: SystemParams) -> SystemSpec {
    match direction {
        FrameDirection::ToRotated => SystemSpec::new(SystemKind::PdeRotatedFree, params),
        FrameDirection::ToLab => SystemSpec::case10(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_and_backward_are_inverse() {
        let m =
            ScalingRotation { a0: 2.0, t0: 0.5, a1: 0.6, a2: -1.1, s: -1.0, shift: [0.3, -0.2], a3: 1.5, psi0: 0.0 };
        for p in [[0.1, 0.2, 0.3], [1.0, -2.0, 0.7]] {
            let q = m.backward(m.forward(p));
            for k in 0..3 {
                assert!((q[k] - p[k]).abs() < 1e-14);
            }
        }
        assert!(ScalingRotation { s: 0.5, ..m }.validate().is_err());
        assert!(ScalingRotation { a0: -1.0, ..m }.validate().is_err());
        assert!(ScalingRotation { a1: 0.0, a2: 0.0, ..m }.validate().is_err());
    }
}
