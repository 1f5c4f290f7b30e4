//! Differentiable vector fields `(t, x, y) -> (u, v, w)` and coordinate wrappers.

use std::sync::Arc;

use crate::error::Result;
use crate::numerics::{default_steps, fd_jets, Jet2, Point};

/// Anything that can be certified: exact formulas, transported or transformed solutions.
pub trait SolutionField: Send + Sync {
    fn label(&self) -> String;

    /// Values and derivatives up to second order.
    fn jets(&self, p: Point) -> Result<[Jet2; 3]>;

    fn values(&self, p: Point) -> Result<[f64; 3]> {
        let j = self.jets(p)?;
        Ok([j[0].v, j[1].v, j[2].v])
    }

    /// False within `margin` of a singular set.
    fn is_valid(&self, p: Point, margin: f64) -> bool;

    /// Finite-difference jets with the default steps multiplied by `scale`.
    fn fd_jets(&self, p: Point, scale: f64) -> Result<[Jet2; 3]> {
        let steps = default_steps(p).map(|h| h * scale);
        fd_jets(|q| self.values(q), p, steps)
    }
}

pub type SharedField = Arc<dyn SolutionField>;

impl<F: SolutionField + ?Sized> SolutionField for Arc<F> {
    fn label(&self) -> String {
        (**self).label()
    }
    fn jets(&self, p: Point) -> Result<[Jet2; 3]> {
        (**self).jets(p)
    }
    fn values(&self, p: Point) -> Result<[f64; 3]> {
        (**self).values(p)
    }
    fn is_valid(&self, p: Point, margin: f64) -> bool {
        (**self).is_valid(p, margin)
    }
    fn fd_jets(&self, p: Point, scale: f64) -> Result<[Jet2; 3]> {
        (**self).fd_jets(p, scale)
    }
}

/// Lab coordinates to the rotating frame: `(t, x sin2t + y cos2t, y sin2t - x cos2t)`.
pub fn lab_to_rotated(p: Point) -> Point {
    let (s, c) = (2.0 * p[0]).sin_cos();
    [p[0], p[1] * s + p[2] * c, p[2] * s - p[1] * c]
}

/// Inverse of [`lab_to_rotated`].
pub fn rotated_to_lab(p: Point) -> Point {
    let (s, c) = (2.0 * p[0]).sin_cos();
    [p[0], s * p[1] - c * p[2], c * p[1] + s * p[2]]
}

/// Jets of [`lab_to_rotated`] (or its inverse) as functions of the seeded point.
pub fn rotation_map_jets(p: Point, to_rotated: bool) -> [Jet2; 3] {
    use crate::numerics::Scalar;
    let [t, x, y] = Jet2::seed(p);
    let two_t = t * 2.0;
    let s = two_t.sin();
    let c = two_t.cos();
    if to_rotated {
        [t, x * s + y * c, y * s - x * c]
    } else {
        [t, s * x - c * y, c * x + s * y]
    }
}

/// Field expressed in other coordinates: `out(P) = inner(map(P))`.
pub struct Rotated {
    inner: SharedField,
    /// If true the inner field lives in the rotating frame and we present it in the lab.
    inner_is_rotated: bool,
}

impl Rotated {
    /// Presents a rotating-frame field in lab coordinates.
    pub fn to_lab(inner: SharedField) -> Self {
        Rotated { inner, inner_is_rotated: true }
    }

    /// Presents a lab-frame field in rotating coordinates.
    pub fn to_rotated(inner: SharedField) -> Self {
        Rotated { inner, inner_is_rotated: false }
    }

    fn map(&self, p: Point) -> Point {
        if self.inner_is_rotated {
            lab_to_rotated(p)
        } else {
            rotated_to_lab(p)
        }
    }
}

impl SolutionField for Rotated {
    fn label(&self) -> String {
        let dir = if self.inner_is_rotated { "lab" } else { "rotated" };
        format!("{}@{dir}", self.inner.label())
    }
    fn jets(&self, p: Point) -> Result<[Jet2; 3]> {
        let map = rotation_map_jets(p, self.inner_is_rotated);
        let q = [map[0].v, map[1].v, map[2].v];
        let inner = self.inner.jets(q)?;
        Ok(inner.map(|j| j.chain(&map)))
    }
    fn values(&self, p: Point) -> Result<[f64; 3]> {
        self.inner.values(self.map(p))
    }
    fn is_valid(&self, p: Point, margin: f64) -> bool {
        self.inner.is_valid(self.map(p), margin)
    }
}

/// Componentwise scaling, used as a negative control.
pub struct Scaled {
    pub inner: SharedField,
    pub factors: [f64; 3],
}

impl SolutionField for Scaled {
    fn label(&self) -> String {
        format!("{}*{:?}", self.inner.label(), self.factors)
    }
    fn jets(&self, p: Point) -> Result<[Jet2; 3]> {
        let j = self.inner.jets(p)?;
        Ok([j[0] * self.factors[0], j[1] * self.factors[1], j[2] * self.factors[2]])
    }
    fn is_valid(&self, p: Point, margin: f64) -> bool {
        self.inner.is_valid(p, margin)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_round_trip() {
        for p in [[0.3, 1.0, -2.0], [2.1, -0.4, 0.9]] {
            let q = rotated_to_lab(lab_to_rotated(p));
            assert!((q[1] - p[1]).abs() < 1e-14 && (q[2] - p[2]).abs() < 1e-14);
        }
        let q = lab_to_rotated([std::f64::consts::FRAC_PI_4, 1.0, 0.0]);
        assert!((q[1] - 1.0).abs() < 1e-15 && q[2].abs() < 1e-15);
    }

    #[test]
    fn map_jets_match_values() {
        let p = [0.7, 0.2, -1.3];
        let m = rotation_map_jets(p, true);
        let q = lab_to_rotated(p);
        assert!((m[1].v - q[1]).abs() < 1e-15 && (m[2].v - q[2]).abs() < 1e-15);
        // d x*/dt = 2 (x cos2t - y sin2t)
        let (s, c) = (1.4f64).sin_cos();
        assert!((m[1].dt() - 2.0 * (p[1] * c - p[2] * s)).abs() < 1e-14);
    }
}
