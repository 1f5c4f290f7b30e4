//! Second-order forward-mode jets in the variables `(t, x, y)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::scalar::Scalar;
use crate::error::{domain, Result};

/// Index of each independent variable in a [`Jet2`] gradient.
pub const T: usize = 0;
pub const X: usize = 1;
pub const Y: usize = 2;

/// Position of `(i, j)` in the packed upper-triangular Hessian.
/// Order: tt, tx, ty, xx, xy, yy.
#[inline]
pub const fn hidx(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

/// Value, gradient and Hessian of a scalar function of `(t, x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub g: [f64; 3],
    pub h: [f64; 6],
}

impl Jet2 {
    pub const fn constant(c: f64) -> Self {
        Jet2 { v: c, g: [0.0; 3], h: [0.0; 6] }
    }

    /// The independent variable with index `k` at value `val`.
    pub fn var(k: usize, val: f64) -> Self {
        let mut j = Jet2::constant(val);
        j.g[k] = 1.0;
        j
    }

    /// Seeds `(t, x, y)` at a point.
    pub fn seed(p: [f64; 3]) -> [Jet2; 3] {
        [Jet2::var(T, p[0]), Jet2::var(X, p[1]), Jet2::var(Y, p[2])]
    }

    pub fn d(&self, k: usize) -> f64 {
        self.g[k]
    }

    pub fn dd(&self, i: usize, j: usize) -> f64 {
        self.h[hidx(i, j)]
    }

    pub fn dt(&self) -> f64 {
        self.g[T]
    }
    pub fn dx(&self) -> f64 {
        self.g[X]
    }
    pub fn dy(&self) -> f64 {
        self.g[Y]
    }
    pub fn dxx(&self) -> f64 {
        self.h[3]
    }
    pub fn dxy(&self) -> f64 {
        self.h[4]
    }
    pub fn dyy(&self) -> f64 {
        self.h[5]
    }
    pub fn dtt(&self) -> f64 {
        self.h[0]
    }

    /// Spatial Laplacian `f_xx + f_yy`.
    pub fn lap(&self) -> f64 {
        self.h[3] + self.h[5]
    }

    /// Checked division; fails when the divisor value is zero.
    pub fn checked_div(self, rhs: Jet2) -> Result<Jet2> {
        if rhs.v == 0.0 {
            return Err(domain("jet division by zero"));
        }
        Ok(self / rhs)
    }

    /// Re-expresses `self`, whose derivatives are taken with respect to
    /// coordinates `a = (a0, a1, a2)`, as a jet in the variables that `map`
    /// is differentiated against.
    pub fn chain(&self, map: &[Jet2; 3]) -> Jet2 {
        let mut out = Jet2::constant(self.v);
        for i in 0..3 {
            let mut s = 0.0;
            for k in 0..3 {
                s += self.g[k] * map[k].g[i];
            }
            out.g[i] = s;
        }
        for i in 0..3 {
            for j in i..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += self.g[k] * map[k].dd(i, j);
                    for l in 0..3 {
                        s += self.dd(k, l) * map[k].g[i] * map[l].g[j];
                    }
                }
                out.h[hidx(i, j)] = s;
            }
        }
        out
    }

    /// Largest absolute deviation between two jets over all stored entries.
    pub fn max_diff(&self, o: &Jet2) -> f64 {
        let mut m = (self.v - o.v).abs();
        for k in 0..3 {
            m = m.max((self.g[k] - o.g[k]).abs());
        }
        for k in 0..6 {
            m = m.max((self.h[k] - o.h[k]).abs());
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.g.iter().all(|x| x.is_finite()) && self.h.iter().all(|x| x.is_finite())
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(mut self, o: Jet2) -> Jet2 {
        self.v += o.v;
        for k in 0..3 {
            self.g[k] += o.g[k];
        }
        for k in 0..6 {
            self.h[k] += o.h[k];
        }
        self
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(mut self) -> Jet2 {
        self.v = -self.v;
        for k in 0..3 {
            self.g[k] = -self.g[k];
        }
        for k in 0..6 {
            self.h[k] = -self.h[k];
        }
        self
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let mut r = Jet2::constant(self.v * o.v);
        for k in 0..3 {
            r.g[k] = self.g[k] * o.v + self.v * o.g[k];
        }
        for i in 0..3 {
            for j in i..3 {
                let m = hidx(i, j);
                r.h[m] = self.h[m] * o.v + self.g[i] * o.g[j] + self.g[j] * o.g[i] + self.v * o.h[m];
            }
        }
        r
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let a = o.v;
        let r = 1.0 / a;
        self * o.lift([r, -r * r, 2.0 * r * r * r, 0.0])
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(mut self, c: f64) -> Jet2 {
        self.v += c;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(mut self, c: f64) -> Jet2 {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(mut self, c: f64) -> Jet2 {
        self.v *= c;
        for k in 0..3 {
            self.g[k] *= c;
        }
        for k in 0..6 {
            self.h[k] *= c;
        }
        self
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, c: f64) -> Jet2 {
        self * (1.0 / c)
    }
}

impl Scalar for Jet2 {
    fn cst(c: f64) -> Self {
        Jet2::constant(c)
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn lift(&self, d: [f64; 4]) -> Self {
        let mut r = Jet2::constant(d[0]);
        for k in 0..3 {
            r.g[k] = d[1] * self.g[k];
        }
        for i in 0..3 {
            for j in i..3 {
                let m = hidx(i, j);
                r.h[m] = d[1] * self.h[m] + d[2] * self.g[i] * self.g[j];
            }
        }
        r
    }
}
