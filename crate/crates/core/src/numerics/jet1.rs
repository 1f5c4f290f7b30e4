//! Third-order jets in one variable, used for ODE profiles.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::scalar::Scalar;

/// `[f, f', f'', f''']` of a function of one variable.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet1(pub [f64; 4]);

impl Jet1 {
    pub const fn constant(c: f64) -> Self {
        Jet1([c, 0.0, 0.0, 0.0])
    }

    pub const fn var(z: f64) -> Self {
        Jet1([z, 1.0, 0.0, 0.0])
    }

    pub fn d(&self, k: usize) -> f64 {
        self.0[k]
    }
}

impl Add for Jet1 {
    type Output = Jet1;
    fn add(self, o: Jet1) -> Jet1 {
        Jet1(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl Sub for Jet1 {
    type Output = Jet1;
    fn sub(self, o: Jet1) -> Jet1 {
        Jet1(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl Neg for Jet1 {
    type Output = Jet1;
    fn neg(self) -> Jet1 {
        Jet1(self.0.map(|a| -a))
    }
}

impl Mul for Jet1 {
    type Output = Jet1;
    fn mul(self, o: Jet1) -> Jet1 {
        let a = self.0;
        let b = o.0;
        Jet1([
            a[0] * b[0],
            a[1] * b[0] + a[0] * b[1],
            a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2],
            a[3] * b[0] + 3.0 * a[2] * b[1] + 3.0 * a[1] * b[2] + a[0] * b[3],
        ])
    }
}

impl Div for Jet1 {
    type Output = Jet1;
    fn div(self, o: Jet1) -> Jet1 {
        let r = 1.0 / o.0[0];
        self * o.lift([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }
}

impl Add<f64> for Jet1 {
    type Output = Jet1;
    fn add(mut self, c: f64) -> Jet1 {
        self.0[0] += c;
        self
    }
}

impl Sub<f64> for Jet1 {
    type Output = Jet1;
    fn sub(mut self, c: f64) -> Jet1 {
        self.0[0] -= c;
        self
    }
}

impl Mul<f64> for Jet1 {
    type Output = Jet1;
    fn mul(self, c: f64) -> Jet1 {
        Jet1(self.0.map(|a| a * c))
    }
}

impl Div<f64> for Jet1 {
    type Output = Jet1;
    fn div(self, c: f64) -> Jet1 {
        Jet1(self.0.map(|a| a / c))
    }
}

impl Scalar for Jet1 {
    fn cst(c: f64) -> Self {
        Jet1::constant(c)
    }
    fn value(&self) -> f64 {
        self.0[0]
    }
    fn lift(&self, d: [f64; 4]) -> Self {
        let g = self.0;
        Jet1([
            d[0],
            d[1] * g[1],
            d[2] * g[1] * g[1] + d[1] * g[2],
            d[3] * g[1] * g[1] * g[1] + 3.0 * d[2] * g[1] * g[2] + d[1] * g[3],
        ])
    }
}
