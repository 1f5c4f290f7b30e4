//! Scalar abstraction shared by plain floats and the two jet types.
//!
//! Every formula in the crate is written once against [`Scalar`] and then
//! evaluated either as `f64`, as a second-order jet in `(t, x, y)`, or as a
//! third-order jet in a single variable.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{domain, Result};

/// Elementary functions known to the jet machinery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Elem {
    Sin,
    Cos,
    Tan,
    Sec,
    Tanh,
    Sech,
    Coth,
    Exp,
    Ln,
    Sqrt,
    Atan,
    Recip,
    Pow(f64),
}

/// Tolerance used to reject `sec`/`tan` arguments at odd multiples of pi/2.
pub const TRIG_POLE_TOL: f64 = 1e-12;

impl Elem {
    /// Returns `Err` when `a` is outside the domain of the function.
    pub fn check(self, a: f64) -> Result<()> {
        if !a.is_finite() {
            return Err(domain(format!("{self:?} of non-finite argument")));
        }
        match self {
            Elem::Tan | Elem::Sec if a.cos().abs() < TRIG_POLE_TOL => {
                Err(domain(format!("{self:?} at pole, argument {a}")))
            }
            Elem::Coth if a == 0.0 => Err(domain("coth at 0")),
            Elem::Ln if a <= 0.0 => Err(domain(format!("ln of non-positive {a}"))),
            Elem::Sqrt if a <= 0.0 => Err(domain(format!("sqrt jet at non-positive {a}"))),
            Elem::Recip if a == 0.0 => Err(domain("division by zero")),
            Elem::Pow(p) => {
                let integral = p.fract() == 0.0;
                if a < 0.0 && !integral {
                    Err(domain(format!("pow({a}, {p}) with negative base")))
                } else if a == 0.0 && (p < 0.0 || (!integral && p < 3.0)) {
                    Err(domain(format!("pow(0, {p}) is not smooth")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Value and first three derivatives at `a`. No domain check.
    pub fn derivs(self, a: f64) -> [f64; 4] {
        match self {
            Elem::Sin => {
                let (s, c) = a.sin_cos();
                [s, c, -s, -c]
            }
            Elem::Cos => {
                let (s, c) = a.sin_cos();
                [c, -s, -c, s]
            }
            Elem::Tan => {
                let t = a.tan();
                let s2 = 1.0 + t * t;
                [t, s2, 2.0 * t * s2, s2 * (2.0 + 6.0 * t * t)]
            }
            Elem::Sec => {
                let s = 1.0 / a.cos();
                let t = a.tan();
                [s, s * t, s * (t * t + s * s), s * t * t * t + 5.0 * s * s * s * t]
            }
            Elem::Tanh => {
                let h = a.tanh();
                let q = 1.0 - h * h;
                [h, q, -2.0 * h * q, (6.0 * h * h - 2.0) * q]
            }
            Elem::Sech => {
                let q = 1.0 / a.cosh();
                let h = a.tanh();
                [q, -q * h, q * (h * h - q * q), -q * h * h * h + 5.0 * q * q * q * h]
            }
            Elem::Coth => {
                let h = 1.0 / a.tanh();
                let q = 1.0 - h * h;
                [h, q, -2.0 * h * q, (6.0 * h * h - 2.0) * q]
            }
            Elem::Exp => {
                let e = a.exp();
                [e, e, e, e]
            }
            Elem::Ln => [a.ln(), 1.0 / a, -1.0 / (a * a), 2.0 / (a * a * a)],
            Elem::Sqrt => {
                let s = a.sqrt();
                [s, 0.5 / s, -0.25 / (s * a), 0.375 / (s * a * a)]
            }
            Elem::Atan => {
                let q = 1.0 + a * a;
                [a.atan(), 1.0 / q, -2.0 * a / (q * q), (6.0 * a * a - 2.0) / (q * q * q)]
            }
            Elem::Recip => {
                let r = 1.0 / a;
                [r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]
            }
            Elem::Pow(p) => {
                if p == 0.0 {
                    return [1.0, 0.0, 0.0, 0.0];
                }
                let d1 = if p == 1.0 { 1.0 } else { p * a.powf(p - 1.0) };
                let d2 = if p == 1.0 {
                    0.0
                } else if p == 2.0 {
                    2.0
                } else {
                    p * (p - 1.0) * a.powf(p - 2.0)
                };
                let d3 = if p == 1.0 || p == 2.0 {
                    0.0
                } else if p == 3.0 {
                    6.0
                } else {
                    p * (p - 1.0) * (p - 2.0) * a.powf(p - 3.0)
                };
                [a.powf(p), d1, d2, d3]
            }
        }
    }
}

/// Numeric type over which closed-form expressions are evaluated.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(c: f64) -> Self;
    fn value(&self) -> f64;
    /// Composes a univariate function given as `[f, f', f'', f''']` at `self.value()`.
    fn lift(&self, d: [f64; 4]) -> Self;

    /// Checked application of an elementary function.
    fn apply(&self, e: Elem) -> Result<Self> {
        let a = self.value();
        e.check(a)?;
        Ok(self.lift(e.derivs(a)))
    }

    /// Unchecked application; non-finite results propagate.
    fn elem(&self, e: Elem) -> Self {
        self.lift(e.derivs(self.value()))
    }

    fn sin(&self) -> Self {
        self.elem(Elem::Sin)
    }
    fn cos(&self) -> Self {
        self.elem(Elem::Cos)
    }
    fn exp(&self) -> Self {
        self.elem(Elem::Exp)
    }
    fn tanh(&self) -> Self {
        self.elem(Elem::Tanh)
    }
    fn atan(&self) -> Self {
        self.elem(Elem::Atan)
    }
    fn sq(&self) -> Self {
        *self * *self
    }
    fn powi(&self, n: i32) -> Self {
        self.elem(Elem::Pow(n as f64))
    }
    fn try_ln(&self) -> Result<Self> {
        self.apply(Elem::Ln)
    }
    fn try_sec(&self) -> Result<Self> {
        self.apply(Elem::Sec)
    }
    fn try_recip(&self) -> Result<Self> {
        self.apply(Elem::Recip)
    }
    fn try_coth(&self) -> Result<Self> {
        self.apply(Elem::Coth)
    }
    fn try_sqrt(&self) -> Result<Self> {
        self.apply(Elem::Sqrt)
    }
    fn try_powf(&self, p: f64) -> Result<Self> {
        self.apply(Elem::Pow(p))
    }
}

impl Scalar for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn lift(&self, d: [f64; 4]) -> Self {
        d[0]
    }
    // Skip the derivative table on the hot path.
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }
    fn atan(&self) -> Self {
        f64::atan(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
}
