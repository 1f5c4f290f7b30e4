//! Classical fourth-order Runge-Kutta with step doubling.

use crate::error::{Error, Result};

const MAX_STEPS: usize = 1 << 20;

/// Result of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Rk4Outcome {
    pub y: Vec<f64>,
    pub steps: usize,
}

fn check_finite(y: &[f64]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Integration("state became non-finite".into()))
    }
}

/// Integrates `y' = rhs(s, y)` from `s0` to `s1` with `steps` equal steps.
pub fn rk4_fixed<F>(rhs: F, y0: &[f64], s0: f64, s1: f64, steps: usize) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let n = y0.len();
    let steps = steps.max(1);
    let h = (s1 - s0) / steps as f64;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for i in 0..steps {
        let s = s0 + i as f64 * h;
        rhs(s, &y, &mut k1)?;
        for m in 0..n {
            tmp[m] = y[m] + 0.5 * h * k1[m];
        }
        rhs(s + 0.5 * h, &tmp, &mut k2)?;
        for m in 0..n {
            tmp[m] = y[m] + 0.5 * h * k2[m];
        }
        rhs(s + 0.5 * h, &tmp, &mut k3)?;
        for m in 0..n {
            tmp[m] = y[m] + h * k3[m];
        }
        rhs(s + h, &tmp, &mut k4)?;
        for m in 0..n {
            y[m] += h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
        }
    }
    check_finite(&y)?;
    Ok(y)
}

/// Doubles the step count until two successive answers agree to `tol`
/// (absolute, scaled by `1 + |y|`), returning the finer one.
pub fn rk4_integrate<F>(rhs: F, y0: &[f64], s0: f64, s1: f64, tol: f64) -> Result<Rk4Outcome>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if s0 == s1 {
        return Ok(Rk4Outcome { y: y0.to_vec(), steps: 0 });
    }
    let mut steps = 4;
    let mut prev = rk4_fixed(&rhs, y0, s0, s1, steps)?;
    loop {
        steps *= 2;
        if steps > MAX_STEPS {
            return Err(Error::Integration(format!("no convergence to {tol:e} within {MAX_STEPS} steps")));
        }
        let next = rk4_fixed(&rhs, y0, s0, s1, steps)?;
        let diff = prev.iter().zip(&next).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())).fold(0.0, f64::max);
        if diff < tol {
            return Ok(Rk4Outcome { y: next, steps });
        }
        prev = next;
    }
}
