//! Fourth-order central finite-difference jets.
//!
//! First and pure second derivatives use the 5-point stencils; mixed second
//! derivatives use the tensor product of two first-derivative stencils.
//! A full jet in `(t, x, y)` costs 61 evaluations.

use super::jet::{hidx, Jet2};
use crate::error::Result;

const W1: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
const W2: [(f64, f64); 4] = [(-2.0, -1.0), (-1.0, 16.0), (1.0, 16.0), (2.0, -1.0)];

/// Default per-coordinate steps `1e-3 * (1 + |p_k|)`.
pub fn default_steps(p: [f64; 3]) -> [f64; 3] {
    p.map(|c| 1e-3 * (1.0 + c.abs()))
}

/// Jets of an `N`-component function by finite differences with the given steps.
pub fn fd_jets<const N: usize, F>(f: F, p: [f64; 3], steps: [f64; 3]) -> Result<[Jet2; N]>
where
    F: Fn([f64; 3]) -> Result<[f64; N]>,
{
    let at = |offs: [f64; 3]| -> Result<[f64; N]> { f([p[0] + offs[0], p[1] + offs[1], p[2] + offs[2]]) };
    let c = at([0.0; 3])?;
    let mut out = [Jet2::default(); N];
    for n in 0..N {
        out[n].v = c[n];
    }
    for k in 0..3 {
        let h = steps[k];
        let mut g = [0.0; N];
        let mut s = [0.0; N];
        for idx in 0..4 {
            let mut o = [0.0; 3];
            o[k] = W1[idx].0 * h;
            let fv = at(o)?;
            for n in 0..N {
                g[n] += W1[idx].1 * fv[n];
                s[n] += W2[idx].1 * fv[n];
            }
        }
        for n in 0..N {
            out[n].g[k] = g[n] / (12.0 * h);
            out[n].h[hidx(k, k)] = (s[n] - 30.0 * c[n]) / (12.0 * h * h);
        }
    }
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let (hi, hj) = (steps[i], steps[j]);
        let mut acc = [0.0; N];
        for a in W1 {
            for b in W1 {
                let mut o = [0.0; 3];
                o[i] = a.0 * hi;
                o[j] = b.0 * hj;
                let fv = at(o)?;
                for n in 0..N {
                    acc[n] += a.1 * b.1 * fv[n];
                }
            }
        }
        for n in 0..N {
            out[n].h[hidx(i, j)] = acc[n] / (144.0 * hi * hj);
        }
    }
    Ok(out)
}

/// Scalar finite-difference jet with a common step `h` in every coordinate.
pub fn fd_jet<F>(f: F, p: [f64; 3], h: f64) -> Result<Jet2>
where
    F: Fn([f64; 3]) -> Result<f64>,
{
    let [j] = fd_jets(|q| f(q).map(|v| [v]), p, [h; 3])?;
    Ok(j)
}

/// Sixth-order central first derivative of a function of one variable.
pub fn fd_derivative6<F: Fn(f64) -> f64>(f: F, t: f64, h: f64) -> f64 {
    (-f(t - 3.0 * h) + 9.0 * f(t - 2.0 * h) - 45.0 * f(t - h) + 45.0 * f(t + h) - 9.0 * f(t + 2.0 * h) + f(t + 3.0 * h))
        / (60.0 * h)
}
