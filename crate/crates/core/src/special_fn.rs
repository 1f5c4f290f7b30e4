//! Weierstrass elliptic function on the real axis.
//!
//! Evaluation reduces `z` modulo the real period (when one exists), halves it
//! until it falls well inside the disc of convergence of the Laurent series,
//! sums 40 terms there and climbs back with the duplication formulas.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of Laurent coefficients `c_2 .. c_{N+1}` kept.
const N_COEFFS: usize = 40;
/// Points closer than this to a lattice point are rejected as poles.
pub const POLE_MARGIN: f64 = 1e-6;
const MAX_HALVINGS: u32 = 40;

/// Invariants `(g2, g3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WpParams {
    pub g2: f64,
    pub g3: f64,
}

impl WpParams {
    pub fn new(g2: f64, g3: f64) -> Self {
        WpParams { g2, g3 }
    }

    pub fn discriminant(&self) -> f64 {
        self.g2.powi(3) - 27.0 * self.g3 * self.g3
    }
}

/// Precomputed series data and real period for one pair of invariants.
#[derive(Debug, Clone)]
pub struct Weierstrass {
    params: WpParams,
    /// `coeffs[k]` multiplies `z^(2k+2)`, i.e. holds `c_{k+2}`.
    coeffs: Vec<f64>,
    /// Series is summed only for `|z| <= radius`.
    radius: f64,
    half_period: Option<f64>,
}

impl Weierstrass {
    pub fn new(params: WpParams) -> Result<Self> {
        if !(params.g2.is_finite() && params.g3.is_finite()) {
            return Err(Error::Parameter("non-finite invariants".into()));
        }
        let mut c = vec![0.0; N_COEFFS + 2];
        c[2] = params.g2 / 20.0;
        c[3] = params.g3 / 28.0;
        for k in 4..N_COEFFS + 2 {
            let mut s = 0.0;
            for m in 2..=k - 2 {
                s += c[m] * c[k - m];
            }
            c[k] = 3.0 * s / (((2 * k + 1) * (k - 3)) as f64);
        }
        // Root test on the tail: |c_k|^(1/(2k)) ~ 1/R.
        let mut inv_r: f64 = 0.0;
        for (k, ck) in c.iter().enumerate().skip(N_COEFFS / 2) {
            if *ck != 0.0 {
                inv_r = inv_r.max(ck.abs().powf(1.0 / (2.0 * k as f64)));
            }
        }
        let radius = if inv_r > 0.0 { 0.5 / inv_r } else { f64::INFINITY };
        let mut w = Weierstrass { params, coeffs: c[2..].to_vec(), radius, half_period: None };
        if params.discriminant() != 0.0 {
            w.half_period = w.find_half_period();
        }
        Ok(w)
    }

    pub fn params(&self) -> WpParams {
        self.params
    }

    /// Real half-period `omega1`, if the lattice has a real period.
    pub fn half_period(&self) -> Option<f64> {
        self.half_period
    }

    /// Radius inside which the Laurent series is summed directly.
    pub fn series_radius(&self) -> f64 {
        self.radius
    }

    fn series(&self, z: f64) -> Result<(f64, f64)> {
        let z2 = z * z;
        let mut p = 1.0 / z2;
        let mut q = -2.0 / (z2 * z);
        let mut zp = z2; // z^(2k+2) for k = 0
        let mut last = 0.0;
        for (k, ck) in self.coeffs.iter().enumerate() {
            let term = ck * zp;
            p += term;
            q += (2 * k + 2) as f64 * term / z;
            last = term;
            zp *= z2;
        }
        if last.abs() > 1e-16 * p.abs() {
            return Err(Error::Precision(format!("series tail too large at z = {z}")));
        }
        Ok((p, q))
    }

    /// `(wp, wp')` without period reduction.
    fn unreduced(&self, z: f64) -> Result<(f64, f64)> {
        let mut k = 0u32;
        let mut zs = z;
        while zs.abs() > self.radius {
            zs *= 0.5;
            k += 1;
            if k > MAX_HALVINGS {
                return Err(Error::Precision(format!("argument {z} too large")));
            }
        }
        let (mut p, mut q) = self.series(zs)?;
        let half_g2 = 0.5 * self.params.g2;
        for step in 0..k {
            if q == 0.0 || !p.is_finite() || (step > 0 && p.abs() > 1e12) {
                return Err(Error::Pole { z });
            }
            let r = 6.0 * p * p - half_g2;
            let q2 = q * q;
            let p_new = -2.0 * p + r * r / (4.0 * q2);
            let q_new = -q + 3.0 * p * r / q - r * r * r / (4.0 * q2 * q);
            p = p_new;
            q = q_new;
        }
        if !(p.is_finite() && q.is_finite()) {
            return Err(Error::Pole { z });
        }
        Ok((p, q))
    }

    fn find_half_period(&self) -> Option<f64> {
        let mut lo = if self.radius.is_finite() { 0.5 * self.radius } else { 1.0 };
        let (_, q0) = self.unreduced(lo).ok()?;
        if q0 >= 0.0 {
            return None;
        }
        let mut hi = lo;
        for _ in 0..200 {
            hi = lo * 1.5;
            match self.unreduced(hi) {
                Ok((_, q)) if q >= 0.0 => break,
                Ok(_) => lo = hi,
                Err(_) => return None,
            }
            if hi > 1e8 {
                return None;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            match self.unreduced(mid) {
                Ok((_, q)) if q >= 0.0 => hi = mid,
                Ok(_) => lo = mid,
                Err(_) => return None,
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// Reduces `z` to the fundamental real interval and rejects poles.
    fn reduce(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("non-finite argument {z}")));
        }
        let zr = match self.half_period {
            Some(w) => {
                let period = 2.0 * w;
                z - period * (z / period).round()
            }
            None => z,
        };
        if zr.abs() < POLE_MARGIN {
            return Err(Error::Pole { z });
        }
        Ok(zr)
    }

    /// `(wp(z), wp'(z))`.
    pub fn eval(&self, z: f64) -> Result<(f64, f64)> {
        let zr = self.reduce(z)?;
        self.unreduced(zr).map_err(|e| match e {
            Error::Pole { .. } => Error::Pole { z },
            other => other,
        })
    }

    pub fn wp(&self, z: f64) -> Result<f64> {
        self.eval(z).map(|r| r.0)
    }

    pub fn wp_prime(&self, z: f64) -> Result<f64> {
        self.eval(z).map(|r| r.1)
    }

    /// `[wp, wp', wp'', wp''']` for jet composition, using
    /// `wp'' = 6 wp^2 - g2/2` and `wp''' = 12 wp wp'`.
    pub fn derivs(&self, z: f64) -> Result<[f64; 4]> {
        let (p, q) = self.eval(z)?;
        Ok([p, q, 6.0 * p * p - 0.5 * self.params.g2, 12.0 * p * q])
    }

    /// Relative defect in `wp'^2 = 4 wp^3 - g2 wp - g3`.
    pub fn invariant_residual(&self, z: f64) -> Result<f64> {
        let (p, q) = self.eval(z)?;
        let rhs = 4.0 * p * p * p - self.params.g2 * p - self.params.g3;
        Ok((q * q - rhs).abs() / (1.0 + (4.0 * p * p * p).abs()))
    }

    /// Distance from `z` to the nearest real lattice point.
    pub fn pole_distance(&self, z: f64) -> f64 {
        match self.half_period {
            Some(w) => {
                let period = 2.0 * w;
                (z - period * (z / period).round()).abs()
            }
            None => z.abs(),
        }
    }
}

type Cache = Mutex<HashMap<(u64, u64), Arc<Weierstrass>>>;

/// Shared immutable data for a parameter pair, built on first use.
pub fn weierstrass(params: WpParams) -> Result<Arc<Weierstrass>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (params.g2.to_bits(), params.g3.to_bits());
    if let Some(w) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(w.clone());
    }
    let w = Arc::new(Weierstrass::new(params)?);
    cache.lock().expect("cache poisoned").insert(key, w.clone());
    Ok(w)
}

pub fn wp(z: f64, params: WpParams) -> Result<f64> {
    weierstrass(params)?.wp(z)
}

pub fn wp_prime(z: f64, params: WpParams) -> Result<f64> {
    weierstrass(params)?.wp_prime(z)
}

pub fn wp_invariant_residual(z: f64, params: WpParams) -> Result<f64> {
    weierstrass(params)?.invariant_residual(z)
}

/// Parameter pairs of the standard invariant sweep.
pub const SWEEP_PAIRS: [(f64, f64); 10] = [
    (0.0, -2.0),
    (0.0, -1.0),
    (0.0, 1.0),
    (0.0, 2.0),
    (0.0, 5.0),
    (1.0, -2.0),
    (1.0, -1.0),
    (1.0, 1.0),
    (1.0, 2.0),
    (1.0, 5.0),
];

/// Largest invariant residual at `n` seeded arguments of `[-3, 3]` kept
/// `margin` away from the real lattice.
pub fn invariant_sweep(params: WpParams, n: usize, seed: u64, margin: f64) -> Result<f64> {
    let w = weierstrass(params)?;
    let mut rng = crate::numerics::sampling::rng_from_seed(seed);
    let mut worst: f64 = 0.0;
    let mut got = 0;
    let mut tries = 0;
    while got < n {
        tries += 1;
        if tries > 100 * n {
            return Err(Error::Sampling(format!("only {got} of {n} valid arguments for {params:?}")));
        }
        let z = -3.0 + 6.0 * crate::numerics::sampling::unit_f64(&mut rng);
        if w.pole_distance(z) < margin {
            continue;
        }
        worst = worst.max(w.invariant_residual(z)?);
        got += 1;
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Real half-periods and values computed independently by quadrature of
    // dz = dp / sqrt(4p^3 - g3) in extended precision.
    const OMEGA_G3_1: f64 = 1.529954037057192671749748265;
    const WP_07: f64 = 2.04939409868258494086;
    const WP_12: f64 = 0.769112523422239360251;

    fn p(g2: f64, g3: f64) -> WpParams {
        WpParams::new(g2, g3)
    }

    #[test]
    fn reference_values() {
        assert!((wp(0.7, p(0.0, 1.0)).unwrap() - WP_07).abs() < 1e-12);
        assert!((wp(1.2, p(0.0, 1.0)).unwrap() - WP_12).abs() < 1e-12);
        let w = weierstrass(p(0.0, 1.0)).unwrap();
        assert!((w.half_period().unwrap() - OMEGA_G3_1).abs() < 1e-12);
    }

    #[test]
    fn half_periods_of_other_lattices() {
        let cases = [(2.0, 1.36303409042789), (5.0, 1.16999332275), (-1.0, 2.64995812542747)];
        for (g3, omega) in cases {
            let w = Weierstrass::new(p(0.0, g3)).unwrap();
            assert!((w.half_period().unwrap() - omega).abs() < 1e-9, "g3 = {g3}");
        }
    }

    #[test]
    fn near_origin_matches_laurent_leading_term() {
        let v = wp(0.1, p(0.0, 1.0)).unwrap();
        assert!((v - 100.00000357142857).abs() < 1e-7);
    }

    #[test]
    fn periodicity_and_parity() {
        let w = weierstrass(p(0.0, 1.0)).unwrap();
        let period = 2.0 * w.half_period().unwrap();
        for z in [0.3, 0.9, 1.4, 2.2] {
            let (a, da) = w.eval(z).unwrap();
            let (b, db) = w.eval(z + period).unwrap();
            let (c, dc) = w.eval(-z).unwrap();
            assert!((a - b).abs() < 1e-11 * (1.0 + a.abs()));
            assert!((da - db).abs() < 1e-10 * (1.0 + da.abs()));
            assert!((a - c).abs() < 1e-13 * (1.0 + a.abs()));
            assert!((da + dc).abs() < 1e-13 * (1.0 + da.abs()));
        }
    }

    #[test]
    fn poles_are_rejected() {
        let w = weierstrass(p(0.0, 1.0)).unwrap();
        assert!(matches!(w.eval(0.0), Err(Error::Pole { .. })));
        let period = 2.0 * w.half_period().unwrap();
        assert!(matches!(w.eval(period), Err(Error::Pole { .. })));
        assert!(matches!(w.eval(-3.0 * period + 1e-8), Err(Error::Pole { .. })));
    }

    #[test]
    fn degenerate_lattice_is_rational() {
        // g2 = g3 = 0 gives 1/z^2 exactly
        let w = Weierstrass::new(p(0.0, 0.0)).unwrap();
        assert!(w.half_period().is_none());
        let (v, d) = w.eval(2.5).unwrap();
        assert!((v - 0.16).abs() < 1e-15 && (d + 2.0 / 15.625).abs() < 1e-15);
    }

    #[test]
    fn homogeneity() {
        // wp(l z; g2 / l^4, g3 / l^6) = wp(z; g2, g3) / l^2
        let l = 2.0;
        for (g2, g3) in [(0.0, 1.0), (1.5, -0.7), (3.0, 0.4)] {
            for z in [0.35, 0.8] {
                let a = wp(l * z, p(g2 / l.powi(4), g3 / l.powi(6))).unwrap();
                let b = wp(z, p(g2, g3)).unwrap() / (l * l);
                assert!((a - b).abs() < 1e-11 * (1.0 + b.abs()), "{g2} {g3} {z}");
            }
        }
    }
}
