//! Stream functions of the classification table and the velocity fields they induce.
//!
//! The velocity is `(U1, U2) = (Psi_y, -Psi_x)`, divergence-free by construction.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Result};
use crate::numerics::{fd_jets, Jet2, Scalar};

/// Row of the classification table, or a user-supplied stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    Case7,
    Case8,
    Case9,
    Case10,
    Case11,
    Custom,
}

impl CaseId {
    pub const TABLE: [CaseId; 11] = [
        CaseId::Case1,
        CaseId::Case2,
        CaseId::Case3,
        CaseId::Case4,
        CaseId::Case5,
        CaseId::Case6,
        CaseId::Case7,
        CaseId::Case8,
        CaseId::Case9,
        CaseId::Case10,
        CaseId::Case11,
    ];

    pub fn number(self) -> Option<u8> {
        CaseId::TABLE.iter().position(|c| *c == self).map(|i| i as u8 + 1)
    }

    pub fn from_number(n: u8) -> Option<CaseId> {
        CaseId::TABLE.get((n as usize).checked_sub(1)?).copied()
    }

    pub fn parse(s: &str) -> Option<CaseId> {
        let s = s.trim().to_ascii_lowercase();
        if s == "custom" {
            return Some(CaseId::Custom);
        }
        let digits = s.strip_prefix("case").unwrap_or(&s);
        digits.parse::<u8>().ok().and_then(CaseId::from_number)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number() {
            Some(n) => write!(f, "case{n}"),
            None => write!(f, "custom"),
        }
    }
}

/// The arbitrary function `F` appearing in some rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FChoice {
    #[default]
    Identity,
    Square,
    Sin,
    Ln,
    Exp,
    Poly {
        coeffs: Vec<f64>,
    },
}

impl FChoice {
    pub fn apply<S: Scalar>(&self, a: S) -> Result<S> {
        Ok(match self {
            FChoice::Identity => a,
            FChoice::Square => a * a,
            FChoice::Sin => a.sin(),
            FChoice::Ln => a.try_ln()?,
            FChoice::Exp => a.exp(),
            FChoice::Poly { coeffs } => {
                // Horner, lowest-order coefficient first
                let mut acc = S::cst(0.0);
                for c in coeffs.iter().rev() {
                    acc = acc * a + *c;
                }
                acc
            }
        })
    }

    fn valid(&self, a: f64, margin: f64) -> bool {
        match self {
            FChoice::Ln => a >= margin.max(f64::MIN_POSITIVE),
            _ => a.is_finite(),
        }
    }
}

/// Named constants of a row. Unused ones stay zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct StreamParams {
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Sign in front of the logarithm in case 6.
    pub sign: f64,
}

/// Serializable description of a table row instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamSpec {
    pub case: CaseId,
    #[serde(default)]
    pub params: StreamParams,
    #[serde(rename = "F", default)]
    pub f: FChoice,
}

pub type StreamJetFn = Arc<dyn Fn(Jet2, Jet2) -> Result<Jet2> + Send + Sync>;
pub type ValidityFn = Arc<dyn Fn(f64, f64, f64) -> bool + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Table(StreamSpec),
    Custom {
        label: String,
        psi: StreamJetFn,
        valid: ValidityFn,
    },
    /// `Psi*(X) = scale * Psi(inv (X - shift)) + offset`.
    Affine {
        inner: Box<StreamFunction>,
        inv: [[f64; 2]; 2],
        shift: [f64; 2],
        scale: f64,
        offset: f64,
    },
}

/// A stream function with exact derivatives and a validity predicate.
#[derive(Clone)]
pub struct StreamFunction {
    kind: Kind,
}

impl fmt::Debug for StreamFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Table(s) => write!(f, "StreamFunction({s:?})"),
            Kind::Custom { label, .. } => write!(f, "StreamFunction(custom {label})"),
            Kind::Affine { inner, scale, .. } => write!(f, "StreamFunction(affine x{scale} of {inner:?})"),
        }
    }
}

/// Derivatives of `Psi` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamDerivs {
    pub psi: f64,
    pub px: f64,
    pub py: f64,
    pub pxx: f64,
    pub pxy: f64,
    pub pyy: f64,
}

impl StreamDerivs {
    /// Velocity `(Psi_y, -Psi_x)`.
    pub fn velocity(&self) -> (f64, f64) {
        (self.py, -self.px)
    }
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(param(msg))
    }
}

/// Builds a table row, checking its restrictions.
pub fn make_case(case: CaseId, params: StreamParams, f: FChoice) -> Result<StreamFunction> {
    StreamFunction::from_spec(StreamSpec { case, params, f })
}

impl StreamFunction {
    pub fn from_spec(spec: StreamSpec) -> Result<Self> {
        let p = &spec.params;
        let all_finite = [p.alpha0, p.alpha1, p.alpha2, p.alpha, p.beta, p.gamma, p.sign].iter().all(|v| v.is_finite());
        need(all_finite, "stream parameters must be finite")?;
        match spec.case {
            CaseId::Custom => return Err(param("custom streams are built with StreamFunction::custom")),
            CaseId::Case2 => need(p.alpha1 != 0.0 || p.alpha2 != 0.0, "case2 needs alpha1^2 + alpha2^2 != 0")?,
            CaseId::Case4 => need(p.alpha0 != 0.0, "case4 needs alpha0 != 0")?,
            CaseId::Case5 => {
                need(p.alpha != 0.0 || p.beta != 0.0 || p.gamma != 0.0, "case5 needs alpha^2 + beta^2 + gamma^2 != 0")?
            }
            CaseId::Case6 => {
                need(p.alpha1 != 0.0 || p.alpha2 != 0.0, "case6 needs alpha1^2 + alpha2^2 != 0")?;
                need(p.sign == 1.0 || p.sign == -1.0, "case6 sign must be +1 or -1")?;
            }
            CaseId::Case7 => {
                need(p.alpha0 != 0.0, "case7 needs alpha0 != 0")?;
                need((p.alpha0.abs() - 0.5).abs() > 1e-12, "case7 excludes alpha0 = +-1/2")?;
            }
            CaseId::Case8 => need(p.alpha0 != 0.0, "case8 needs alpha0 != 0")?,
            _ => {}
        }
        Ok(StreamFunction { kind: Kind::Table(spec) })
    }

    /// Case 10, `Psi = x^2 + y^2`.
    pub fn case10() -> Self {
        StreamFunction {
            kind: Kind::Table(StreamSpec {
                case: CaseId::Case10,
                params: StreamParams::default(),
                f: FChoice::Identity,
            }),
        }
    }

    /// The zero stream (case 11 with `alpha1 = alpha2 = 0`).
    pub fn zero() -> Self {
        StreamFunction {
            kind: Kind::Table(StreamSpec {
                case: CaseId::Case11,
                params: StreamParams::default(),
                f: FChoice::Identity,
            }),
        }
    }

    /// `F(x^2 + y^2) + alpha * arctan(x / y)` with `F(s) = s^2`, the stream
    /// under which radial solutions carry over to the plane.
    pub fn radial_swirl(alpha: f64) -> Self {
        let params = StreamParams { alpha, ..Default::default() };
        StreamFunction { kind: Kind::Table(StreamSpec { case: CaseId::Case1, params, f: FChoice::Square }) }
    }

    /// User-supplied stream, given as a jet function of `(x, y)`.
    pub fn custom(label: impl Into<String>, psi: StreamJetFn, valid: Option<ValidityFn>) -> Self {
        let valid = valid.unwrap_or_else(|| Arc::new(|_, _, _| true));
        StreamFunction { kind: Kind::Custom { label: label.into(), psi, valid } }
    }

    /// Stream `scale * Psi(inv (X - shift)) + offset` in new coordinates `X`.
    pub fn affine(&self, inv: [[f64; 2]; 2], shift: [f64; 2], scale: f64, offset: f64) -> Self {
        StreamFunction { kind: Kind::Affine { inner: Box::new(self.clone()), inv, shift, scale, offset } }
    }

    pub fn case_id(&self) -> CaseId {
        match &self.kind {
            Kind::Table(s) => s.case,
            Kind::Custom { .. } => CaseId::Custom,
            Kind::Affine { inner, .. } => inner.case_id(),
        }
    }

    pub fn spec(&self) -> Option<&StreamSpec> {
        match &self.kind {
            Kind::Table(s) => Some(s),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Table(s) => s.case.to_string(),
            Kind::Custom { label, .. } => label.clone(),
            Kind::Affine { inner, .. } => format!("{}*", inner.label()),
        }
    }

    /// `Psi` as a jet, for arbitrary jet arguments `x`, `y`.
    pub fn psi_jet(&self, x: Jet2, y: Jet2) -> Result<Jet2> {
        match &self.kind {
            Kind::Table(spec) => table_psi(spec, x, y),
            Kind::Custom { psi, .. } => psi(x, y),
            Kind::Affine { inner, inv, shift, scale, offset } => {
                let xs = x - shift[0];
                let ys = y - shift[1];
                let xi = xs * inv[0][0] + ys * inv[0][1];
                let yi = xs * inv[1][0] + ys * inv[1][1];
                Ok(inner.psi_jet(xi, yi)? * *scale + *offset)
            }
        }
    }

    /// Jet of `Psi` in `(x, y)` at a point; the time slot is unused.
    pub fn jet_at(&self, x: f64, y: f64) -> Result<Jet2> {
        let [_, xj, yj] = Jet2::seed([0.0, x, y]);
        self.psi_jet(xj, yj)
    }

    pub fn derivatives(&self, x: f64, y: f64) -> Result<StreamDerivs> {
        if !self.is_valid(x, y, 0.0) {
            return Err(domain(format!("stream {} singular at ({x}, {y})", self.label())));
        }
        let j = self.jet_at(x, y)?;
        if !j.is_finite() {
            return Err(domain(format!("stream {} not finite at ({x}, {y})", self.label())));
        }
        Ok(StreamDerivs { psi: j.v, px: j.dx(), py: j.dy(), pxx: j.dxx(), pxy: j.dxy(), pyy: j.dyy() })
    }

    pub fn psi(&self, x: f64, y: f64) -> Result<f64> {
        self.derivatives(x, y).map(|d| d.psi)
    }

    /// `(U1, U2) = (Psi_y, -Psi_x)`.
    pub fn velocity(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        self.derivatives(x, y).map(|d| d.velocity())
    }

    /// `U1_x + U2_y` by finite differences of the exact velocity.
    pub fn divergence_residual(&self, x: f64, y: f64) -> Result<f64> {
        let h = 1e-3 * (1.0 + x.abs().max(y.abs()));
        let [u1, u2] = fd_jets(
            |p| {
                let (a, b) = self.velocity(p[1], p[2])?;
                Ok([a, b])
            },
            [0.0, x, y],
            [h; 3],
        )?;
        Ok((u1.dx() + u2.dy()).abs())
    }

    /// True when `(x, y)` is at least `margin` away from every singular set.
    pub fn is_valid(&self, x: f64, y: f64, margin: f64) -> bool {
        if !(x.is_finite() && y.is_finite()) {
            return false;
        }
        match &self.kind {
            Kind::Table(spec) => table_valid(spec, x, y, margin),
            Kind::Custom { valid, .. } => valid(x, y, margin),
            Kind::Affine { inner, inv, shift, .. } => {
                let xs = x - shift[0];
                let ys = y - shift[1];
                inner.is_valid(inv[0][0] * xs + inv[0][1] * ys, inv[1][0] * xs + inv[1][1] * ys, margin)
            }
        }
    }
}

fn table_psi(spec: &StreamSpec, x: Jet2, y: Jet2) -> Result<Jet2> {
    let p = &spec.params;
    let f = &spec.f;
    let r2 = x * x + y * y;
    let atan_xy = || -> Result<Jet2> { Ok(x.checked_div(y)?.atan()) };
    Ok(match spec.case {
        CaseId::Case1 => f.apply(r2)? + (r2 * p.beta + p.alpha) * atan_xy()?,
        CaseId::Case2 => {
            let s = x * p.alpha1 + y * p.alpha2;
            f.apply(s)? + x * s * p.beta + x * p.gamma
        }
        CaseId::Case3 => {
            let mut v = f.apply(x.checked_div(y)?)?;
            if p.alpha != 0.0 {
                v = v + x.try_ln()? * p.alpha;
            }
            v
        }
        CaseId::Case4 => {
            let th = atan_xy()?;
            f.apply(th + r2.try_ln()? * p.alpha0)? + th * p.alpha
        }
        CaseId::Case5 => {
            let mut v = r2 * p.gamma;
            if p.alpha != 0.0 {
                v = v + atan_xy()? * p.alpha;
            }
            if p.beta != 0.0 {
                v = v + r2.try_ln()? * p.beta;
            }
            v
        }
        CaseId::Case6 => {
            let s = x * p.alpha1 + y * p.alpha2;
            s.try_ln()? * p.sign + s * p.gamma
        }
        CaseId::Case7 => x * x * p.alpha0 + y * y / (4.0 * p.alpha0),
        CaseId::Case8 => x * x * p.alpha0 - y * y / (4.0 * p.alpha0),
        CaseId::Case9 => x * x + y * p.alpha,
        CaseId::Case10 => r2,
        CaseId::Case11 => x * p.alpha1 + y * p.alpha2,
        CaseId::Custom => unreachable!("custom streams use Kind::Custom"),
    })
}

fn table_valid(spec: &StreamSpec, x: f64, y: f64, margin: f64) -> bool {
    let p = &spec.params;
    let f = &spec.f;
    let m = margin.max(f64::MIN_POSITIVE);
    let r2 = x * x + y * y;
    match spec.case {
        CaseId::Case1 => y.abs() >= m && f.valid(r2, margin),
        CaseId::Case2 => f.valid(p.alpha1 * x + p.alpha2 * y, margin),
        CaseId::Case3 => y.abs() >= m && (p.alpha == 0.0 || x >= m) && f.valid(x / y, margin),
        CaseId::Case4 => y.abs() >= m && r2.sqrt() >= m && f.valid((x / y).atan() + p.alpha0 * r2.ln(), margin),
        CaseId::Case5 => (p.alpha == 0.0 || y.abs() >= m) && (p.beta == 0.0 || r2.sqrt() >= m),
        CaseId::Case6 => p.alpha1 * x + p.alpha2 * y >= m,
        _ => true,
    }
}
