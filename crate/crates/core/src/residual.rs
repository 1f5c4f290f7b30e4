//! Residuals of the convective system, its frames and its reductions.
//!
//! Every equation is evaluated literally as a sum of additive terms; the
//! relative residual divides by `1 + max |term|`.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::field::SolutionField;
use crate::numerics::{sample_points, Jet1, Jet2, Point, SampleSpec};
use crate::solutions::SystemParams;
use crate::stream::StreamFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemKind {
    /// Full convective system with an explicit stream function.
    #[serde(rename = "pde_full")]
    PdeFull,
    /// Convection-free system of the rotating frame.
    #[serde(rename = "pde_rotated_free")]
    PdeRotatedFree,
    /// Radially symmetric `(t, r)` system with `(d_i + alpha)/r` drift.
    #[serde(rename = "pde_radial")]
    PdeRadial,
    /// Time-independent convection-free system.
    #[serde(rename = "pde_stationary")]
    PdeStationary,
    /// Scaling reduction in `(omega1, omega2) = (r^2/t, phi + beta ln r)`, slots x, y.
    #[serde(rename = "pde_reduced_3_37")]
    PdeReducedScaling,
    /// Reduction in `(omega, y)`, `omega = t - t0 x`, slots x, y.
    #[serde(rename = "pde_reduced_3_46")]
    PdeReducedTravel,
    /// Reduction in `(omega1, omega2) = (x^2 + y^2, t + t0 arctan(y/x))`, slots x, y.
    #[serde(rename = "pde_reduced_rotational")]
    PdeReducedRotational,
    /// Scalar Fisher equation `u_t = d* u_xx + u (b0 - u)` in slots t, x (first component only).
    #[serde(rename = "pde_fisher")]
    PdeFisher,
    #[serde(rename = "ode_steady_radial")]
    OdeSteadyRadial,
    #[serde(rename = "ode_selfsim")]
    OdeSelfsim,
    #[serde(rename = "ode_planewave")]
    OdePlanewave,
    #[serde(rename = "ode_f")]
    OdeF,
    #[serde(rename = "ode_fisher_wave")]
    OdeFisherWave,
    #[serde(rename = "ode_travel")]
    OdeTravel,
    #[serde(rename = "ode_f_emden")]
    OdeFEmden,
    #[serde(rename = "ode_f_alpha")]
    OdeFAlpha,
    #[serde(rename = "ode_f3")]
    OdeF3,
}

impl SystemKind {
    pub const ALL: [SystemKind; 17] = [
        SystemKind::PdeFull,
        SystemKind::PdeRotatedFree,
        SystemKind::PdeRadial,
        SystemKind::PdeStationary,
        SystemKind::PdeReducedScaling,
        SystemKind::PdeReducedTravel,
        SystemKind::PdeReducedRotational,
        SystemKind::PdeFisher,
        SystemKind::OdeSteadyRadial,
        SystemKind::OdeSelfsim,
        SystemKind::OdePlanewave,
        SystemKind::OdeF,
        SystemKind::OdeFisherWave,
        SystemKind::OdeTravel,
        SystemKind::OdeFEmden,
        SystemKind::OdeFAlpha,
        SystemKind::OdeF3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::PdeFull => "pde_full",
            SystemKind::PdeRotatedFree => "pde_rotated_free",
            SystemKind::PdeRadial => "pde_radial",
            SystemKind::PdeStationary => "pde_stationary",
            SystemKind::PdeReducedScaling => "pde_reduced_3_37",
            SystemKind::PdeReducedTravel => "pde_reduced_3_46",
            SystemKind::PdeReducedRotational => "pde_reduced_rotational",
            SystemKind::PdeFisher => "pde_fisher",
            SystemKind::OdeSteadyRadial => "ode_steady_radial",
            SystemKind::OdeSelfsim => "ode_selfsim",
            SystemKind::OdePlanewave => "ode_planewave",
            SystemKind::OdeF => "ode_f",
            SystemKind::OdeFisherWave => "ode_fisher_wave",
            SystemKind::OdeTravel => "ode_travel",
            SystemKind::OdeFEmden => "ode_f_emden",
            SystemKind::OdeFAlpha => "ode_f_alpha",
            SystemKind::OdeF3 => "ode_f3",
        }
    }

    pub fn parse(s: &str) -> Option<SystemKind> {
        SystemKind::ALL.into_iter().find(|k| k.name() == s.trim())
    }

    pub fn is_ode(self) -> bool {
        self.name().starts_with("ode_")
    }

    /// Number of unknown functions in the kind's equations.
    pub fn components(self) -> usize {
        match self {
            SystemKind::PdeFisher
            | SystemKind::OdeF
            | SystemKind::OdeFisherWave
            | SystemKind::OdeFEmden
            | SystemKind::OdeFAlpha
            | SystemKind::OdeF3 => 1,
            _ => 3,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            SystemKind::PdeFull => "u_t + Psi_y u_x - Psi_x u_y = d1 lap u - k uv, same for v, w gets + k uv",
            SystemKind::PdeRotatedFree => "u_t = d1 lap u - uv, v_t = d2 lap v - uv, w_t = d3 lap w + uv",
            SystemKind::PdeRadial => "u_t = d1 u_rr + (d1 + alpha)/r u_r - uv, ... (x slot is r)",
            SystemKind::PdeStationary => "0 = d1 lap u - uv, 0 = d2 lap v - uv, 0 = d3 lap w + uv",
            SystemKind::PdeReducedScaling => {
                "4 d w1 U_11 + d (1 + beta^2)/w1 U_22 + 4 beta d U_12 + (4d + w1) U_1 -+ UV + U = 0"
            }
            SystemKind::PdeReducedTravel => "d (t0^2 U_ww + U_yy) - U_w -+ UV = 0",
            SystemKind::PdeReducedRotational => "4 d w1 U_11 + d t0^2/w1 U_22 + 4 d U_1 - U_2 -+ UV = 0",
            SystemKind::PdeFisher => "u_t = d* u_xx + u (b0 - u)  (t, x slots)",
            SystemKind::OdeSteadyRadial => "d u'' + (d + alpha)/r u' -+ uv = 0",
            SystemKind::OdeSelfsim => "4 d w U'' + (4d + 2 alpha + w) U' + U (1 - V) = 0, ...",
            SystemKind::OdePlanewave => "d1* U'' = UV, d2* V'' = UV, d3* W'' = -UV, d_i* = d_i (a1^2 + a2^2)",
            SystemKind::OdeF => "d1* d2* U'' = U (d1* U + b21 w + b20)",
            SystemKind::OdeFisherWave => "d* U'' - a1 U' = U (U - b1 exp(a1 z/d*) - b0)",
            SystemKind::OdeTravel => "d_i* U'' - a1 U' = UV, ..., d_i* = d_i (t0^2 a1^2 + a2^2)",
            SystemKind::OdeFEmden => "r f'' + f' - r f^2 + (C0/d2) r f = 0",
            SystemKind::OdeFAlpha => "r f'' + (1 + alpha) f' - r f^2 - (C1 r^-alpha + C0) r f = 0",
            SystemKind::OdeF3 => "third-order equation for f generating u, v of the steady radial system",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Constants used by individual kinds; unused ones are ignored.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct KindConstants {
    pub beta: f64,
    pub t0: f64,
    pub b21: f64,
    pub b20: f64,
    pub b1: f64,
    pub b0: f64,
    pub c: f64,
    pub c0: f64,
    pub c1: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub dstar: f64,
}

/// A system to certify against.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub kind: SystemKind,
    pub params: SystemParams,
    pub consts: KindConstants,
    pub stream: Option<StreamFunction>,
}

impl SystemSpec {
    pub fn new(kind: SystemKind, params: SystemParams) -> Self {
        SystemSpec { kind, params, consts: KindConstants::default(), stream: None }
    }

    pub fn with_stream(mut self, stream: StreamFunction) -> Self {
        self.stream = Some(stream);
        self
    }

    pub fn with_consts(mut self, consts: KindConstants) -> Self {
        self.consts = consts;
        self
    }

    /// Full system with the case 10 stream and `k = 1`.
    pub fn case10(params: SystemParams) -> Self {
        SystemSpec::new(SystemKind::PdeFull, params).with_stream(StreamFunction::case10())
    }

    pub fn label(&self) -> String {
        match &self.stream {
            Some(s) => format!("{}/{}", self.kind, s.label()),
            None => self.kind.to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        let c = &self.consts;
        match self.kind {
            SystemKind::PdeFull if self.stream.is_none() => Err(param("pde_full needs a stream function")),
            SystemKind::PdeFisher | SystemKind::OdeFisherWave if !(c.dstar > 0.0) => {
                Err(param(format!("{} needs dstar > 0", self.kind)))
            }
            SystemKind::OdePlanewave | SystemKind::OdeF if c.alpha1 == 0.0 && c.alpha2 == 0.0 => {
                Err(param(format!("{} needs alpha1^2 + alpha2^2 != 0", self.kind)))
            }
            SystemKind::OdeTravel if c.t0 * c.t0 * c.alpha1 * c.alpha1 + c.alpha2 * c.alpha2 == 0.0 => {
                Err(param("ode_travel needs t0^2 alpha1^2 + alpha2^2 != 0"))
            }
            _ => Ok(()),
        }
    }

    /// Stream validity at the spatial part of `p` (true when no stream is involved).
    pub fn stream_valid(&self, p: Point, margin: f64) -> bool {
        match (&self.stream, self.kind) {
            (Some(s), SystemKind::PdeFull) => s.is_valid(p[1], p[2], margin),
            _ => true,
        }
    }
}

/// One evaluated equation: the residual and its scale `1 + max |term|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqResidual {
    pub value: f64,
    pub scale: f64,
}

impl EqResidual {
    pub fn rel(&self) -> f64 {
        self.value.abs() / self.scale
    }
}

#[derive(Default)]
struct Acc {
    sum: f64,
    max: f64,
}

impl Acc {
    fn add(&mut self, term: f64) -> &mut Self {
        self.sum += term;
        self.max = self.max.max(term.abs());
        self
    }

    fn done(&self) -> EqResidual {
        EqResidual { value: self.sum, scale: 1.0 + self.max }
    }
}

fn eq(terms: &[f64]) -> EqResidual {
    let mut a = Acc::default();
    for &t in terms {
        a.add(t);
    }
    a.done()
}

/// Reaction signs: `-uv` in the first two equations, `+uv` in the third.
pub const REACTION_SIGN: [f64; 3] = [-1.0, -1.0, 1.0];

/// Residuals of a PDE kind given the jets of `(u, v, w)` at `p`.
pub fn pde_residual(spec: &SystemSpec, jets: &[Jet2; 3], p: Point) -> Result<Vec<EqResidual>> {
    let d = spec.params.d();
    let k = spec.params.k;
    let c = &spec.consts;
    let uv = jets[0].v * jets[1].v;
    let mut out = Vec::with_capacity(3);
    match spec.kind {
        SystemKind::PdeFull => {
            let s = spec.stream.as_ref().ok_or_else(|| param("pde_full needs a stream function"))?;
            let sd = s.derivatives(p[1], p[2])?;
            for i in 0..3 {
                let j = &jets[i];
                out.push(eq(&[
                    j.dt(),
                    sd.py * j.dx(),
                    -sd.px * j.dy(),
                    -d[i] * j.dxx(),
                    -d[i] * j.dyy(),
                    -REACTION_SIGN[i] * k * uv,
                ]));
            }
        }
        SystemKind::PdeRotatedFree | SystemKind::PdeStationary => {
            let with_t = spec.kind == SystemKind::PdeRotatedFree;
            for i in 0..3 {
                let j = &jets[i];
                let ut = if with_t { j.dt() } else { 0.0 };
                out.push(eq(&[ut, -d[i] * j.dxx(), -d[i] * j.dyy(), -REACTION_SIGN[i] * k * uv]));
            }
        }
        SystemKind::PdeRadial => {
            let r = p[1];
            if !(r > 0.0) {
                return Err(Error::Domain(format!("radial system needs r > 0, got {r}")));
            }
            let a = spec.params.alpha;
            for i in 0..3 {
                let j = &jets[i];
                out.push(eq(&[j.dt(), -d[i] * j.dxx(), -(d[i] + a) / r * j.dx(), -REACTION_SIGN[i] * k * uv]));
            }
        }
        SystemKind::PdeReducedScaling => {
            let w1 = p[1];
            let b = c.beta;
            for i in 0..3 {
                let j = &jets[i];
                out.push(eq(&[
                    4.0 * d[i] * w1 * j.dxx(),
                    d[i] * (1.0 + b * b) / w1 * j.dyy(),
                    4.0 * b * d[i] * j.dxy(),
                    (4.0 * d[i] + w1) * j.dx(),
                    REACTION_SIGN[i] * uv,
                    j.v,
                ]));
            }
        }
        SystemKind::PdeReducedTravel => {
            for i in 0..3 {
                let j = &jets[i];
                out.push(eq(&[d[i] * c.t0 * c.t0 * j.dxx(), d[i] * j.dyy(), -j.dx(), REACTION_SIGN[i] * uv]));
            }
        }
        SystemKind::PdeReducedRotational => {
            let w1 = p[1];
            for i in 0..3 {
                let j = &jets[i];
                out.push(eq(&[
                    4.0 * d[i] * w1 * j.dxx(),
                    d[i] * c.t0 * c.t0 / w1 * j.dyy(),
                    4.0 * d[i] * j.dx(),
                    -j.dy(),
                    REACTION_SIGN[i] * uv,
                ]));
            }
        }
        SystemKind::PdeFisher => {
            let j = &jets[0];
            out.push(eq(&[j.dt(), -c.dstar * j.dxx(), -c.b0 * j.v, j.v * j.v]));
        }
        other => return Err(param(format!("{other} is an ODE kind"))),
    }
    Ok(out)
}

/// One-variable profile used by ODE kinds: returns the unknown functions as jets.
pub type Profile = Arc<dyn Fn(Jet1) -> Result<Vec<Jet1>> + Send + Sync>;

pub fn profile<F>(f: F) -> Profile
where
    F: Fn(Jet1) -> Result<Vec<Jet1>> + Send + Sync + 'static,
{
    Arc::new(f)
}

/// Residuals of an ODE kind at `z` for the given profile.
pub fn ode_residual(spec: &SystemSpec, prof: &Profile, z: f64) -> Result<Vec<EqResidual>> {
    let f = prof(Jet1::var(z))?;
    let need = spec.kind.components();
    if f.len() < need {
        return Err(param(format!("{} needs {need} profile components, got {}", spec.kind, f.len())));
    }
    let d = spec.params.d();
    let al = spec.params.alpha;
    let k = spec.params.k;
    let c = &spec.consts;
    let val = |i: usize| f[i].d(0);
    let d1 = |i: usize| f[i].d(1);
    let d2 = |i: usize| f[i].d(2);
    let mut out = Vec::with_capacity(need);
    match spec.kind {
        SystemKind::OdeSteadyRadial => {
            if !(z > 0.0) {
                return Err(Error::Domain(format!("steady radial ODE needs r > 0, got {z}")));
            }
            let uv = val(0) * val(1);
            for i in 0..3 {
                out.push(eq(&[d[i] * d2(i), (d[i] + al) / z * d1(i), REACTION_SIGN[i] * k * uv]));
            }
        }
        SystemKind::OdeSelfsim => {
            let (u, v, w) = (val(0), val(1), val(2));
            out.push(eq(&[4.0 * d[0] * z * d2(0), (4.0 * d[0] + 2.0 * al + z) * d1(0), u, -u * v]));
            out.push(eq(&[4.0 * d[1] * z * d2(1), (4.0 * d[1] + 2.0 * al + z) * d1(1), v, -u * v]));
            out.push(eq(&[4.0 * d[2] * z * d2(2), (4.0 * d[2] + 2.0 * al + z) * d1(2), w, u * v]));
        }
        SystemKind::OdePlanewave => {
            let a = c.alpha1 * c.alpha1 + c.alpha2 * c.alpha2;
            let uv = val(0) * val(1);
            for i in 0..3 {
                out.push(eq(&[d[i] * a * d2(i), REACTION_SIGN[i] * uv]));
            }
        }
        SystemKind::OdeTravel => {
            let a = c.t0 * c.t0 * c.alpha1 * c.alpha1 + c.alpha2 * c.alpha2;
            let uv = val(0) * val(1);
            for i in 0..3 {
                out.push(eq(&[d[i] * a * d2(i), -c.alpha1 * d1(i), REACTION_SIGN[i] * uv]));
            }
        }
        SystemKind::OdeF => {
            let a = c.alpha1 * c.alpha1 + c.alpha2 * c.alpha2;
            let (s1, s2) = (d[0] * a, d[1] * a);
            let u = val(0);
            out.push(eq(&[s1 * s2 * d2(0), -s1 * u * u, -c.b21 * z * u, -c.b20 * u]));
        }
        SystemKind::OdeFisherWave => {
            let u = val(0);
            let ex = c.b1 * (c.alpha1 * z / c.dstar).exp();
            out.push(eq(&[c.dstar * d2(0), -c.alpha1 * d1(0), -u * u, u * ex, c.b0 * u]));
        }
        SystemKind::OdeFEmden => {
            let fv = val(0);
            out.push(eq(&[z * d2(0), d1(0), -z * fv * fv, c.c0 / d[1] * z * fv]));
        }
        SystemKind::OdeFAlpha => {
            let fv = val(0);
            let coef = c.c1 * z.powf(-al) + c.c0;
            out.push(eq(&[z * d2(0), (1.0 + al) * d1(0), -z * fv * fv, -coef * z * fv]));
        }
        SystemKind::OdeF3 => {
            let (dd1, dd2) = (d[0], d[1]);
            let cc = c.c;
            let fv = val(0);
            let f1 = d1(0);
            let f3 = f[0].d(3);
            let r = z;
            out.push(eq(&[
                dd1 * dd2 * r * r * f3,
                (3.0 * dd1 * dd2 + dd1 * al + dd2 * al) * r * d2(0),
                -dd1 * dd2 * r * r * r * f1 * f1,
                -al * (dd1 + dd2) * r * r * fv * f1,
                -2.0 * cc * dd1 * dd2 * r * r * f1,
                (al + dd1) * (al + dd2) * f1,
                -al * al * r * fv * fv,
                -al * cc * (dd1 + dd2) * r * fv,
                -cc * cc * dd1 * dd2 * r,
            ]));
        }
        other => return Err(param(format!("{other} is a PDE kind"))),
    }
    Ok(out)
}

/// Differentiation oracle used for a residual evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Jet propagation.
    Ad,
    /// Finite differences with the default steps times `scale` (see [`field_residual_fd`]).
    Fd,
}

/// PDE residual of a field at `p`, with jets from forward-mode propagation.
pub fn field_residual(spec: &SystemSpec, field: &dyn SolutionField, p: Point) -> Result<Vec<EqResidual>> {
    let jets = field.jets(p)?;
    pde_residual(spec, &jets, p)
}

/// PDE residual of a field at `p`, with jets from finite differences.
pub fn field_residual_fd(
    spec: &SystemSpec,
    field: &dyn SolutionField,
    p: Point,
    scale: f64,
) -> Result<Vec<EqResidual>> {
    let jets = field.fd_jets(p, scale)?;
    pde_residual(spec, &jets, p)
}

fn max_rel(r: &[EqResidual]) -> f64 {
    r.iter().map(EqResidual::rel).fold(0.0, f64::max)
}

fn max_abs(r: &[EqResidual]) -> f64 {
    r.iter().map(|e| e.value.abs()).fold(0.0, f64::max)
}

/// Finite-difference cross-check summary.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FdCheck {
    pub points: usize,
    /// Largest relative gap between fd and ad residuals at the default step.
    pub gap_h: f64,
    /// Same at half the step.
    pub gap_h2: f64,
    /// True when both gaps are negligible or the gap shrinks like `h^4`.
    pub consistent: bool,
}

/// Gaps below this are treated as roundoff rather than truncation.
pub const FD_FLOOR: f64 = 1e-6;

impl FdCheck {
    fn judge(gap_h: f64, gap_h2: f64) -> bool {
        // h^4 scaling gives a ratio of 16; 6 leaves room for roundoff
        gap_h.max(gap_h2) <= FD_FLOOR || gap_h2 <= gap_h / 6.0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResidualReport {
    pub schema: u32,
    pub system: String,
    pub solution: String,
    pub seed: u64,
    pub samples: SampleSpec,
    pub mode: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub worst_point: Point,
    pub tolerance: f64,
    pub fd: FdCheck,
    /// Smallest component value seen (reported only; positivity is not required).
    pub min_component: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Certifies a field against a PDE kind at seeded samples: jets everywhere,
/// finite differences on every tenth point.
pub fn certify(spec: &SystemSpec, field: &dyn SolutionField, samples: &SampleSpec, tol: f64) -> Result<ResidualReport> {
    spec.validate()?;
    if spec.kind.is_ode() {
        return Err(param(format!("{} is an ODE kind; use certify_ode", spec.kind)));
    }
    if !(tol > 0.0) {
        return Err(param("tolerance must be positive"));
    }
    let pts = sample_points(samples, |p, m| field.is_valid(p, m) && spec.stream_valid(p, m))?;
    let ad: Vec<(f64, f64, f64)> = pts
        .par_iter()
        .map(|&p| -> Result<(f64, f64, f64)> {
            let jets = field.jets(p)?;
            let r = pde_residual(spec, &jets, p)?;
            let min = jets.iter().map(|j| j.v).fold(f64::INFINITY, f64::min);
            Ok((max_rel(&r), max_abs(&r), min))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0;
    for (i, a) in ad.iter().enumerate() {
        if a.0 > ad[worst].0 {
            worst = i;
        }
    }
    let max_abs_all = ad.iter().map(|a| a.1).fold(0.0, f64::max);
    let min_component = ad.iter().map(|a| a.2).fold(f64::INFINITY, f64::min);

    let sub: Vec<Point> = pts.iter().step_by(10).copied().collect();
    let gaps: Vec<(f64, f64)> = sub
        .par_iter()
        .map(|&p| -> Result<(f64, f64)> {
            let jets = field.jets(p)?;
            let r = pde_residual(spec, &jets, p)?;
            let gap = |s: f64| -> Result<f64> {
                let f = field_residual_fd(spec, field, p, s)?;
                Ok(r.iter().zip(&f).map(|(a, b)| (a.value - b.value).abs() / a.scale).fold(0.0, f64::max))
            };
            Ok((gap(1.0)?, gap(0.5)?))
        })
        .collect::<Result<_>>()?;
    let gap_h = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
    let gap_h2 = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    let fd = FdCheck { points: sub.len(), gap_h, gap_h2, consistent: FdCheck::judge(gap_h, gap_h2) };
    let max_rel_all = ad[worst].0;
    Ok(ResidualReport {
        schema: 1,
        system: spec.label(),
        solution: field.label(),
        seed: samples.seed,
        samples: samples.clone(),
        mode: "both".into(),
        max_abs: max_abs_all,
        max_rel: max_rel_all,
        worst_point: pts[worst],
        tolerance: tol,
        pass: max_rel_all < tol && fd.consistent,
        fd,
        min_component,
    })
}

/// Largest relative ODE residual over `zs`.
pub fn ode_max_rel(spec: &SystemSpec, prof: &Profile, zs: &[f64]) -> Result<f64> {
    spec.validate()?;
    let mut m: f64 = 0.0;
    for &z in zs {
        m = m.max(max_rel(&ode_residual(spec, prof, z)?));
    }
    Ok(m)
}

/// Largest absolute ODE residual over `zs`.
pub fn ode_max_abs(spec: &SystemSpec, prof: &Profile, zs: &[f64]) -> Result<f64> {
    spec.validate()?;
    let mut m: f64 = 0.0;
    for &z in zs {
        m = m.max(max_abs(&ode_residual(spec, prof, z)?));
    }
    Ok(m)
}
