//! Closed-form solutions, evaluable as plain values or as jets.
//!
//! Each entry is stored in the frame where its formula is simplest:
//! plane waves in the rotating frame, radially symmetric solutions in `(t, r)`.
//! [`ExactSolution::to_lab_frame`] composes with the frame change.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Result};
use crate::field::{lab_to_rotated, SolutionField};
use crate::numerics::{Jet2, Point, SampleSpec, Scalar};
use crate::residual::{SystemKind, SystemSpec};
use crate::special_fn::{weierstrass, Weierstrass, WpParams};
use crate::stream::StreamFunction;

/// Default distance kept from singular sets, in phase or radius units.
pub const DEFAULT_MARGIN: f64 = 1e-2;

/// Diffusivities, kinetic constant and radial convection strength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    #[serde(default = "one")]
    pub k: f64,
    #[serde(default)]
    pub alpha: f64,
}

fn one() -> f64 {
    1.0
}

impl SystemParams {
    pub fn new(d1: f64, d2: f64, d3: f64) -> Self {
        SystemParams { d1, d2, d3, k: 1.0, alpha: 0.0 }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (n, v) in [("d1", self.d1), ("d2", self.d2), ("d3", self.d3), ("k", self.k)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(param(format!("{n} must be positive, got {v}")));
            }
        }
        if !self.alpha.is_finite() {
            return Err(param("alpha must be finite"));
        }
        Ok(())
    }

    pub fn d(&self) -> [f64; 3] {
        [self.d1, self.d2, self.d3]
    }
}

/// Free constants of a solution. Unused ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Constants {
    pub alpha1: f64,
    pub alpha2: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub beta: f64,
    pub n: u32,
}

impl Default for Constants {
    fn default() -> Self {
        Constants { alpha1: 0.0, alpha2: 0.0, c0: 0.0, c1: 0.0, c2: 0.0, c3: 0.0, c4: 0.0, c5: 0.0, beta: 0.0, n: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolutionId {
    #[serde(rename = "S_WEIER")]
    Weier,
    #[serde(rename = "S_RATIONAL")]
    Rational,
    #[serde(rename = "S_SEC")]
    Sec,
    #[serde(rename = "S_TANH")]
    Tanh,
    #[serde(rename = "S_COTH")]
    Coth,
    #[serde(rename = "S_STEADY_RAT")]
    SteadyRat,
    #[serde(rename = "S_STEADY_SEC")]
    SteadySec,
    #[serde(rename = "S_SS_A")]
    SsA,
    #[serde(rename = "S_SS_B")]
    SsB,
    #[serde(rename = "S_SS_N")]
    SsN,
    #[serde(rename = "S_ZERO")]
    Zero,
    #[serde(rename = "S_UV0")]
    Uv0,
}

impl SolutionId {
    pub const ALL: [SolutionId; 12] = [
        SolutionId::Weier,
        SolutionId::Rational,
        SolutionId::Sec,
        SolutionId::Tanh,
        SolutionId::Coth,
        SolutionId::SteadyRat,
        SolutionId::SteadySec,
        SolutionId::SsA,
        SolutionId::SsB,
        SolutionId::SsN,
        SolutionId::Zero,
        SolutionId::Uv0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolutionId::Weier => "S_WEIER",
            SolutionId::Rational => "S_RATIONAL",
            SolutionId::Sec => "S_SEC",
            SolutionId::Tanh => "S_TANH",
            SolutionId::Coth => "S_COTH",
            SolutionId::SteadyRat => "S_STEADY_RAT",
            SolutionId::SteadySec => "S_STEADY_SEC",
            SolutionId::SsA => "S_SS_A",
            SolutionId::SsB => "S_SS_B",
            SolutionId::SsN => "S_SS_N",
            SolutionId::Zero => "S_ZERO",
            SolutionId::Uv0 => "S_UV0",
        }
    }

    pub fn parse(s: &str) -> Option<SolutionId> {
        SolutionId::ALL.into_iter().find(|id| id.name().eq_ignore_ascii_case(s.trim()))
    }

    fn family(self) -> Family {
        match self {
            SolutionId::Weier | SolutionId::Rational | SolutionId::Sec | SolutionId::Tanh | SolutionId::Coth => {
                Family::PlaneWave
            }
            SolutionId::SteadyRat | SolutionId::SteadySec | SolutionId::SsA | SolutionId::SsB | SolutionId::SsN => {
                Family::Radial
            }
            SolutionId::Zero | SolutionId::Uv0 => Family::Trivial,
        }
    }

    pub fn native_frame(self) -> Frame {
        match self.family() {
            Family::PlaneWave => Frame::Rotated,
            Family::Radial => Frame::Radial,
            Family::Trivial => Frame::Lab,
        }
    }

    pub fn is_steady(self) -> bool {
        matches!(self, SolutionId::SteadyRat | SolutionId::SteadySec | SolutionId::Zero | SolutionId::Uv0)
    }
}

impl fmt::Display for SolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    PlaneWave,
    Radial,
    Trivial,
}

/// Coordinates in which a solution is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// `(t, x, y)` of the convective system.
    Lab,
    /// `(t, x*, y*)` of the rotating frame, where case 10 convection disappears.
    Rotated,
    /// `(t, r, ignored)`.
    Radial,
}

/// Branch of the steady rational solution, fixed by `alpha` and `d3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SteadyBranch {
    Generic,
    TwiceD3,
    Zero,
}

/// Catalog metadata for one entry.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub id: SolutionId,
    pub native_frame: Frame,
    pub target_system: &'static str,
    pub side_conditions: Vec<&'static str>,
    pub singular_sets: Vec<&'static str>,
}

pub fn list_solutions() -> Vec<CatalogEntry> {
    use SolutionId::*;
    SolutionId::ALL
        .into_iter()
        .map(|id| {
            let (target, conds, sing): (&str, Vec<&str>, Vec<&str>) = match id {
                Weier => (
                    "pde_full/case10",
                    vec!["g2=0", "g3=C2", "k=1"],
                    vec!["lattice points of the phase alpha1 x* + alpha2 y* + C1"],
                ),
                Rational => ("pde_full/case10", vec!["k=1"], vec!["phase alpha1 x* + alpha2 y* + C1 = 0"]),
                Sec => {
                    ("pde_full/case10", vec!["k=1"], vec!["C1 + C2 (alpha1 x* + alpha2 y*) at odd multiples of pi/2"])
                }
                Tanh => ("pde_full/case10", vec!["d1=d2=d3=d", "C1 = 10d(alpha1^2+alpha2^2)", "k=1"], vec![]),
                Coth => (
                    "pde_full/case10",
                    vec!["d1=d2=d3=d", "C1 = 10d(alpha1^2+alpha2^2)", "k=1"],
                    vec!["C1 t + alpha1 x* + alpha2 y* = 0"],
                ),
                SteadyRat => {
                    ("pde_radial", vec!["k=1", "w-branch by alpha(alpha-2d3) != 0, alpha=2d3, alpha=0"], vec!["r=0"])
                }
                SteadySec => (
                    "pde_radial",
                    vec!["d1=d2=d3=1", "alpha=-1", "beta != 0", "k=1"],
                    vec!["r=0", "beta r at odd multiples of pi/2"],
                ),
                SsA => ("pde_radial", vec!["alpha=0", "C1=d1 d2/d3 in the W profile", "k=1"], vec!["r=0", "t<=0"]),
                SsB => ("pde_radial", vec!["alpha=d1+d2", "2d3 != d1+d2", "k=1"], vec!["r=0", "t<=0"]),
                SsN => ("pde_radial", vec!["alpha=2 n d3", "n>=2 integer", "k=1"], vec!["r=0", "t<=0"]),
                Zero => ("any", vec![], vec![]),
                Uv0 => ("pde_full/any stream", vec!["u=C1, v=0, w=C2"], vec![]),
            };
            CatalogEntry {
                id,
                native_frame: id.native_frame(),
                target_system: target,
                side_conditions: conds,
                singular_sets: sing,
            }
        })
        .collect()
}

/// Every catalog default plus the remaining steady rational branches and
/// further self-similar orders.
pub fn catalog_variants() -> Vec<ExactSolution> {
    let mut v: Vec<ExactSolution> = SolutionId::ALL.iter().map(|&id| ExactSolution::default_for(id)).collect();
    let d = SystemParams::new(1.0, 2.0, 3.0);
    let c = Constants { c0: 1.0, c1: 0.5, ..Default::default() };
    let extra = [
        (SolutionId::SteadyRat, d.with_alpha(6.0), c),
        (SolutionId::SteadyRat, d, c),
        (
            SolutionId::SsN,
            SystemParams::new(1.0, 2.0, 0.5).with_alpha(3.0),
            Constants { c1: 0.3, c2: 1.0, n: 3, ..Default::default() },
        ),
        (
            SolutionId::SsN,
            SystemParams::new(1.0, 2.0, 0.4).with_alpha(4.0),
            Constants { c1: -0.2, c2: 0.5, n: 5, ..Default::default() },
        ),
    ];
    for (id, p, c) in extra {
        v.push(ExactSolution::new(id, p, c).expect("variant constants satisfy their side conditions"));
    }
    v
}

/// An exact solution bound to parameters, constants and a frame.
#[derive(Clone)]
pub struct ExactSolution {
    pub id: SolutionId,
    pub params: SystemParams,
    pub consts: Constants,
    pub frame: Frame,
    wp: Option<Arc<Weierstrass>>,
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExactSolution")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("consts", &self.consts)
            .field("frame", &self.frame)
            .finish()
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

fn need(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(param(msg))
    }
}

impl ExactSolution {
    /// Builds a solution in its native frame after checking side conditions.
    pub fn new(id: SolutionId, params: SystemParams, consts: Constants) -> Result<Self> {
        params.validate()?;
        let c = &consts;
        let finite = [c.alpha1, c.alpha2, c.c0, c.c1, c.c2, c.c3, c.c4, c.c5, c.beta].iter().all(|v| v.is_finite());
        need(finite, "constants must be finite")?;
        let p = &params;
        let a_sq = c.alpha1 * c.alpha1 + c.alpha2 * c.alpha2;
        let mut wp = None;
        match id {
            SolutionId::Weier | SolutionId::Rational | SolutionId::Sec | SolutionId::Tanh | SolutionId::Coth => {
                need(p.k == 1.0, format!("{id} solves the k=1 system"))?;
                need(a_sq > 0.0, format!("{id} needs alpha1^2 + alpha2^2 != 0"))?;
                if id == SolutionId::Weier {
                    wp = Some(weierstrass(WpParams::new(0.0, c.c2))?);
                }
                if matches!(id, SolutionId::Tanh | SolutionId::Coth) {
                    need(p.d1 == p.d2 && p.d2 == p.d3, format!("{id} requires d1 = d2 = d3"))?;
                    let want = 10.0 * p.d1 * a_sq;
                    need(
                        close(c.c1, want),
                        format!("{id} side condition C1 = 10d(alpha1^2+alpha2^2) = {want} violated (C1 = {})", c.c1),
                    )?;
                }
            }
            SolutionId::SteadyRat => need(p.k == 1.0, "S_STEADY_RAT solves the k=1 system")?,
            SolutionId::SteadySec => {
                need(p.k == 1.0, "S_STEADY_SEC solves the k=1 system")?;
                need(p.d1 == 1.0 && p.d2 == 1.0 && p.d3 == 1.0, "S_STEADY_SEC requires d1 = d2 = d3 = 1")?;
                need(p.alpha == -1.0, "S_STEADY_SEC requires alpha = -1")?;
                need(c.beta != 0.0, "S_STEADY_SEC requires beta != 0")?;
            }
            SolutionId::SsA => {
                need(p.k == 1.0, "S_SS_A solves the k=1 system")?;
                need(p.alpha == 0.0, "S_SS_A requires alpha = 0")?;
            }
            SolutionId::SsB => {
                need(p.k == 1.0, "S_SS_B solves the k=1 system")?;
                need(close(p.alpha, p.d1 + p.d2), "S_SS_B requires alpha = d1 + d2")?;
                need(!close(2.0 * p.d3, p.d1 + p.d2), "S_SS_B requires 2 d3 != d1 + d2")?;
            }
            SolutionId::SsN => {
                need(p.k == 1.0, "S_SS_N solves the k=1 system")?;
                need(c.n >= 2, "S_SS_N requires n >= 2")?;
                need(close(p.alpha, 2.0 * c.n as f64 * p.d3), "S_SS_N requires alpha = 2 n d3")?;
            }
            SolutionId::Zero | SolutionId::Uv0 => {}
        }
        Ok(ExactSolution { id, params, consts, frame: id.native_frame(), wp })
    }

    /// Catalog defaults (figure constants where the text supplies them).
    pub fn default_for(id: SolutionId) -> Self {
        let fig = Constants { alpha1: 0.5, alpha2: 0.25, c1: 2.0, c3: -15.0, c4: 55.0, ..Default::default() };
        let d123 = SystemParams::new(1.0, 2.0, 3.0);
        let (params, consts) = match id {
            SolutionId::Weier => (d123, Constants { c1: 1.0, c2: 1.0, ..fig }),
            SolutionId::Rational => (d123, fig),
            SolutionId::Sec => (d123, Constants { c1: 0.3, c2: 0.5, c3: 1.0, c4: 2.0, ..fig }),
            SolutionId::Tanh | SolutionId::Coth => {
                let a_sq: f64 = 0.5 * 0.5 + 0.25 * 0.25;
                (SystemParams::new(1.0, 1.0, 1.0), Constants { c1: 10.0 * a_sq, c2: 1.0, c3: 0.1, ..fig })
            }
            SolutionId::SteadyRat => (d123.with_alpha(0.5), Constants { c0: 1.0, c1: 0.5, ..Default::default() }),
            SolutionId::SteadySec => (
                SystemParams::new(1.0, 1.0, 1.0).with_alpha(-1.0),
                Constants { beta: 0.5, c4: 2.0, c5: 0.3, ..Default::default() },
            ),
            SolutionId::SsA => (d123, Constants { c2: 1.0, ..Default::default() }),
            SolutionId::SsB => (d123.with_alpha(3.0), Constants { c2: 1.0, ..Default::default() }),
            SolutionId::SsN => (
                SystemParams::new(1.0, 2.0, 0.5).with_alpha(2.0),
                Constants { c1: 0.3, c2: 1.0, n: 2, ..Default::default() },
            ),
            SolutionId::Zero => (d123, Constants::default()),
            SolutionId::Uv0 => (d123, Constants { c1: 2.0, c2: 3.0, ..Default::default() }),
        };
        ExactSolution::new(id, params, consts).expect("catalog defaults satisfy their side conditions")
    }

    pub fn steady_branch(&self) -> SteadyBranch {
        let a = self.params.alpha;
        if a == 0.0 {
            SteadyBranch::Zero
        } else if close(a, 2.0 * self.params.d3) {
            SteadyBranch::TwiceD3
        } else {
            SteadyBranch::Generic
        }
    }

    pub fn weierstrass(&self) -> Option<&Arc<Weierstrass>> {
        self.wp.as_ref()
    }

    /// Same solution in the lab frame of the convective system.
    pub fn to_lab_frame(&self) -> Result<Self> {
        let mut s = self.clone();
        if self.frame == Frame::Radial && self.id == SolutionId::SteadyRat && self.steady_branch() == SteadyBranch::Zero
        {
            // the lab display writes C1 ln(x^2 + y^2) where the radial form has C1 ln r
            s.consts.c1 *= 0.5;
        }
        s.frame = Frame::Lab;
        Ok(s)
    }

    /// Lab-frame plane wave expressed in the rotating frame.
    pub fn to_rotated_frame(&self) -> Result<Self> {
        match (self.id.family(), self.frame) {
            (Family::PlaneWave, _) | (Family::Trivial, _) => {
                let mut s = self.clone();
                s.frame = Frame::Rotated;
                Ok(s)
            }
            _ => Err(param(format!("{} has no rotating-frame form", self.id))),
        }
    }

    /// Rebinds the frame without changing any constant (used for the printed
    /// lab display of the steady rational branch).
    pub fn with_frame(mut self, frame: Frame) -> Result<Self> {
        let ok = match self.id.family() {
            Family::PlaneWave => frame != Frame::Radial,
            Family::Radial => frame != Frame::Rotated,
            Family::Trivial => true,
        };
        need(ok, format!("{} cannot be expressed in frame {frame:?}", self.id))?;
        self.frame = frame;
        Ok(self)
    }

    /// Standard sampling box for certification in the current frame.
    pub fn default_samples(&self, seed: u64, n: usize) -> SampleSpec {
        use SolutionId::*;
        match (self.id, self.frame) {
            (Tanh | Coth, _) => SampleSpec::new(seed, n, (0.0, 0.5), (-1.0, 1.0), (-1.0, 1.0)),
            (_, Frame::Radial) => SampleSpec::new(seed, n, (0.5, 2.0), (0.3, 2.0), (0.0, 1.0)),
            (SteadyRat | SteadySec | SsA | SsB | SsN, _) => {
                SampleSpec::new(seed, n, (0.5, 2.0), (-1.5, 1.5), (-1.5, 1.5)).with_margin(0.2)
            }
            _ => SampleSpec::new(seed, n, (0.0, 3.0), (-1.0, 1.0), (-1.0, 1.0)),
        }
    }

    /// The system this solution satisfies in its current frame.
    pub fn target_system(&self) -> SystemSpec {
        let params = self.params;
        match (self.id.family(), self.frame) {
            (Family::PlaneWave, Frame::Rotated) => SystemSpec::new(SystemKind::PdeRotatedFree, params),
            (Family::PlaneWave, _) => {
                SystemSpec::new(SystemKind::PdeFull, params).with_stream(StreamFunction::case10())
            }
            (Family::Radial, Frame::Radial) => SystemSpec::new(SystemKind::PdeRadial, params),
            (Family::Radial, _) => {
                SystemSpec::new(SystemKind::PdeFull, params).with_stream(StreamFunction::radial_swirl(params.alpha))
            }
            (Family::Trivial, Frame::Rotated) => SystemSpec::new(SystemKind::PdeRotatedFree, params),
            (Family::Trivial, Frame::Radial) => SystemSpec::new(SystemKind::PdeRadial, params),
            (Family::Trivial, Frame::Lab) => {
                SystemSpec::new(SystemKind::PdeFull, params).with_stream(StreamFunction::case10())
            }
        }
    }

    /// Generic evaluation in the current frame.
    pub fn eval<S: Scalar>(&self, t: S, a: S, b: S) -> Result<[S; 3]> {
        match self.id.family() {
            Family::Trivial => Ok(match self.id {
                SolutionId::Uv0 => [S::cst(self.consts.c1), S::cst(0.0), S::cst(self.consts.c2)],
                _ => [S::cst(0.0); 3],
            }),
            Family::PlaneWave => {
                let (xr, yr) = match self.frame {
                    Frame::Rotated => (a, b),
                    _ => {
                        let two_t = t * 2.0;
                        let (s, c) = (two_t.sin(), two_t.cos());
                        (a * s + b * c, b * s - a * c)
                    }
                };
                self.plane_wave(t, xr * self.consts.alpha1 + yr * self.consts.alpha2)
            }
            Family::Radial => {
                let rho = match self.frame {
                    Frame::Radial => a * a,
                    _ => a * a + b * b,
                };
                let lab_display = self.frame == Frame::Lab;
                self.radial(t, rho, lab_display)
            }
        }
    }

    /// Plane-wave formulas as functions of `t` and the phase `omega`.
    pub fn plane_wave<S: Scalar>(&self, t: S, omega: S) -> Result<[S; 3]> {
        let p = &self.params;
        let c = &self.consts;
        let a_sq = c.alpha1 * c.alpha1 + c.alpha2 * c.alpha2;
        let (d1, d2, d3) = (p.d1, p.d2, p.d3);
        let lin = omega * c.c3 + c.c4;
        Ok(match self.id {
            SolutionId::Weier | SolutionId::Rational => {
                let z = omega + c.c1;
                let pw = match &self.wp {
                    Some(w) => z.lift(w.derivs(z.value())?),
                    None => z.try_powf(-2.0)?,
                };
                [pw * (6.0 * d2 * a_sq), pw * (6.0 * d1 * a_sq), (pw * (-6.0 * d1 * d2) + lin) * (a_sq / d3)]
            }
            SolutionId::Sec => {
                let th = omega * c.c2 + c.c1;
                let s2 = th.try_sec()?.sq();
                let k = a_sq * c.c2 * c.c2;
                [
                    s2 * (6.0 * d2 * k),
                    (s2 * 3.0 - 2.0) * (2.0 * d1 * k),
                    (s2 * (-6.0 * d1 * d2 * c.c2 * c.c2) + lin) * (a_sq / d3),
                ]
            }
            SolutionId::Tanh | SolutionId::Coth => {
                let xi = t * c.c1 + omega;
                let h = if self.id == SolutionId::Tanh { xi.tanh() } else { xi.try_coth()? };
                let u = (h + 1.0).sq() * (0.6 * c.c1);
                let v = u - 2.4 * c.c1;
                let w = (xi * 10.0).exp() * c.c3 + c.c2 - u;
                [u, v, w]
            }
            _ => unreachable!("not a plane wave"),
        })
    }

    /// Radial formulas as functions of `t` and `rho = r^2`.
    pub fn radial<S: Scalar>(&self, t: S, rho: S, lab_display: bool) -> Result<[S; 3]> {
        let p = &self.params;
        let c = &self.consts;
        let (d1, d2, d3, al) = (p.d1, p.d2, p.d3, p.alpha);
        let inv_rho = rho.try_recip()?;
        Ok(match self.id {
            SolutionId::SteadyRat => {
                let u = inv_rho * (2.0 * (2.0 * d2 - al));
                let v = inv_rho * (2.0 * (2.0 * d1 - al));
                let w = match self.steady_branch() {
                    SteadyBranch::Generic => {
                        rho.try_powf(-al / (2.0 * d3))? * c.c1
                            + inv_rho * (2.0 * (2.0 * d1 - al) * (2.0 * d2 - al) / (al - 2.0 * d3))
                            + c.c0
                    }
                    SteadyBranch::TwiceD3 => {
                        inv_rho * c.c1 + inv_rho * (rho.try_ln()? + 1.0) * (4.0 * (d1 - d3) * (d2 - d3) / d3) + c.c0
                    }
                    SteadyBranch::Zero => {
                        let log_coef = if lab_display { c.c1 } else { 0.5 * c.c1 };
                        rho.try_ln()? * log_coef - inv_rho * (4.0 * d1 * d2 / d3) + c.c0
                    }
                };
                [u, v, w]
            }
            SolutionId::SteadySec => {
                let r = rho.try_sqrt()?;
                let s2 = (r * c.beta).try_sec()?.sq();
                let b2 = c.beta * c.beta;
                [s2 * (6.0 * b2), (s2 * 3.0 - 2.0) * (2.0 * b2), r * c.c5 + c.c4 - s2 * (6.0 * b2)]
            }
            SolutionId::SsA | SolutionId::SsB | SolutionId::SsN => {
                let inv_t = t.try_recip()?;
                let omega = rho * inv_t;
                let [uu, vv, ww] = self.selfsim_profile(omega)?;
                [uu * inv_t, vv * inv_t, ww * inv_t]
            }
            _ => unreachable!("not radial"),
        })
    }

    /// Self-similar profiles `(U, V, W)(omega)`, with fields `profile(r^2/t)/t`.
    pub fn selfsim_profile<S: Scalar>(&self, omega: S) -> Result<[S; 3]> {
        let p = &self.params;
        let c = &self.consts;
        let (d1, d2, d3, al) = (p.d1, p.d2, p.d3, p.alpha);
        let inv = omega.try_recip()?;
        let decay = (omega * (-0.25 / d3)).exp();
        Ok(match self.id {
            SolutionId::SsA => [inv * (4.0 * d2), inv * (4.0 * d1), decay * c.c2 - inv * (4.0 * d1 * d2 / d3)],
            SolutionId::SsB => {
                let w = omega.try_powf(-(d1 + d2) / (2.0 * d3))? * decay * c.c2
                    - inv * (2.0 * (d1 - d2) * (d1 - d2) / (d1 + d2 - 2.0 * d3))
                    - 1.0;
                [inv * (2.0 * (d2 - d1)) + 1.0, inv * (2.0 * (d1 - d2)) + 1.0, w]
            }
            SolutionId::SsN => {
                let n = c.n as i32;
                let nf = n as f64;
                let u = inv * (2.0 * (2.0 * d2 - al));
                let v = inv * (2.0 * (2.0 * d1 - al));
                let kcoef = 16.0 * ((d1 - nf * d3) * (d2 - nf * d3) - (nf - 1.0) * d3 * c.c1);
                // sum_{k=0}^{n-2} (-1)^k (n-2)!/(n-2-k)! (4 d3)^k omega^(-2-k)
                let mut sum = S::cst(0.0);
                let mut coef = 1.0;
                let mut pow = inv * inv;
                for k in 0..=(n - 2) {
                    if k > 0 {
                        coef *= -((n - 2 - k + 1) as f64) * 4.0 * d3;
                        pow = pow * inv;
                    }
                    sum = sum + pow * coef;
                }
                let w = inv * (4.0 * c.c1) + omega.try_powf(-nf)? * decay * c.c2 + sum * kcoef;
                [u, v, w]
            }
            _ => return Err(param(format!("{} has no self-similar profile", self.id))),
        })
    }

    /// Stationary radial profile as a function of `r`.
    pub fn steady_profile<S: Scalar>(&self, r: S) -> Result<[S; 3]> {
        if !matches!(self.id, SolutionId::SteadyRat | SolutionId::SteadySec) {
            return Err(param(format!("{} is not steady radial", self.id)));
        }
        self.radial(S::cst(1.0), r * r, false)
    }

    /// Plane-wave profile `(U, V, W)(omega)` of a static rotating-frame solution.
    pub fn planewave_profile<S: Scalar>(&self, omega: S) -> Result<[S; 3]> {
        if !matches!(self.id, SolutionId::Weier | SolutionId::Rational | SolutionId::Sec) {
            return Err(param(format!("{} is not a static plane wave", self.id)));
        }
        self.plane_wave(S::cst(0.0), omega)
    }

    /// Jets in the current frame.
    pub fn evaluate(&self, p: Point) -> Result<[Jet2; 3]> {
        if !self.validity(p, 0.0) {
            return Err(domain(format!("{} evaluated on its singular set at {p:?}", self.id)));
        }
        let [t, a, b] = Jet2::seed(p);
        self.eval(t, a, b)
    }

    pub fn values_at(&self, p: Point) -> Result<[f64; 3]> {
        if !self.validity(p, 0.0) {
            return Err(domain(format!("{} evaluated on its singular set at {p:?}", self.id)));
        }
        self.eval(p[0], p[1], p[2])
    }

    /// Distance-based validity test in the current frame.
    pub fn validity(&self, p: Point, margin: f64) -> bool {
        if !p.iter().all(|v| v.is_finite()) {
            return false;
        }
        let m = margin.max(0.0);
        let c = &self.consts;
        match self.id.family() {
            Family::Trivial => true,
            Family::PlaneWave => {
                let q = if self.frame == Frame::Rotated { p } else { lab_to_rotated(p) };
                let omega = c.alpha1 * q[1] + c.alpha2 * q[2];
                match self.id {
                    SolutionId::Weier => {
                        let w = self.wp.as_ref().expect("weierstrass data");
                        w.pole_distance(omega + c.c1) >= m.max(2.0 * crate::special_fn::POLE_MARGIN)
                    }
                    SolutionId::Rational => (omega + c.c1).abs() >= m.max(f64::MIN_POSITIVE),
                    SolutionId::Sec => dist_to_half_odd_pi(c.c1 + c.c2 * omega) >= m.max(1e-9),
                    SolutionId::Coth => (c.c1 * p[0] + omega).abs() >= m.max(f64::MIN_POSITIVE),
                    _ => true,
                }
            }
            Family::Radial => {
                let r = if self.frame == Frame::Radial { p[1] } else { p[1].hypot(p[2]) };
                if r < m.max(f64::MIN_POSITIVE) {
                    return false;
                }
                match self.id {
                    SolutionId::SteadySec => dist_to_half_odd_pi(c.beta * r) >= m.max(1e-9),
                    SolutionId::SsA | SolutionId::SsB | SolutionId::SsN => p[0] >= m.max(f64::MIN_POSITIVE),
                    _ => true,
                }
            }
        }
    }

    pub fn shared(self) -> Arc<dyn SolutionField> {
        Arc::new(self)
    }
}

fn dist_to_half_odd_pi(a: f64) -> f64 {
    use std::f64::consts::PI;
    let k = ((a - PI / 2.0) / PI).round();
    (a - PI / 2.0 - k * PI).abs()
}

impl SolutionField for ExactSolution {
    fn label(&self) -> String {
        format!("{}@{:?}", self.id, self.frame)
    }
    fn jets(&self, p: Point) -> Result<[Jet2; 3]> {
        self.evaluate(p)
    }
    fn values(&self, p: Point) -> Result<[f64; 3]> {
        self.values_at(p)
    }
    fn is_valid(&self, p: Point, margin: f64) -> bool {
        self.validity(p, margin)
    }
}
