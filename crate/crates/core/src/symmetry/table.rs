//! Generators of the classification table and a numerical check of the
//! determining equations.

use serde::Serialize;

use super::generator::{Coef, DeParams, LieGenerator};
use crate::error::{param, Result};
use crate::numerics::{fd_derivative6, sample_points, Jet2, Point, SampleSpec, Scalar};
use crate::solutions::SystemParams;
use crate::stream::{CaseId, FChoice, StreamFunction, StreamParams, StreamSpec};

/// Step for differentiating `p_i(t)`.
const TIME_STEP: f64 = 1e-2;

/// Parameters used by `verify_case` when the caller gives none.
pub fn default_stream_spec(case: CaseId) -> Result<StreamSpec> {
    let p = StreamParams::default();
    let (params, f) = match case {
        CaseId::Case1 => (StreamParams { alpha: 1.0, beta: 0.25, ..p }, FChoice::Square),
        CaseId::Case2 => (StreamParams { alpha1: 1.0, alpha2: 0.5, beta: 0.3, gamma: 0.7, ..p }, FChoice::Sin),
        CaseId::Case3 => (StreamParams { alpha: 0.8, ..p }, FChoice::Sin),
        CaseId::Case4 => (StreamParams { alpha0: 0.3, alpha: 0.6, ..p }, FChoice::Sin),
        CaseId::Case5 => (StreamParams { alpha: 0.5, beta: 0.4, gamma: 0.3, ..p }, FChoice::Identity),
        CaseId::Case6 => (StreamParams { sign: 1.0, alpha1: 1.0, alpha2: 0.5, gamma: 0.4, ..p }, FChoice::Identity),
        CaseId::Case7 => (StreamParams { alpha0: 0.8, ..p }, FChoice::Identity),
        CaseId::Case8 => (StreamParams { alpha0: 0.6, ..p }, FChoice::Identity),
        CaseId::Case9 => (StreamParams { alpha: 0.7, ..p }, FChoice::Identity),
        CaseId::Case10 => (p, FChoice::Identity),
        CaseId::Case11 => (StreamParams { alpha1: 0.6, alpha2: -0.4, ..p }, FChoice::Identity),
        CaseId::Custom => return Err(param("custom streams have no table generators")),
    };
    Ok(StreamSpec { case, params, f })
}

fn t_of(a: &[Jet2; 3]) -> Jet2 {
    a[0]
}

/// `d_t`.
pub fn time_translation() -> LieGenerator {
    LieGenerator::new("d_t").with_xi([Coef::Const(1.0), Coef::Zero, Coef::Zero]).with_de(DeParams::default().t0(1.0))
}

/// `H d_w` for a solution `H` of the linear equation for `w` without reaction.
pub fn h_shift(label: &str, h: Coef) -> LieGenerator {
    LieGenerator::new(label).with_aff(2, h.clone()).with_de(DeParams::default().h(h))
}

/// `(u + w) d_w`, admitted when `d1 = d3`.
pub fn uw_generator() -> LieGenerator {
    LieGenerator::new("(u+w)d_w")
        .with_lin(2, 0, Coef::Const(1.0))
        .with_lin(2, 2, Coef::Const(1.0))
        .with_de(DeParams::default().c12(1.0, 0.0))
}

/// `(v + w) d_w`, admitted when `d2 = d3`.
pub fn vw_generator() -> LieGenerator {
    LieGenerator::new("(v+w)d_w")
        .with_lin(2, 1, Coef::Const(1.0))
        .with_lin(2, 2, Coef::Const(1.0))
        .with_de(DeParams::default().c12(0.0, 1.0))
}

/// `x sin 2t + y cos 2t`, which solves the `H` equation for `Psi = x^2 + y^2`.
pub fn case10_h() -> Coef {
    Coef::jet(|a| {
        let tt = a[0] * 2.0;
        a[1] * tt.sin() + a[2] * tt.cos()
    })
}

/// Operators present for every stream, plus the conditional ones allowed by `d`.
pub fn principal_generators(params: &SystemParams) -> Vec<LieGenerator> {
    let mut out = vec![time_translation(), h_shift("d_w", Coef::Const(1.0))];
    if params.d1 == params.d3 {
        out.push(uw_generator());
    }
    if params.d2 == params.d3 {
        out.push(vw_generator());
    }
    out
}

fn scaling(label: &str, xi1: Coef, xi2: Coef) -> LieGenerator {
    LieGenerator::new(label).with_xi([Coef::jet(|a| t_of(a) * 2.0), xi1, xi2]).with_scaling(1.0)
}

fn rotation(label: &str, factor: Option<f64>) -> LieGenerator {
    // factor: Some(k) multiplies by exp(k t)
    let (fx, fy): (Coef, Coef) = match factor {
        None => (Coef::jet(|a| a[2]), Coef::jet(|a| -a[1])),
        Some(k) => (Coef::jet(move |a| (a[0] * k).exp() * a[2]), Coef::jet(move |a| -((a[0] * k).exp() * a[1]))),
    };
    LieGenerator::new(label).with_xi([Coef::Zero, fx, fy])
}

/// Additional generators of a table row, as printed, with their template data.
pub fn table_generators(spec: &StreamSpec) -> Result<Vec<LieGenerator>> {
    let p = spec.params;
    let (a0, a1, a2, al, be, ga) = (p.alpha0, p.alpha1, p.alpha2, p.alpha, p.beta, p.gamma);
    let d = DeParams::default;
    Ok(match spec.case {
        CaseId::Case1 => vec![rotation("exp(2 beta t)(y d_x - x d_y)", Some(2.0 * be))
            .with_de(d().p0(move |t| (2.0 * be * t).exp()).q(move |t| -al * (2.0 * be * t).exp()))],
        CaseId::Case2 => {
            let k = a2 * be;
            vec![LieGenerator::new("exp(alpha2 beta t)(alpha2 d_x - alpha1 d_y)")
                .with_xi([
                    Coef::Zero,
                    Coef::jet(move |a| (a[0] * k).exp() * a2),
                    Coef::jet(move |a| (a[0] * k).exp() * -a1),
                ])
                .with_de(
                    d().p1(move |t| a2 * (k * t).exp())
                        .p2(move |t| -a1 * (k * t).exp())
                        .q(move |t| -a2 * ga * (k * t).exp()),
                )]
        }
        CaseId::Case3 => {
            vec![scaling("D", Coef::jet(|a| a[1]), Coef::jet(|a| a[2])).with_de(d().c0(1.0).q(move |_| -al))]
        }
        CaseId::Case4 => vec![scaling(
            "D",
            Coef::jet(move |a| a[1] - a[2] * (2.0 * a0)),
            Coef::jet(move |a| a[2] + a[1] * (2.0 * a0)),
        )
        .with_de(d().c0(1.0).p0(move |_| -2.0 * a0).q(move |_| 2.0 * a0 * al))],
        CaseId::Case5 => vec![
            rotation("J", None).with_de(d().p0(|_| 1.0).q(move |_| -al)),
            scaling(
                "D",
                Coef::jet(move |a| a[1] + a[0] * a[2] * (4.0 * ga)),
                Coef::jet(move |a| a[2] - a[0] * a[1] * (4.0 * ga)),
            )
            .with_de(d().c0(1.0).p0(move |t| 4.0 * ga * t).q(move |t| -2.0 * be - 4.0 * al * ga * t)),
        ],
        CaseId::Case6 => {
            let s = p.sign;
            vec![
                LieGenerator::new("alpha2 d_x - alpha1 d_y")
                    .with_xi([Coef::Zero, Coef::Const(a2), Coef::Const(-a1)])
                    .with_de(d().p1(move |_| a2).p2(move |_| -a1)),
                scaling("D", Coef::jet(move |a| a[1] + a[0] * (ga * a2)), Coef::jet(move |a| a[2] - a[0] * (ga * a1)))
                    .with_de(d().c0(1.0).p1(move |t| ga * a2 * t).p2(move |t| -ga * a1 * t).q(move |_| -s)),
            ]
        }
        CaseId::Case7 => vec![
            LieGenerator::new("cos t d_x - 2 alpha0 sin t d_y")
                .with_xi([Coef::Zero, Coef::jet(|a| a[0].cos()), Coef::jet(move |a| a[0].sin() * (-2.0 * a0))])
                .with_de(d().p1(f64::cos).p2(move |t| -2.0 * a0 * t.sin())),
            LieGenerator::new("sin t d_x + 2 alpha0 cos t d_y")
                .with_xi([Coef::Zero, Coef::jet(|a| a[0].sin()), Coef::jet(move |a| a[0].cos() * (2.0 * a0))])
                .with_de(d().p1(f64::sin).p2(move |t| 2.0 * a0 * t.cos())),
        ],
        CaseId::Case8 => vec![
            LieGenerator::new("exp(t)(d_x - 2 alpha0 d_y)")
                .with_xi([Coef::Zero, Coef::jet(|a| a[0].exp()), Coef::jet(move |a| a[0].exp() * (-2.0 * a0))])
                .with_de(d().p1(f64::exp).p2(move |t| -2.0 * a0 * t.exp())),
            LieGenerator::new("exp(-t)(d_x + 2 alpha0 d_y)")
                .with_xi([Coef::Zero, Coef::jet(|a| (-a[0]).exp()), Coef::jet(move |a| (-a[0]).exp() * (2.0 * a0))])
                .with_de(d().p1(|t| (-t).exp()).p2(move |t| 2.0 * a0 * (-t).exp())),
        ],
        CaseId::Case9 => vec![
            LieGenerator::new("d_y")
                .with_xi([Coef::Zero, Coef::Zero, Coef::Const(1.0)])
                .with_de(d().p2(|_| 1.0).q(move |_| -al)),
            LieGenerator::new("d_x - 2t d_y")
                .with_xi([Coef::Zero, Coef::Const(1.0), Coef::jet(|a| a[0] * -2.0)])
                .with_de(d().p1(|_| 1.0).p2(|t| -2.0 * t).q(move |t| 2.0 * al * t)),
        ],
        CaseId::Case10 => {
            let [p1, _p2, j12, _pt, dd] = case10_algebra();
            let q = LieGenerator::new("cos 2t d_x - sin 2t d_y")
                .with_xi([Coef::Zero, Coef::jet(|a| (a[0] * 2.0).cos()), Coef::jet(|a| -(a[0] * 2.0).sin())])
                .with_de(d().p1(|t| (2.0 * t).cos()).p2(|t| -(2.0 * t).sin()));
            vec![j12, p1, q, dd]
        }
        CaseId::Case11 => vec![
            LieGenerator::new("d_x")
                .with_xi([Coef::Zero, Coef::Const(1.0), Coef::Zero])
                .with_de(d().p1(|_| 1.0).q(move |_| -a1)),
            LieGenerator::new("d_y")
                .with_xi([Coef::Zero, Coef::Zero, Coef::Const(1.0)])
                .with_de(d().p2(|_| 1.0).q(move |_| -a2)),
            scaling("D", Coef::jet(move |a| a[1] + a[0] * a2), Coef::jet(move |a| a[2] - a[0] * a1))
                .with_de(d().c0(1.0).p1(move |t| a2 * t).p2(move |t| -a1 * t)),
            LieGenerator::new("(alpha1 t + y) d_x + (alpha2 t - x) d_y")
                .with_xi([Coef::Zero, Coef::jet(move |a| a[0] * a1 + a[2]), Coef::jet(move |a| a[0] * a2 - a[1])])
                .with_de(d().p0(|_| 1.0).p1(move |t| a1 * t).p2(move |t| a2 * t).q(move |t| -t * (a1 * a1 + a2 * a2))),
        ],
        CaseId::Custom => return Err(param("custom streams have no table generators")),
    })
}

/// The five operators of the case 10 algebra: `[P1, P2, J12, Pt, D]`.
pub fn case10_algebra() -> [LieGenerator; 5] {
    let d = DeParams::default;
    let p1 = LieGenerator::new("P1")
        .with_xi([Coef::Zero, Coef::jet(|a| (a[0] * 2.0).sin()), Coef::jet(|a| (a[0] * 2.0).cos())])
        .with_de(d().p1(|t| (2.0 * t).sin()).p2(|t| (2.0 * t).cos()));
    let p2 = LieGenerator::new("P2")
        .with_xi([Coef::Zero, Coef::jet(|a| -(a[0] * 2.0).cos()), Coef::jet(|a| (a[0] * 2.0).sin())])
        .with_de(d().p1(|t| -(2.0 * t).cos()).p2(|t| (2.0 * t).sin()));
    let j12 = rotation("J12", None).with_de(d().p0(|_| 1.0));
    let pt = time_translation().relabel("Pt");
    let dd = scaling("D", Coef::jet(|a| a[1] + a[0] * a[2] * 4.0), Coef::jet(|a| a[2] - a[0] * a[1] * 4.0))
        .with_de(d().c0(1.0).p0(|t| 4.0 * t));
    [p1, p2, j12, pt, dd]
}

/// Table row generators plus the principal and conditional operators.
pub fn builtin_generators(stream: &StreamFunction, params: &SystemParams) -> Result<Vec<LieGenerator>> {
    let mut out = match stream.spec() {
        Some(spec) => table_generators(spec)?,
        None => Vec::new(),
    };
    out.extend(principal_generators(params));
    if stream.case_id() == CaseId::Case10 && stream.spec().is_some() {
        out.push(h_shift("(x sin 2t + y cos 2t) d_w", case10_h()));
    }
    Ok(out)
}

/// Same as [`builtin_generators`] for the default stream of a row.
pub fn builtin_generators_for(case: CaseId, params: &SystemParams) -> Result<Vec<LieGenerator>> {
    let stream = StreamFunction::from_spec(default_stream_spec(case)?)?;
    builtin_generators(&stream, params)
}

/// Left-hand sides of the three determining equations for `Psi`:
/// the `x`- and `y`-differentiated forms and the integrated form.
pub fn determining_residual(stream: &StreamFunction, de: &DeParams, p: Point) -> Result<[f64; 3]> {
    let [t, x, y] = p;
    let s = stream.derivatives(x, y)?;
    let (p0, p1, p2) = ((de.p0)(t), (de.p1)(t), (de.p2)(t));
    let dp0 = fd_derivative6(|s| (de.p0)(s), t, TIME_STEP);
    let dp1 = fd_derivative6(|s| (de.p1)(s), t, TIME_STEP);
    let dp2 = fd_derivative6(|s| (de.p2)(s), t, TIME_STEP);
    let xi1 = de.c0 * x + p0 * y + p1;
    let xi2 = de.c0 * y - p0 * x + p2;
    let e4 = xi1 * s.pxx + xi2 * s.pxy + de.c0 * s.px - p0 * s.py - x * dp0 + dp2;
    let e5 = xi2 * s.pyy + xi1 * s.pxy + de.c0 * s.py + p0 * s.px - y * dp0 - dp1;
    let e7 = xi1 * s.px + xi2 * s.py - 0.5 * (x * x + y * y) * dp0 + x * dp2 - y * dp1 + (de.q)(t);
    Ok([e4, e5, e7])
}

/// Residual of `H_t + Psi_y H_x - Psi_x H_y - d3 lap H` at `p`.
pub fn h_residual(stream: &StreamFunction, h: &Coef, d3: f64, p: Point) -> Result<f64> {
    let s = stream.derivatives(p[1], p[2])?;
    let j = h.jet_at(p);
    Ok(j.dt() + s.py * j.dx() - s.px * j.dy() - d3 * j.lap())
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub label: String,
    /// Largest determining-equation residual over the samples.
    pub max_de_residual: f64,
    /// Largest difference between printed coefficients and the template.
    pub template_gap: f64,
    /// Largest residual of the `H` equation.
    pub h_residual: f64,
    /// `(d1 - d3) c1 = 0` and `(d2 - d3) c2 = 0`.
    pub d_relations_hold: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub schema: u32,
    pub case: String,
    pub stream: StreamSpec,
    pub seed: u64,
    pub samples: usize,
    pub generators: Vec<GeneratorCheck>,
    pub max_de_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Absolute tolerance for the determining equations.
pub const DE_TOL: f64 = 1e-10;

/// Checks every generator of a stream against the determining equations at
/// `n` seeded points of `[-3, 3]^3` kept `0.5` away from singular sets.
pub fn verify_stream(spec: &StreamSpec, params: &SystemParams, n: usize, seed: u64) -> Result<CaseReport> {
    params.validate()?;
    let stream = StreamFunction::from_spec(spec.clone())?;
    let gens = builtin_generators(&stream, params)?;
    let samples = SampleSpec::new(seed, n, (-3.0, 3.0), (-3.0, 3.0), (-3.0, 3.0)).with_margin(0.5);
    let pts = sample_points(&samples, |p, m| stream.is_valid(p[1], p[2], m))?;
    let mut checks = Vec::with_capacity(gens.len());
    for g in &gens {
        let de = g.de.as_ref().ok_or_else(|| param(format!("generator {} has no template data", g.label)))?;
        let mut max_de: f64 = 0.0;
        let mut gap: f64 = 0.0;
        let mut hres: f64 = 0.0;
        let lin_t = de.eta_lin();
        for &p in &pts {
            for e in determining_residual(&stream, de, p)? {
                max_de = max_de.max(e.abs());
            }
            let xi_t = de.xi(p);
            let xi_g = g.xi_at(p);
            let lin_g = g.lin_at(p);
            let aff_g = g.aff_at(p);
            for k in 0..3 {
                gap = gap.max((xi_t[k] - xi_g[k]).abs());
                for j in 0..3 {
                    gap = gap.max((lin_t[k][j] - lin_g[k][j]).abs());
                }
            }
            gap = gap.max(aff_g[0].abs()).max(aff_g[1].abs()).max((aff_g[2] - de.h.value(p)).abs());
            hres = hres.max(h_residual(&stream, &de.h, params.d3, p)?.abs());
        }
        let d_ok = (params.d1 - params.d3) * de.c1 == 0.0 && (params.d2 - params.d3) * de.c2 == 0.0;
        let pass = max_de < DE_TOL && gap < 1e-12 && hres < DE_TOL && d_ok;
        checks.push(GeneratorCheck {
            label: g.label.clone(),
            max_de_residual: max_de,
            template_gap: gap,
            h_residual: hres,
            d_relations_hold: d_ok,
            pass,
        });
    }
    let max_de_residual = checks.iter().map(|c| c.max_de_residual).fold(0.0, f64::max);
    let pass = checks.iter().all(|c| c.pass);
    Ok(CaseReport {
        schema: 1,
        case: spec.case.to_string(),
        stream: spec.clone(),
        seed,
        samples: n,
        generators: checks,
        max_de_residual,
        tolerance: DE_TOL,
        pass,
    })
}

/// [`verify_stream`] for a row's default parameters and `d = (1, 2, 3)`.
pub fn verify_case(case: CaseId, n: usize, seed: u64) -> Result<CaseReport> {
    verify_stream(&default_stream_spec(case)?, &SystemParams::new(1.0, 2.0, 3.0), n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case11_translation_and_case10_rotation_are_exact() {
        let s11 = StreamFunction::from_spec(default_stream_spec(CaseId::Case11).unwrap()).unwrap();
        let g = &table_generators(s11.spec().unwrap()).unwrap()[0];
        let r = determining_residual(&s11, g.de.as_ref().unwrap(), [0.3, 1.0, -2.0]).unwrap();
        assert_eq!(r, [0.0, 0.0, 0.0]);
        let s10 = StreamFunction::case10();
        let j12 = &case10_algebra()[2];
        let r = determining_residual(&s10, j12.de.as_ref().unwrap(), [0.3, 1.0, -2.0]).unwrap();
        assert!(r.iter().all(|e| e.abs() < 1e-14));
    }

    #[test]
    fn wrong_stream_breaks_rotation() {
        let psi = std::sync::Arc::new(|x: Jet2, y: Jet2| Ok(x * x + y * y * 2.0));
        let s = StreamFunction::custom("x^2+2y^2", psi, None);
        let j12 = &case10_algebra()[2];
        let r = determining_residual(&s, j12.de.as_ref().unwrap(), [0.0, 1.0, 1.0]).unwrap();
        assert!(r[2].abs() > 1e-3);
    }

    #[test]
    fn all_rows_pass_at_defaults() {
        for case in CaseId::TABLE {
            let rep = verify_case(case, 200, 42).unwrap();
            assert!(rep.pass, "{}", serde_json::to_string_pretty(&rep).unwrap());
        }
    }

    #[test]
    fn conditional_operators_follow_diffusivities() {
        let count = |d: SystemParams| principal_generators(&d).len();
        assert_eq!(count(SystemParams::new(1.0, 2.0, 3.0)), 2);
        assert_eq!(count(SystemParams::new(3.0, 2.0, 3.0)), 3);
        assert_eq!(count(SystemParams::new(1.0, 1.0, 1.0)), 4);
        let rep = verify_stream(&default_stream_spec(CaseId::Case9).unwrap(), &SystemParams::new(1.0, 1.0, 1.0), 50, 3)
            .unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn excluded_parameters_are_rejected() {
        let mut s7 = default_stream_spec(CaseId::Case7).unwrap();
        s7.params.alpha0 = 0.5;
        assert!(verify_stream(&s7, &SystemParams::new(1.0, 2.0, 3.0), 10, 1).is_err());
        let s5 = StreamSpec { case: CaseId::Case5, params: StreamParams::default(), f: FChoice::Identity };
        assert!(verify_stream(&s5, &SystemParams::new(1.0, 2.0, 3.0), 10, 1).is_err());
        let s6 = StreamSpec {
            case: CaseId::Case6,
            params: StreamParams { sign: 1.0, ..Default::default() },
            f: FChoice::Identity,
        };
        assert!(verify_stream(&s6, &SystemParams::new(1.0, 2.0, 3.0), 10, 1).is_err());
    }

    #[test]
    fn case10_row_has_four_generators() {
        let g = table_generators(&default_stream_spec(CaseId::Case10).unwrap()).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.iter().any(|g| g.label == "D"));
        let g9 = table_generators(&default_stream_spec(CaseId::Case9).unwrap()).unwrap();
        let labels: Vec<_> = g9.iter().map(|g| g.label.as_str()).collect();
        assert_eq!(labels, ["d_y", "d_x - 2t d_y"]);
    }
}
