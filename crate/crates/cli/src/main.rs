//! `dlvlab`: command-line front end for dlv-core.
//!
//! Exit codes: 0 pass, 1 check failed, 2 configuration or schema error,
//! 3 domain error.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::json;

use dlv_core::field::SharedField;
use dlv_core::figures::{figure, gnuplot_script, FigureId};
use dlv_core::residual::{certify, SystemKind, SystemSpec};
use dlv_core::solutions::{list_solutions, Constants, ExactSolution, Frame, SolutionId, SystemParams};
use dlv_core::solver::radial::{radial_convergence, simulate_radial};
use dlv_core::solver::{convergence_study, simulate, Grid2D, RadialConfig, RadialGrid, Scheme, SimConfig, DEFAULT_CFL};
use dlv_core::stream::{CaseId, StreamParams};
use dlv_core::symmetry::table::default_stream_spec;
use dlv_core::symmetry::{builtin_generators, case10_algebra, verify_case, verify_stream, LieGenerator, Transported};
use dlv_core::Error;

#[derive(Parser)]
#[command(name = "dlvlab", version, about = "Verification lab for a diffusive Lotka-Volterra system with convection")]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, env = "DLV_SEED", default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the solution and system registries.
    Catalog,
    /// Certify a catalog solution against a system.
    Certify(CertifyArgs),
    /// Check the symmetry classification rows against the determining equations.
    VerifyClassification(VerifyArgs),
    /// Transport a solution along a symmetry and certify the result.
    Flow(FlowArgs),
    /// Run the grid solver with exact initial and boundary data.
    Simulate(RunArgs),
    /// Run a refinement study and report observed orders.
    Convergence(RunArgs),
    /// Write surface data, a gnuplot script and the dominance check for a figure.
    Figure(FigureArgs),
}

#[derive(Args)]
struct SolutionArgs {
    /// Catalog id, e.g. S_RATIONAL.
    #[arg(long)]
    solution: String,
    /// Solution constants as JSON, or @path to a JSON file. Defaults to the catalog values.
    #[arg(long)]
    constants: Option<String>,
    /// System parameters {d1, d2, d3, k, alpha} as JSON or @path.
    #[arg(long)]
    params: Option<String>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    sol: SolutionArgs,
    /// System kind; selects the frame. Defaults to the solution's native system.
    #[arg(long)]
    system: Option<String>,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Report path (the report is also printed).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// `all`, `caseN` or `N`.
    case: String,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Row constants as JSON or @path, replacing the defaults of a single row.
    #[arg(long)]
    stream_params: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FlowArgs {
    /// Generator label, e.g. P1, J12, D, d_t.
    #[arg(long)]
    generator: String,
    #[arg(long, allow_negative_numbers = true)]
    eps: f64,
    #[command(flatten)]
    sol: SolutionArgs,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration JSON file.
    config: PathBuf,
    /// Report path (the report is also printed).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Field dump of the final state (simulate only).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1, fig2 or fig3.
    id: String,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Nodes per direction of each surface.
    #[arg(long, default_value_t = 41)]
    nodes: usize,
}

/// Settings of `simulate` and `convergence`.
#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    solution: SolutionId,
    #[serde(default)]
    params: Option<SystemParams>,
    #[serde(default)]
    constants: Option<Constants>,
    /// `pde_full` (lab frame), `pde_rotated_free` or `pde_radial`.
    #[serde(default)]
    system: Option<SystemKind>,
    grid: GridConfig,
    t0: f64,
    t_end: f64,
    #[serde(default = "default_cfl")]
    cfl: f64,
    #[serde(default)]
    scheme: Scheme,
    #[serde(default = "default_levels")]
    levels: usize,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum GridConfig {
    Plane(Grid2D),
    Radial(RadialGrid),
}

fn default_cfl() -> f64 {
    DEFAULT_CFL
}

fn default_levels() -> usize {
    3
}

enum Failure {
    Check,
    Config(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Pole { .. } | Error::Sampling(_) => Failure::Domain(e.to_string()),
            Error::Parameter(_) | Error::Config(_) => Failure::Config(e.to_string()),
            Error::Precision(_) | Error::Integration(_) | Error::Solver(_) => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Cmd::Catalog => cmd_catalog(),
        Cmd::Certify(a) => cmd_certify(a, cli.seed),
        Cmd::VerifyClassification(a) => cmd_verify(a, cli.seed),
        Cmd::Flow(a) => cmd_flow(a, cli.seed),
        Cmd::Simulate(a) => cmd_run(a, false),
        Cmd::Convergence(a) => cmd_run(a, true),
        Cmd::Figure(a) => cmd_figure(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Config(m)) => {
            eprintln!("dlvlab: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("dlvlab: {m}");
            ExitCode::from(3)
        }
    }
}

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

/// Parses inline JSON or `@path`.
fn json_arg<T: DeserializeOwned>(what: &str, s: &str) -> std::result::Result<T, Failure> {
    let text = match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| config(format!("cannot read {what} from {path}: {e}")))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| config(format!("invalid {what}: {e}")))
}

fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Outcome {
    let text = serde_json::to_string_pretty(report).map_err(|e| config(e.to_string()))?;
    // a closed pipe (`dlvlab catalog | head`) is not an error
    let _ = writeln!(io::stdout().lock(), "{text}");
    if let Some(p) = out {
        fs::write(p, text + "\n").map_err(|e| config(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn parse_solution(s: &str) -> std::result::Result<SolutionId, Failure> {
    SolutionId::parse(s).ok_or_else(|| config(format!("unknown solution {s:?}")))
}

fn build_solution(
    id: SolutionId,
    params: Option<SystemParams>,
    consts: Option<Constants>,
) -> Result<ExactSolution, Failure> {
    let def = ExactSolution::default_for(id);
    Ok(ExactSolution::new(id, params.unwrap_or(def.params), consts.unwrap_or(def.consts))?)
}

fn solution_from_args(a: &SolutionArgs) -> Result<ExactSolution, Failure> {
    let id = parse_solution(&a.solution)?;
    let params = a.params.as_deref().map(|s| json_arg("params", s)).transpose()?;
    let consts = a.constants.as_deref().map(|s| json_arg("constants", s)).transpose()?;
    build_solution(id, params, consts)
}

/// Moves a solution to the frame whose target system has the requested kind.
fn in_system(sol: ExactSolution, kind: Option<SystemKind>) -> Result<ExactSolution, Failure> {
    let Some(kind) = kind else { return Ok(sol) };
    let moved = match kind {
        SystemKind::PdeFull => sol.to_lab_frame()?,
        SystemKind::PdeRotatedFree => sol.to_rotated_frame()?,
        SystemKind::PdeRadial => sol.with_frame(Frame::Radial)?,
        other => {
            return Err(config(format!(
                "{other} is not a solution target; use pde_full, pde_rotated_free or pde_radial"
            )))
        }
    };
    let got = moved.target_system().kind;
    if got != kind {
        return Err(config(format!("{} does not solve {kind} in any frame (its target is {got})", moved.id)));
    }
    Ok(moved)
}

fn cmd_catalog() -> Outcome {
    let systems: Vec<_> = SystemKind::ALL
        .iter()
        .map(|k| json!({ "kind": k.name(), "components": k.components(), "equations": k.description() }))
        .collect();
    emit(&json!({ "schema": 1, "solutions": list_solutions(), "systems": systems }), None)
}

fn cmd_certify(a: CertifyArgs, seed: u64) -> Outcome {
    let kind = match a.system.as_deref() {
        Some(s) => Some(SystemKind::parse(s).ok_or_else(|| config(format!("unknown system kind {s:?}")))?),
        None => None,
    };
    let sol = in_system(solution_from_args(&a.sol)?, kind)?;
    let spec = sol.target_system();
    let rep = certify(&spec, &sol, &sol.default_samples(seed, a.samples), a.tol)?;
    emit(&rep, a.out.as_deref())?;
    verdict(rep.pass)
}

fn cmd_verify(a: VerifyArgs, seed: u64) -> Outcome {
    let cases: Vec<CaseId> = if a.case.eq_ignore_ascii_case("all") {
        CaseId::TABLE.to_vec()
    } else {
        let c = CaseId::parse(&a.case).filter(|c| *c != CaseId::Custom);
        vec![c.ok_or_else(|| config(format!("unknown case {:?}; expected all, case1..case11", a.case)))?]
    };
    let mut reports = Vec::new();
    for case in cases {
        let rep = match &a.stream_params {
            Some(s) => {
                if a.case.eq_ignore_ascii_case("all") {
                    return Err(config("--stream-params needs a single case"));
                }
                let mut spec = default_stream_spec(case)?;
                spec.params = json_arg::<StreamParams>("stream params", s)?;
                verify_stream(&spec, &SystemParams::new(1.0, 2.0, 3.0), a.samples, seed)?
            }
            None => verify_case(case, a.samples, seed)?,
        };
        reports.push(rep);
    }
    let pass = reports.iter().all(|r| r.pass);
    emit(&json!({ "schema": 1, "seed": seed, "pass": pass, "cases": reports }), a.out.as_deref())?;
    verdict(pass)
}

fn generators_for(spec: &SystemSpec) -> Result<Vec<LieGenerator>, Failure> {
    let stream = spec.stream.as_ref().ok_or_else(|| config("flow needs a convective system"))?;
    let mut gens = builtin_generators(stream, &spec.params)?;
    if stream.case_id() == CaseId::Case10 {
        for g in case10_algebra() {
            if !gens.iter().any(|h| h.label == g.label) {
                gens.push(g);
            }
        }
    }
    Ok(gens)
}

#[derive(Serialize)]
struct FlowReport {
    schema: u32,
    generator: String,
    eps: f64,
    certification: dlv_core::residual::ResidualReport,
}

fn cmd_flow(a: FlowArgs, seed: u64) -> Outcome {
    if !a.eps.is_finite() {
        return Err(config("eps must be finite"));
    }
    let sol = solution_from_args(&a.sol)?.to_lab_frame()?;
    let spec = sol.target_system();
    let gens = generators_for(&spec)?;
    let labels: Vec<&str> = gens.iter().map(|g| g.label.as_str()).collect();
    let g = gens
        .iter()
        .find(|g| g.label.eq_ignore_ascii_case(&a.generator))
        .ok_or_else(|| config(format!("unknown generator {:?}; available: {}", a.generator, labels.join(", "))))?
        .clone();
    let label = g.label.clone();
    let samples = sol.default_samples(seed, a.samples);
    let field: SharedField = Transported::new(Arc::new(sol), g, a.eps).shared();
    let rep = certify(&spec, field.as_ref(), &samples, a.tol)?;
    let pass = rep.pass;
    emit(&FlowReport { schema: 1, generator: label, eps: a.eps, certification: rep }, a.out.as_deref())?;
    verdict(pass)
}

fn cmd_run(a: RunArgs, study: bool) -> Outcome {
    let text = fs::read_to_string(&a.config).map_err(|e| config(format!("cannot read {}: {e}", a.config.display())))?;
    let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| config(format!("invalid run config: {e}")))?;
    let sol = build_solution(cfg.solution, cfg.params, cfg.constants)?;
    let kind = cfg.system.unwrap_or(match cfg.grid {
        GridConfig::Plane(_) => SystemKind::PdeFull,
        GridConfig::Radial(_) => SystemKind::PdeRadial,
    });
    let sol = in_system(sol, Some(kind))?;
    let spec = sol.target_system();
    let exact: SharedField = Arc::new(sol);
    match cfg.grid {
        GridConfig::Plane(grid) => {
            let sc = SimConfig { grid, t0: cfg.t0, t_end: cfg.t_end, cfl: cfg.cfl, scheme: cfg.scheme };
            if study {
                let rep = convergence_study(&sc, &spec, exact, cfg.levels)?;
                emit(&rep, a.out.as_deref())
            } else {
                let (state, rep) = simulate(&sc, &spec, exact)?;
                if let Some(p) = &a.csv {
                    let f = fs::File::create(p).map_err(|e| config(format!("cannot write {}: {e}", p.display())))?;
                    let mut w = BufWriter::new(f);
                    state.write_csv(&grid, true, &mut w)?;
                    w.flush().map_err(|e| config(e.to_string()))?;
                }
                emit(&rep, a.out.as_deref())
            }
        }
        GridConfig::Radial(grid) => {
            let rc = RadialConfig { grid, t0: cfg.t0, t_end: cfg.t_end, cfl: cfg.cfl, scheme: cfg.scheme };
            if study {
                let rep = radial_convergence(&rc, &spec, exact, cfg.levels)?;
                emit(&rep, a.out.as_deref())
            } else {
                let (state, rep) = simulate_radial(&rc, &spec, exact)?;
                if let Some(p) = &a.csv {
                    let f = fs::File::create(p).map_err(|e| config(format!("cannot write {}: {e}", p.display())))?;
                    let mut w = csv_writer(BufWriter::new(f));
                    let io = |e: csv::Error| config(e.to_string());
                    w.write_record(["t", "r", "u", "v", "w"]).map_err(io)?;
                    for (i, v) in state.iter().enumerate() {
                        let r = grid.node(i);
                        w.write_record([cfg.t_end, r, v[0], v[1], v[2]].map(|x| format!("{x:.14e}"))).map_err(io)?;
                    }
                    w.flush().map_err(|e| config(e.to_string()))?;
                }
                emit(&rep, a.out.as_deref())
            }
        }
    }
}

fn csv_writer<W: io::Write>(w: W) -> csv::Writer<W> {
    csv::Writer::from_writer(w)
}

fn cmd_figure(a: FigureArgs) -> Outcome {
    let id: FigureId = a.id.parse()?;
    let data = figure(id, a.nodes)?;
    fs::create_dir_all(&a.out_dir).map_err(|e| config(format!("cannot create {}: {e}", a.out_dir.display())))?;
    let write_err = |p: &Path, e: io::Error| config(format!("cannot write {}: {e}", p.display()));
    for panel in &data.panels {
        let p = a.out_dir.join(format!("{}.csv", panel.name));
        let f = fs::File::create(&p).map_err(|e| write_err(&p, e))?;
        panel.write_csv(BufWriter::new(f))?;
    }
    let gp = a.out_dir.join(format!("{id}.gp"));
    fs::write(&gp, gnuplot_script(&data)).map_err(|e| write_err(&gp, e))?;
    let report = a.out_dir.join(format!("{id}.json"));
    emit(&data, Some(&report))
}
