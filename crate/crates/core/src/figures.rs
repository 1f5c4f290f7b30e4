//! Surface data for the three published plots of the rational lab-frame
//! solution, and the check of the claim that the product dominates both
//! reactants.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solutions::{Constants, ExactSolution, SolutionId, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
}

impl FigureId {
    pub const ALL: [FigureId; 3] = [FigureId::Fig1, FigureId::Fig2, FigureId::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure {s:?}; expected fig1, fig2 or fig3")))
    }
}

/// Constants of the first two plots.
pub fn figure_constants(id: FigureId) -> Constants {
    let base = Constants { alpha1: 0.5, alpha2: 0.25, c1: 2.0, c3: -15.0, c4: 55.0, ..Default::default() };
    match id {
        FigureId::Fig1 | FigureId::Fig2 => base,
        FigureId::Fig3 => Constants { c3: 5.0, c4: 10.0, ..base },
    }
}

pub fn figure_solution(id: FigureId) -> Result<ExactSolution> {
    ExactSolution::new(SolutionId::Rational, SystemParams::new(1.0, 2.0, 3.0), figure_constants(id))?.to_lab_frame()
}

/// Interval covered by the periodic solution in the text.
pub const TIME_WINDOW: (f64, f64) = (0.0, PI);

/// One surface: rows `t, x, y, u, v, w`.
#[derive(Debug, Clone, Serialize)]
pub struct Panel {
    pub name: String,
    /// Which coordinate is held fixed, and its value.
    pub fixed: (String, f64),
    #[serde(skip)]
    pub rows: Vec<[f64; 6]>,
    pub n: usize,
}

impl Panel {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(&self.rows, out)
    }
}

/// CSV with header `t,x,y,u,v,w` and 15 significant digits.
pub fn write_rows<W: Write>(rows: &[[f64; 6]], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Config(format!("csv output failed: {e}"));
    w.write_record(["t", "x", "y", "u", "v", "w"]).map_err(io)?;
    for r in rows {
        w.write_record(r.iter().map(|v| format!("{v:.14e}"))).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Config(format!("csv output failed: {e}")))
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64)
}

/// Dominance of the product over both reactants on a grid of `Omega`.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub grid: usize,
    pub times: Vec<f64>,
    pub valid_samples: usize,
    pub violations: usize,
    /// Smallest `w - max(u, v)` over valid samples.
    pub min_margin: f64,
    pub holds: bool,
}

/// Checks `w > max(u, v)` at `n x n` nodes of `[-1, 1]^2` for each time.
pub fn dominance_check(sol: &ExactSolution, n: usize, times: &[f64]) -> Result<DominanceReport> {
    let mut valid = 0;
    let mut bad = 0;
    let mut min_margin = f64::INFINITY;
    for &t in times {
        for x in linspace(-1.0, 1.0, n) {
            for y in linspace(-1.0, 1.0, n) {
                let p = [t, x, y];
                if !sol.validity(p, 0.0) {
                    continue;
                }
                let [u, v, w] = sol.values_at(p)?;
                valid += 1;
                let m = w - u.max(v);
                min_margin = min_margin.min(m);
                if !(m > 0.0) {
                    bad += 1;
                }
            }
        }
    }
    Ok(DominanceReport {
        grid: n,
        times: times.to_vec(),
        valid_samples: valid,
        violations: bad,
        min_margin,
        holds: valid > 0 && bad == 0,
    })
}

/// `0, pi/8, ..., pi`.
pub fn dominance_times() -> Vec<f64> {
    (0..=8).map(|k| k as f64 * PI / 8.0).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureData {
    pub schema: u32,
    pub figure: FigureId,
    pub params: SystemParams,
    pub constants: Constants,
    pub panels: Vec<Panel>,
    pub dominance: DominanceReport,
    /// Discrepancies between captions and text.
    pub notes: Vec<String>,
}

/// Surfaces of a figure with `n` nodes per direction.
pub fn figure(id: FigureId, n: usize) -> Result<FigureData> {
    if n < 2 {
        return Err(Error::Config("figure grids need at least 2 nodes".into()));
    }
    let sol = figure_solution(id)?;
    let mut panels = Vec::new();
    let mut notes = Vec::new();
    match id {
        FigureId::Fig1 => {
            let labels = ["0", "pi/4", "pi/2", "3pi/2"];
            for (k, t0) in [0.0, PI / 4.0, PI / 2.0, 1.5 * PI].into_iter().enumerate() {
                if t0 > TIME_WINDOW.1 {
                    notes.push(format!(
                        "caption time t0 = {} lies outside the interval [0, pi] named in the text; emitted as printed",
                        labels[k]
                    ));
                }
                let mut rows = Vec::with_capacity(n * n);
                for y in linspace(-1.0, 1.0, n) {
                    for x in linspace(-1.0, 1.0, n) {
                        let [u, v, w] = sol.values_at([t0, x, y])?;
                        rows.push([t0, x, y, u, v, w]);
                    }
                }
                panels.push(Panel { name: format!("{}_t{}", id, k), fixed: ("t".into(), t0), rows, n });
            }
        }
        FigureId::Fig2 | FigureId::Fig3 => {
            for (k, y0) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
                let mut rows = Vec::with_capacity(n * n);
                for x in linspace(-1.0, 1.0, n) {
                    for t in linspace(TIME_WINDOW.0, TIME_WINDOW.1, n) {
                        let [u, v, w] = sol.values_at([t, x, y0])?;
                        rows.push([t, x, y0, u, v, w]);
                    }
                }
                panels.push(Panel { name: format!("{}_y{}", id, k), fixed: ("y".into(), y0), rows, n });
            }
        }
    }
    let dominance = dominance_check(&sol, 101, &dominance_times())?;
    Ok(FigureData { schema: 1, figure: id, params: sol.params, constants: sol.consts, panels, dominance, notes })
}

/// Gnuplot script rendering every panel from `<panel name>.csv` next to it.
pub fn gnuplot_script(data: &FigureData) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset key top left\nset hidden3d\n");
    s.push_str("set terminal pngcairo size 900,700\n");
    for p in &data.panels {
        let (a, b, la, lb) = match p.fixed.0.as_str() {
            "t" => (2, 3, "x", "y"),
            _ => (1, 2, "t", "x"),
        };
        s.push_str(&format!("set output '{}.png'\n", p.name));
        s.push_str(&format!("set title '{} ({} = {:.6})'\n", data.figure, p.fixed.0, p.fixed.1));
        s.push_str(&format!("set xlabel '{la}'\nset ylabel '{lb}'\n"));
        s.push_str(&format!("set dgrid3d {},{}\n", p.n, p.n));
        s.push_str(&format!(
            "splot '{0}.csv' every ::1 using {a}:{b}:4 with lines lc rgb 'blue' title 'u', \\\n      '{0}.csv' every ::1 using {a}:{b}:5 with lines lc rgb 'gold' title 'v', \\\n      '{0}.csv' every ::1 using {a}:{b}:6 with lines lc rgb 'dark-green' title 'w'\n",
            p.name
        ));
    }
    s
}
