//! Projectable point-symmetry generators with fiber-affine action.
//!
//! `X = xi^0 d_t + xi^1 d_x + xi^2 d_y + sum_i (sum_j A_ij u_j + b_i) d_{u_i}`
//! with every coefficient a function of `(t, x, y)` only.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::numerics::{default_steps, fd_jets, sample_points, Jet2, Point, SampleSpec};

/// Coefficient closure over jets of `(t, x, y)`.
pub type JetFn = Arc<dyn Fn(&[Jet2; 3]) -> Jet2 + Send + Sync>;
/// Value-only coefficient closure.
pub type ValueFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
/// Function of time.
pub type TimeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A coefficient function of `(t, x, y)`.
#[derive(Clone)]
pub enum Coef {
    Zero,
    Const(f64),
    /// Exact jets by propagation; composes with any jet-valued arguments.
    Jet(JetFn),
    /// Values only; jets by finite differences.
    Values(ValueFn),
}

impl fmt::Debug for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Zero => f.write_str("0"),
            Coef::Const(c) => write!(f, "{c}"),
            Coef::Jet(_) => f.write_str("<jet fn>"),
            Coef::Values(_) => f.write_str("<value fn>"),
        }
    }
}

impl Coef {
    pub fn jet<F>(f: F) -> Coef
    where
        F: Fn(&[Jet2; 3]) -> Jet2 + Send + Sync + 'static,
    {
        Coef::Jet(Arc::new(f))
    }

    pub fn values<F>(f: F) -> Coef
    where
        F: Fn(Point) -> f64 + Send + Sync + 'static,
    {
        Coef::Values(Arc::new(f))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coef::Zero) || matches!(self, Coef::Const(c) if *c == 0.0)
    }

    pub fn value(&self, p: Point) -> f64 {
        match self {
            Coef::Zero => 0.0,
            Coef::Const(c) => *c,
            Coef::Jet(f) => f(&[Jet2::constant(p[0]), Jet2::constant(p[1]), Jet2::constant(p[2])]).v,
            Coef::Values(f) => f(p),
        }
    }

    /// Jet at the seeded point `p`.
    pub fn jet_at(&self, p: Point) -> Jet2 {
        match self {
            Coef::Zero => Jet2::default(),
            Coef::Const(c) => Jet2::constant(*c),
            Coef::Jet(f) => f(&Jet2::seed(p)),
            Coef::Values(f) => {
                let [j] = fd_jets(|q| Ok::<_, crate::Error>([f(q)]), p, default_steps(p)).expect("infallible");
                j
            }
        }
    }

    /// Composition with jet-valued arguments, when the coefficient supports it.
    pub fn compose(&self, args: &[Jet2; 3]) -> Option<Jet2> {
        match self {
            Coef::Zero => Some(Jet2::default()),
            Coef::Const(c) => Some(Jet2::constant(*c)),
            Coef::Jet(f) => Some(f(args)),
            Coef::Values(_) => None,
        }
    }
}

/// Parameters of the generator template solving the determining equations:
/// `xi^0 = 2 c0 t + t0`, `xi^1 = c0 x + p0 y + p1`, `xi^2 = c0 y - p0 x + p2`,
/// `eta^1 = -2 c0 u`, `eta^2 = -2 c0 v`, `eta^3 = c1 u + c2 v + (c1 + c2 - 2 c0) w + H`.
#[derive(Clone)]
pub struct DeParams {
    pub c0: f64,
    pub t0: f64,
    pub c1: f64,
    pub c2: f64,
    pub p0: TimeFn,
    pub p1: TimeFn,
    pub p2: TimeFn,
    /// The function fixed by integrating the first two determining equations.
    pub q: TimeFn,
    pub h: Coef,
}

impl fmt::Debug for DeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DeParams {{ c0: {}, t0: {}, c1: {}, c2: {}, p(0) = ({}, {}, {}), q(0) = {}, h: {:?} }}",
            self.c0,
            self.t0,
            self.c1,
            self.c2,
            (self.p0)(0.0),
            (self.p1)(0.0),
            (self.p2)(0.0),
            (self.q)(0.0),
            self.h
        )
    }
}

fn zero_t() -> TimeFn {
    Arc::new(|_| 0.0)
}

impl Default for DeParams {
    fn default() -> Self {
        DeParams {
            c0: 0.0,
            t0: 0.0,
            c1: 0.0,
            c2: 0.0,
            p0: zero_t(),
            p1: zero_t(),
            p2: zero_t(),
            q: zero_t(),
            h: Coef::Zero,
        }
    }
}

impl DeParams {
    pub fn c0(mut self, c0: f64) -> Self {
        self.c0 = c0;
        self
    }
    pub fn t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }
    pub fn p0(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.p0 = Arc::new(f);
        self
    }
    pub fn p1(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.p1 = Arc::new(f);
        self
    }
    pub fn p2(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.p2 = Arc::new(f);
        self
    }
    pub fn q(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.q = Arc::new(f);
        self
    }
    pub fn c12(mut self, c1: f64, c2: f64) -> Self {
        self.c1 = c1;
        self.c2 = c2;
        self
    }
    pub fn h(mut self, h: Coef) -> Self {
        self.h = h;
        self
    }

    /// Template `xi` at a point.
    pub fn xi(&self, p: Point) -> [f64; 3] {
        let [t, x, y] = p;
        let (p0, p1, p2) = ((self.p0)(t), (self.p1)(t), (self.p2)(t));
        [2.0 * self.c0 * t + self.t0, self.c0 * x + p0 * y + p1, self.c0 * y - p0 * x + p2]
    }

    /// Template fiber matrix.
    pub fn eta_lin(&self) -> [[f64; 3]; 3] {
        let s = -2.0 * self.c0;
        [[s, 0.0, 0.0], [0.0, s, 0.0], [self.c1, self.c2, self.c1 + self.c2 + s]]
    }
}

/// A point-symmetry generator.
#[derive(Clone)]
pub struct LieGenerator {
    pub label: String,
    pub xi: [Coef; 3],
    /// `A_ij`: coefficient of `u_j` in `eta^i`.
    pub lin: [[Coef; 3]; 3],
    /// `b_i`.
    pub aff: [Coef; 3],
    pub de: Option<DeParams>,
}

impl fmt::Debug for LieGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieGenerator").field("label", &self.label).field("xi", &self.xi).field("de", &self.de).finish()
    }
}

fn zero3() -> [Coef; 3] {
    [Coef::Zero, Coef::Zero, Coef::Zero]
}

impl LieGenerator {
    pub fn new(label: impl Into<String>) -> Self {
        LieGenerator { label: label.into(), xi: zero3(), lin: [zero3(), zero3(), zero3()], aff: zero3(), de: None }
    }

    pub fn with_xi(mut self, xi: [Coef; 3]) -> Self {
        self.xi = xi;
        self
    }

    /// `-2s (u d_u + v d_v + w d_w)`.
    pub fn with_scaling(mut self, s: f64) -> Self {
        for i in 0..3 {
            self.lin[i][i] = Coef::Const(-2.0 * s);
        }
        self
    }

    pub fn with_lin(mut self, i: usize, j: usize, c: Coef) -> Self {
        self.lin[i][j] = c;
        self
    }

    pub fn with_aff(mut self, i: usize, c: Coef) -> Self {
        self.aff[i] = c;
        self
    }

    pub fn with_de(mut self, de: DeParams) -> Self {
        self.de = Some(de);
        self
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn xi_at(&self, p: Point) -> [f64; 3] {
        [self.xi[0].value(p), self.xi[1].value(p), self.xi[2].value(p)]
    }

    pub fn lin_at(&self, p: Point) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.lin[i][j].value(p);
            }
        }
        m
    }

    pub fn aff_at(&self, p: Point) -> [f64; 3] {
        [self.aff[0].value(p), self.aff[1].value(p), self.aff[2].value(p)]
    }

    /// All 15 coefficient values, in the order xi, A (row-major), b.
    pub fn coefficients(&self, p: Point) -> [f64; 15] {
        let mut out = [0.0; 15];
        out[..3].copy_from_slice(&self.xi_at(p));
        let m = self.lin_at(p);
        for i in 0..3 {
            out[3 + 3 * i..6 + 3 * i].copy_from_slice(&m[i]);
        }
        out[12..].copy_from_slice(&self.aff_at(p));
        out
    }

    /// Vector field on the extended space `(t, x, y, u, v, w)`.
    pub fn field(&self, z: &[f64; 6]) -> [f64; 6] {
        let p = [z[0], z[1], z[2]];
        let xi = self.xi_at(p);
        let a = self.lin_at(p);
        let b = self.aff_at(p);
        let mut out = [xi[0], xi[1], xi[2], 0.0, 0.0, 0.0];
        for i in 0..3 {
            out[3 + i] = b[i] + a[i][0] * z[3] + a[i][1] * z[4] + a[i][2] * z[5];
        }
        out
    }

    /// `-self`.
    pub fn neg(&self) -> LieGenerator {
        self.scaled(-1.0, format!("-{}", self.label))
    }

    /// `c * self`.
    pub fn scaled(&self, c: f64, label: impl Into<String>) -> LieGenerator {
        let sc = |k: &Coef| -> Coef {
            match k {
                Coef::Zero => Coef::Zero,
                Coef::Const(v) => Coef::Const(c * v),
                Coef::Jet(f) => {
                    let f = f.clone();
                    Coef::jet(move |a| f(a) * c)
                }
                Coef::Values(f) => {
                    let f = f.clone();
                    Coef::values(move |p| c * f(p))
                }
            }
        };
        LieGenerator {
            label: label.into(),
            xi: self.xi.clone().map(|k| sc(&k)),
            lin: self.lin.clone().map(|row| row.map(|k| sc(&k))),
            aff: self.aff.clone().map(|k| sc(&k)),
            de: None,
        }
    }
}

fn grad_dot(xi: &[f64; 3], j: &Jet2) -> f64 {
    xi[0] * j.g[0] + xi[1] * j.g[1] + xi[2] * j.g[2]
}

/// Commutator `[a, b]`, with value-only coefficients computed from the jets of
/// both arguments.
pub fn lie_bracket(a: &LieGenerator, b: &LieGenerator) -> LieGenerator {
    let label = format!("[{}, {}]", a.label, b.label);
    let a = Arc::new(a.clone());
    let b = Arc::new(b.clone());
    let xi = std::array::from_fn(|k| {
        let (a, b) = (a.clone(), b.clone());
        Coef::values(move |p| {
            let (xa, xb) = (a.xi_at(p), b.xi_at(p));
            grad_dot(&xa, &b.xi[k].jet_at(p)) - grad_dot(&xb, &a.xi[k].jet_at(p))
        })
    });
    let lin = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (a, b) = (a.clone(), b.clone());
            Coef::values(move |p| {
                let (xa, xb) = (a.xi_at(p), b.xi_at(p));
                let (ma, mb) = (a.lin_at(p), b.lin_at(p));
                let mut prod = 0.0;
                for k in 0..3 {
                    prod += mb[i][k] * ma[k][j] - ma[i][k] * mb[k][j];
                }
                grad_dot(&xa, &b.lin[i][j].jet_at(p)) - grad_dot(&xb, &a.lin[i][j].jet_at(p)) + prod
            })
        })
    });
    let aff = std::array::from_fn(|i| {
        let (a, b) = (a.clone(), b.clone());
        Coef::values(move |p| {
            let (xa, xb) = (a.xi_at(p), b.xi_at(p));
            let (ma, mb) = (a.lin_at(p), b.lin_at(p));
            let (ba, bb) = (a.aff_at(p), b.aff_at(p));
            let mut prod = 0.0;
            for k in 0..3 {
                prod += mb[i][k] * ba[k] - ma[i][k] * bb[k];
            }
            grad_dot(&xa, &b.aff[i].jet_at(p)) - grad_dot(&xb, &a.aff[i].jet_at(p)) + prod
        })
    });
    LieGenerator { label, xi, lin, aff, de: None }
}

/// Largest coefficient difference at `n` seeded points of `[-3, 3]^3`.
pub fn coefficient_gap(a: &LieGenerator, b: &LieGenerator, n: usize, seed: u64) -> Result<f64> {
    let spec = SampleSpec::new(seed, n, (-3.0, 3.0), (-3.0, 3.0), (-3.0, 3.0)).with_margin(0.0);
    let pts = sample_points(&spec, |_, _| true)?;
    let mut gap: f64 = 0.0;
    for p in pts {
        let (ca, cb) = (a.coefficients(p), b.coefficients(p));
        for k in 0..15 {
            gap = gap.max((ca[k] - cb[k]).abs());
        }
    }
    Ok(gap)
}

/// Equality by coefficient sampling at 50 points with tolerance `1e-10`.
pub fn generators_agree(a: &LieGenerator, b: &LieGenerator, seed: u64) -> Result<bool> {
    Ok(coefficient_gap(a, b, 50, seed)? < 1e-10)
}

/// The zero generator.
pub fn zero_generator() -> LieGenerator {
    LieGenerator::new("0")
}
