//! Adaptive Gauss–Kronrod (7/15) quadrature and cached primitives.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{RadialField, RadialProfile};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivision_depth: u32,
    /// Base point for antiderivatives; `None` picks the space default.
    pub r0: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivision_depth: 40,
            r0: None,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        Ok(())
    }

    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureConfig {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..*self
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Panel {
    kronrod: f64,
    error: f64,
    abs_integral: f64,
}

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        k += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    let kronrod = k * h;
    let abs_integral = abs * h.abs();
    let roundoff = 50.0 * f64::EPSILON * abs_integral;
    Panel {
        kronrod,
        error: ((k - g) * h).abs().max(roundoff),
        abs_integral,
    }
}

/// `∫_a^b f` with an error estimate; `b < a` is allowed.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    if a == b {
        return Ok((0.0, 0.0));
    }
    let whole = gk15(f, a, b);
    let tol = cfg.abs_tol.max(cfg.rel_tol * whole.kronrod.abs());
    let (value, error, ok) = refine(f, a, b, whole, tol, cfg.max_subdivision_depth);
    if !ok || !value.is_finite() {
        return Err(Error::QuadratureFailure {
            a,
            b,
            estimate: value,
            error_bound: error,
        });
    }
    Ok((value, error))
}

fn refine(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panel: Panel, tol: f64, depth: u32) -> (f64, f64, bool) {
    if !panel.kronrod.is_finite() {
        return (panel.kronrod, f64::INFINITY, false);
    }
    let roundoff = 50.0 * f64::EPSILON * panel.abs_integral;
    if panel.error <= tol || panel.error <= roundoff {
        return (panel.kronrod, panel.error, true);
    }
    if depth == 0 {
        return (panel.kronrod, panel.error, false);
    }
    let mid = 0.5 * (a + b);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    let (lv, le, lok) = refine(f, a, mid, left, 0.5 * tol, depth - 1);
    let (rv, re, rok) = refine(f, mid, b, right, 0.5 * tol, depth - 1);
    (lv + rv, le + re, lok && rok)
}

/// `∫_{r0}^{r} g`.
pub fn primitive(g: &RadialField, r0: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(integrate(&|s| g.value(s), r0, r, cfg)?.0)
}

/// Antiderivative of a radial integrand based at `r0`, with cumulative
/// values cached on a monotone grid.
///
/// Values come from the cache plus one short adaptive integral from the
/// nearest node; derivatives of order `n ≥ 1` are the integrand's
/// derivatives of order `n-1`. A quadrature failure during evaluation
/// yields NaN, which the operators report as a numeric-evaluation error.
pub struct Primitive {
    integrand: RadialField,
    nodes: Vec<f64>,
    values: Vec<f64>,
    errors: Vec<f64>,
    cfg: QuadratureConfig,
}

impl Primitive {
    /// Builds the cache on `[lo, hi]` (extended to contain `r0`) with
    /// `segments` uniform cells.
    pub fn new(
        integrand: RadialField,
        r0: f64,
        lo: f64,
        hi: f64,
        segments: usize,
        cfg: &QuadratureConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        let lo = lo.min(r0);
        let hi = hi.max(r0);
        let segments = segments.max(1);
        let mut nodes: Vec<f64> = (0..=segments)
            .map(|i| lo + (hi - lo) * i as f64 / segments as f64)
            .collect();
        nodes.push(r0);
        nodes.sort_by(|a, b| a.total_cmp(b));
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-14 * (1.0 + b.abs()));
        let base = nodes
            .iter()
            .position(|&x| (x - r0).abs() < 1e-14 * (1.0 + r0.abs()))
            .expect("base point is a node");
        nodes[base] = r0;
        let mut values = vec![0.0; nodes.len()];
        let mut errors = vec![0.0; nodes.len()];
        let f = |s: f64| integrand.value(s);
        for j in base + 1..nodes.len() {
            let (v, e) = integrate(&f, nodes[j - 1], nodes[j], cfg)?;
            values[j] = values[j - 1] + v;
            errors[j] = errors[j - 1] + e;
        }
        for j in (0..base).rev() {
            let (v, e) = integrate(&f, nodes[j + 1], nodes[j], cfg)?;
            values[j] = values[j + 1] + v;
            errors[j] = errors[j + 1] + e;
        }
        Ok(Primitive {
            integrand,
            nodes,
            values,
            errors,
            cfg: *cfg,
        })
    }

    fn nearest(&self, r: f64) -> usize {
        match self.nodes.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => i,
            Err(i) => {
                if i == 0 {
                    0
                } else if i == self.nodes.len() || (r - self.nodes[i - 1]) <= (self.nodes[i] - r) {
                    i - 1
                } else {
                    i
                }
            }
        }
    }

    /// Value and error bound at `r`.
    pub fn value_with_error(&self, r: f64) -> (f64, f64) {
        let j = self.nearest(r);
        match integrate(&|s| self.integrand.value(s), self.nodes[j], r, &self.cfg) {
            Ok((v, e)) => (self.values[j] + v, self.errors[j] + e),
            Err(_) => (f64::NAN, f64::INFINITY),
        }
    }

    /// Largest cumulative error bound on the grid.
    pub fn max_error(&self) -> f64 {
        self.errors.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest `|value|` on the grid.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    pub fn into_field(self, label: impl Into<String>) -> (RadialField, std::sync::Arc<Primitive>) {
        let shared = std::sync::Arc::new(self);
        let field = RadialField::from_profile(Shared(shared.clone())).with_label(label);
        (field, shared)
    }
}

struct Shared(std::sync::Arc<Primitive>);

impl RadialProfile for Shared {
    fn derivatives(&self, r: f64) -> [f64; 5] {
        let p = &self.0;
        let g = p.integrand.derivatives(r);
        [p.value_with_error(r).0, g[0], g[1], g[2], g[3]]
    }

    fn value(&self, r: f64) -> f64 {
        self.0.value_with_error(r).0
    }
}
