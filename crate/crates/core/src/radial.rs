//! Four-function bases of radial biharmonic functions, numeric and closed
//! form, and least-squares span comparison between function lists.
//!
//! Every radial Laplacian handled here has the divergence form
//! `Lu = (P u')' / ρ`. For a warped model space `P = ρ = σ^{m-1}`; for the
//! conformally flat sphere and hyperbolic models in the coordinate `t`,
//! `P = λ^{m-2} t^{m-1}` and `ρ = λ^m t^{m-1}` with `λ = 2/(1 ± t²)`. With
//! `y = ∫1/P`, `I₁ = ∫ρ`, `I₂ = ∫yρ`, `I₃ = ∫y²ρ` the functions
//! `1, y, yI₁ - I₂, yI₂ - I₃` span the kernel of `L²`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{self, ModelSpace, RadialField, WarpKind};
use crate::jets::{Jet1, Scalar};
use crate::quadrature::{Primitive, QuadratureConfig};

pub use crate::quadrature::primitive;

const SEGMENTS: usize = 48;

/// Which radial Laplacian a basis is biharmonic for.
#[derive(Clone, Debug)]
pub enum Chart {
    /// Geodesic distance `r` on a warped model space.
    Warped(ModelSpace),
    /// Conformal coordinate `t`; `sign = +1` sphere, `-1` hyperbolic.
    Conformal { sign: i32, m: usize },
}

#[derive(Clone, Debug)]
pub struct RadialOperator {
    chart: Chart,
    flux: RadialField,
    density: RadialField,
    domain: (f64, f64),
}

impl RadialOperator {
    pub fn warped(space: &ModelSpace) -> Self {
        let m = space.dim() as i32;
        let sigma = space.warp().sigma().clone();
        let s2 = sigma.clone();
        let weight = RadialField::from_jet_fn(move |r| s2.eval(r).powi(m - 1));
        RadialOperator {
            chart: Chart::Warped(space.clone()),
            flux: weight.clone(),
            density: weight,
            domain: space.warp().domain(),
        }
    }

    pub fn conformal(sign: i32, m: usize) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument(format!("conformal sign must be ±1, got {sign}")));
        }
        if m < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {m}")));
        }
        let s = sign as f64;
        let mi = m as i32;
        let lambda = move |t: Jet1| ((t * t * s) + 1.0).recip() * 2.0;
        let flux = RadialField::from_jet_fn(move |t| lambda(t).powi(mi - 2) * t.powi(mi - 1));
        let density = RadialField::from_jet_fn(move |t| lambda(t).powi(mi) * t.powi(mi - 1));
        let hi = if sign == 1 { f64::INFINITY } else { 1.0 };
        Ok(RadialOperator {
            chart: Chart::Conformal { sign, m },
            flux,
            density,
            domain: (0.0, hi),
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        match &self.chart {
            Chart::Warped(s) => s.dim(),
            Chart::Conformal { m, .. } => *m,
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// `P` in `Lu = (P u')'/ρ`.
    pub fn flux(&self) -> &RadialField {
        &self.flux
    }

    /// `ρ` in `Lu = (P u')'/ρ`.
    pub fn density(&self) -> &RadialField {
        &self.density
    }

    /// Default working interval, away from the singular endpoints.
    pub fn default_interval(&self) -> (f64, f64) {
        match &self.chart {
            Chart::Warped(s) => s.default_interval(),
            Chart::Conformal { sign: 1, .. } => ((0.15f64).tan(), ((PI - 0.3) / 2.0).tan()),
            Chart::Conformal { .. } => ((0.15f64).tanh(), (1.25f64).tanh()),
        }
    }

    pub fn default_base_point(&self) -> f64 {
        match &self.chart {
            Chart::Warped(s) => s.default_base_point(),
            Chart::Conformal { sign: 1, .. } => 1.0,
            Chart::Conformal { .. } => (0.5f64).tanh(),
        }
    }

    /// `(Lu, L²u)` at `s`.
    pub fn operators(&self, u: &RadialField, s: f64) -> Result<(f64, f64)> {
        if let Chart::Warped(space) = &self.chart {
            return Ok((
                geometry::laplacian_radial(space, u, s)?,
                geometry::bilaplacian_radial(space, u, s)?,
            ));
        }
        let (lo, hi) = self.domain;
        if !(s > lo && s < hi) {
            return Err(Error::OutOfDomain { r: s, lo, hi });
        }
        let p = Jet1(self.flux.derivatives(s));
        let rho = Jet1(self.density.derivatives(s));
        let apply = |v: Jet1| {
            let d1 = v.shift();
            (p * d1.shift() + p.shift() * d1) / rho
        };
        let lap = apply(Jet1(u.derivatives(s)));
        let bilap = apply(lap);
        if !lap.0[0].is_finite() || !bilap.0[0].is_finite() {
            return Err(Error::NumericEvaluation {
                context: format!("radial operator on {}", u.label()),
                at: vec![s],
            });
        }
        Ok((lap.0[0], bilap.0[0]))
    }

    pub fn laplacian(&self, u: &RadialField, s: f64) -> Result<f64> {
        Ok(self.operators(u, s)?.0)
    }

    pub fn bilaplacian(&self, u: &RadialField, s: f64) -> Result<f64> {
        Ok(self.operators(u, s)?.1)
    }

    /// The same function written in geodesic distance: `t = tan(r/2)` on
    /// the sphere, `t = tanh(r/2)` on hyperbolic space.
    pub fn to_geodesic(&self, u: &RadialField) -> RadialField {
        match self.chart {
            Chart::Warped(_) => u.clone(),
            Chart::Conformal { sign: 1, .. } => u.compose(|r| (r * 0.5).tan()).with_label(u.label()),
            Chart::Conformal { .. } => u.compose(|r| (r * 0.5).tanh()).with_label(u.label()),
        }
    }

    /// The warped model space the chart describes.
    pub fn geodesic_space(&self) -> Result<ModelSpace> {
        match &self.chart {
            Chart::Warped(s) => Ok(s.clone()),
            Chart::Conformal { sign: 1, m } => ModelSpace::spherical(*m),
            Chart::Conformal { m, .. } => ModelSpace::hyperbolic(*m),
        }
    }
}

#[derive(Clone)]
enum ErrorModel {
    Exact,
    Scaled(Arc<Primitive>, f64),
    Nested(Arc<Nested>, usize),
}

struct Nested {
    y: Arc<Primitive>,
    i1: Arc<Primitive>,
    i2: Arc<Primitive>,
    i3: Arc<Primitive>,
}

impl Nested {
    fn bound(&self, which: usize, r: f64) -> f64 {
        let (y, ey) = self.y.value_with_error(r);
        let ey_max = self.y.max_error().max(ey);
        let (i1, e1) = self.i1.value_with_error(r);
        let (i2, e2) = self.i2.value_with_error(r);
        let (_, e3) = self.i3.value_with_error(r);
        let e2 = e2 + ey_max * i1.abs();
        let e3 = e3 + 2.0 * self.y.max_abs().max(y.abs()) * ey_max * i1.abs();
        match which {
            1 => ey,
            2 => i1.abs() * ey + y.abs() * e1 + e2,
            3 => i2.abs() * ey + y.abs() * e2 + e3,
            _ => 0.0,
        }
    }
}

/// Four radial functions spanning the biharmonic radial functions of one
/// chart, each evaluable at any point of the chart's domain.
#[derive(Clone)]
pub struct RadialBasis {
    operator: RadialOperator,
    functions: Vec<RadialField>,
    errors: Vec<ErrorModel>,
    interval: (f64, f64),
    base_point: f64,
    config: QuadratureConfig,
    label: String,
}

impl std::fmt::Debug for RadialBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialBasis")
            .field("label", &self.label)
            .field("functions", &self.functions)
            .field("interval", &self.interval)
            .field("base_point", &self.base_point)
            .finish()
    }
}

/// Serializable summary of how a basis was built.
#[derive(Clone, Debug, Serialize)]
pub struct BasisMetadata {
    pub label: String,
    pub m: usize,
    pub r0: f64,
    pub interval: (f64, f64),
    pub tolerances: QuadratureConfig,
    pub functions: Vec<String>,
}

impl RadialBasis {
    pub fn operator(&self) -> &RadialOperator {
        &self.operator
    }

    pub fn space(&self) -> Option<&ModelSpace> {
        match &self.operator.chart {
            Chart::Warped(s) => Some(s),
            Chart::Conformal { .. } => None,
        }
    }

    pub fn functions(&self) -> &[RadialField] {
        &self.functions
    }

    pub fn function(&self, i: usize) -> &RadialField {
        &self.functions[i]
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.config
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn metadata(&self) -> BasisMetadata {
        BasisMetadata {
            label: self.label.clone(),
            m: self.operator.dim(),
            r0: self.base_point,
            interval: self.interval,
            tolerances: self.config,
            functions: self.functions.iter().map(|f| f.label().to_string()).collect(),
        }
    }

    /// Value of function `i` at `r` with a quadrature error bound.
    pub fn value_with_error(&self, i: usize, r: f64) -> (f64, f64) {
        let v = self.functions[i].value(r);
        let e = match &self.errors[i] {
            ErrorModel::Exact => 0.0,
            ErrorModel::Scaled(p, c) => c.abs() * p.value_with_error(r).1,
            ErrorModel::Nested(n, which) => n.bound(*which, r),
        };
        (v, e)
    }

    /// `n` equally spaced points of the working interval, endpoints included.
    pub fn sample_points(&self, n: usize) -> Vec<f64> {
        linspace(self.interval.0, self.interval.1, n)
    }

    /// Max `|L² wᵢ|` per function over `n` sample points.
    pub fn bilaplacian_residuals(&self, n: usize) -> Result<Vec<f64>> {
        let pts = self.sample_points(n);
        self.functions
            .iter()
            .map(|w| {
                let mut worst: f64 = 0.0;
                for &r in &pts {
                    worst = worst.max(self.operator.bilaplacian(w, r)?.abs());
                }
                Ok(worst)
            })
            .collect()
    }

    /// Max `|L wᵢ|` per function over `n` sample points.
    pub fn laplacian_magnitudes(&self, n: usize) -> Result<Vec<f64>> {
        let pts = self.sample_points(n);
        self.functions
            .iter()
            .map(|w| {
                let mut worst: f64 = 0.0;
                for &r in &pts {
                    worst = worst.max(self.operator.laplacian(w, r)?.abs());
                }
                Ok(worst)
            })
            .collect()
    }

    /// The basis functions rewritten in geodesic distance.
    pub fn geodesic_functions(&self) -> Vec<RadialField> {
        self.functions.iter().map(|f| self.operator.to_geodesic(f)).collect()
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

fn base_point(op: &RadialOperator, cfg: &QuadratureConfig) -> Result<f64> {
    let r0 = cfg.r0.unwrap_or_else(|| op.default_base_point());
    let (lo, hi) = op.domain();
    if !(r0 > lo && r0 < hi) || !r0.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "base point {r0} not strictly inside ({lo}, {hi})"
        )));
    }
    Ok(r0)
}

fn nested_basis(op: RadialOperator, cfg: &QuadratureConfig, label: String) -> Result<RadialBasis> {
    cfg.validate()?;
    let r0 = base_point(&op, cfg)?;
    let (lo, hi) = op.default_interval();
    let flux = op.flux.clone();
    let inv = RadialField::from_jet_fn(move |r| flux.eval(r).recip());
    let (y, py) = Primitive::new(inv, r0, lo, hi, SEGMENTS, cfg)?.into_field("y");
    let (i1, p1) = Primitive::new(op.density.clone(), r0, lo, hi, SEGMENTS, cfg)?.into_field("I1");
    let (y2, rho2) = (y.clone(), op.density.clone());
    let g2 = RadialField::from_jet_fn(move |r| y2.eval(r) * rho2.eval(r));
    let (i2, p2) = Primitive::new(g2, r0, lo, hi, SEGMENTS, cfg)?.into_field("I2");
    let (y3, rho3) = (y.clone(), op.density.clone());
    let g3 = RadialField::from_jet_fn(move |r| {
        let yv = y3.eval(r);
        yv * yv * rho3.eval(r)
    });
    let (i3, p3) = Primitive::new(g3, r0, lo, hi, SEGMENTS, cfg)?.into_field("I3");
    let (ya, i1a, i2a) = (y.clone(), i1.clone(), i2.clone());
    let w3 = RadialField::from_jet_fn(move |r| ya.eval(r) * i1a.eval(r) - i2a.eval(r))
        .with_label("y*I1 - I2");
    let (yb, i2b, i3b) = (y.clone(), i2.clone(), i3.clone());
    let w4 = RadialField::from_jet_fn(move |r| yb.eval(r) * i2b.eval(r) - i3b.eval(r))
        .with_label("y*I2 - I3");
    let nested = Arc::new(Nested {
        y: py,
        i1: p1,
        i2: p2,
        i3: p3,
    });
    Ok(RadialBasis {
        operator: op,
        functions: vec![RadialField::constant(1.0).with_label("1"), y, w3, w4],
        errors: vec![
            ErrorModel::Exact,
            ErrorModel::Nested(nested.clone(), 1),
            ErrorModel::Nested(nested.clone(), 2),
            ErrorModel::Nested(nested, 3),
        ],
        interval: (lo, hi),
        base_point: r0,
        config: *cfg,
        label,
    })
}

/// Numeric basis `{1, y, yI₁ - I₂, yI₂ - I₃}` of radial biharmonic
/// functions on a warped model space, by nested adaptive quadrature.
pub fn numeric_basis(space: &ModelSpace, cfg: &QuadratureConfig) -> Result<RadialBasis> {
    let label = format!("numeric {} m={}", space.warp().label(), space.dim());
    nested_basis(RadialOperator::warped(space), cfg, label)
}

/// Numeric basis in the conformal coordinate `t`.
pub fn conformal_basis(sign: i32, m: usize, cfg: &QuadratureConfig) -> Result<RadialBasis> {
    let op = RadialOperator::conformal(sign, m)?;
    let name = if sign == 1 { "sphere" } else { "hyperbolic" };
    nested_basis(op, cfg, format!("numeric conformal {name} m={m}"))
}

/// Spaces with a closed-form radial biharmonic basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Euclidean(usize),
    Spherical(usize),
    Hyperbolic(usize),
    /// Conformal sphere model in `t`, `m = 2` only.
    ConformalSphere(usize),
    /// Conformal hyperbolic model in `t`, `m = 2` only.
    ConformalHyperbolic(usize),
}

impl ClosedForm {
    /// The closed-form kind matching a model space, if any.
    pub fn for_space(space: &ModelSpace) -> Option<ClosedForm> {
        let m = space.dim();
        match space.warp().kind() {
            WarpKind::Euclidean => Some(ClosedForm::Euclidean(m)),
            WarpKind::Spherical if m <= 3 => Some(ClosedForm::Spherical(m)),
            WarpKind::Hyperbolic if m <= 3 => Some(ClosedForm::Hyperbolic(m)),
            _ => None,
        }
    }
}

fn field(label: &str, f: impl Fn(Jet1) -> Jet1 + Send + Sync + 'static) -> RadialField {
    RadialField::from_jet_fn(f).with_label(label)
}

/// The explicit bases: `{1, ln r, r², r² ln r}` (m=2), `{1, r⁻², r², ln r}`
/// (m=4) and `{1, r^{2-m}, r², r^{4-m}}` on Euclidean space;
/// `{1, cot r, r, r cot r}` and `{1, coth r, r, r coth r}` on the 3-sphere
/// and hyperbolic 3-space; logarithmic families with one quadrature term in
/// dimension 2, in both geodesic and conformal charts.
pub fn closed_form_basis(kind: ClosedForm, cfg: &QuadratureConfig) -> Result<RadialBasis> {
    let unsupported = || Err(Error::InvalidArgument(format!("no closed-form basis for {kind:?}")));
    let (op, label) = match kind {
        ClosedForm::Euclidean(m) if m >= 2 => (RadialOperator::warped(&ModelSpace::euclidean(m)?), "euclidean"),
        ClosedForm::Spherical(m) if m == 2 || m == 3 => {
            (RadialOperator::warped(&ModelSpace::spherical(m)?), "spherical")
        }
        ClosedForm::Hyperbolic(m) if m == 2 || m == 3 => {
            (RadialOperator::warped(&ModelSpace::hyperbolic(m)?), "hyperbolic")
        }
        ClosedForm::ConformalSphere(2) => (RadialOperator::conformal(1, 2)?, "conformal sphere"),
        ClosedForm::ConformalHyperbolic(2) => (RadialOperator::conformal(-1, 2)?, "conformal hyperbolic"),
        _ => return unsupported(),
    };
    cfg.validate()?;
    let r0 = base_point(&op, cfg)?;
    let (lo, hi) = op.default_interval();
    let one = RadialField::constant(1.0).with_label("1");
    let mut errors = vec![ErrorModel::Exact; 4];
    let functions = match kind {
        ClosedForm::Euclidean(2) => vec![
            one,
            field("ln r", |r| r.ln()),
            field("r^2", |r| r * r),
            field("r^2 ln r", |r| r * r * r.ln()),
        ],
        ClosedForm::Euclidean(4) => vec![
            one,
            field("r^-2", |r| r.powi(-2)),
            field("r^2", |r| r * r),
            field("ln r", |r| r.ln()),
        ],
        ClosedForm::Euclidean(m) => {
            let m = m as i32;
            vec![
                one,
                field(&format!("r^{}", 2 - m), move |r| r.powi(2 - m)),
                field("r^2", |r| r * r),
                field(&format!("r^{}", 4 - m), move |r| r.powi(4 - m)),
            ]
        }
        ClosedForm::Spherical(3) => vec![
            one,
            field("cot r", |r| r.tan().recip()),
            field("r", |r| r),
            field("r cot r", |r| r / r.tan()),
        ],
        ClosedForm::Hyperbolic(3) => vec![
            one,
            field("coth r", |r| r.tanh().recip()),
            field("r", |r| r),
            field("r coth r", |r| r / r.tanh()),
        ],
        _ => {
            // a + b ln A + c ln B + d [ln B ln A - 2∫ (ln B)' ln A]
            let (a_lab, b_lab, log_a, log_b, dlog_b): (&str, &str, LogFn, LogFn, LogFn) = match kind {
                ClosedForm::Spherical(_) => (
                    "ln tan(r/2)",
                    "ln sin r",
                    |r| (r * 0.5).tan().ln(),
                    |r| r.sin().ln(),
                    |r| r.tan().recip(),
                ),
                ClosedForm::Hyperbolic(_) => (
                    "ln tanh(r/2)",
                    "ln sinh r",
                    |r| (r * 0.5).tanh().ln(),
                    |r| r.sinh().ln(),
                    |r| r.tanh().recip(),
                ),
                ClosedForm::ConformalSphere(_) => (
                    "ln t",
                    "ln(1+t^2)",
                    |t| t.ln(),
                    |t| (t * t + 1.0).ln(),
                    |t| t * 2.0 / (t * t + 1.0),
                ),
                _ => (
                    "ln t",
                    "ln(1-t^2)",
                    |t| t.ln(),
                    |t| (-(t * t) + 1.0).ln(),
                    |t| t * (-2.0) / (-(t * t) + 1.0),
                ),
            };
            let integrand = field("", move |r| dlog_b(r) * log_a(r));
            let (p, cache) = Primitive::new(integrand, r0, lo, hi, SEGMENTS, cfg)?.into_field("");
            errors[3] = ErrorModel::Scaled(cache, 2.0);
            let fourth = RadialField::from_jet_fn(move |r| log_b(r) * log_a(r) - p.eval(r) * 2.0)
                .with_label(format!("{b_lab} {a_lab} - 2 int({b_lab})' {a_lab}"));
            vec![one, field(a_lab, log_a), field(b_lab, log_b), fourth]
        }
    };
    let m = op.dim();
    Ok(RadialBasis {
        operator: op,
        functions,
        errors,
        interval: (lo, hi),
        base_point: r0,
        config: *cfg,
        label: format!("closed form {label} m={m}"),
    })
}

type LogFn = fn(Jet1) -> Jet1;

/// Least-squares fit of one function onto a list.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanFit {
    pub coefficients: Vec<f64>,
    /// `max |a - Σβᵢbᵢ| / max |a|` over the samples.
    pub residual: f64,
}

fn design_matrix(basis: &[RadialField], samples: &[f64]) -> Result<(DMatrix<f64>, Vec<f64>)> {
    if basis.is_empty() || samples.len() < 2 * basis.len() {
        return Err(Error::InvalidArgument(format!(
            "span match needs at least {} samples, got {}",
            2 * basis.len().max(1),
            samples.len()
        )));
    }
    let mut mat = DMatrix::zeros(samples.len(), basis.len());
    let mut scales = Vec::with_capacity(basis.len());
    for (j, b) in basis.iter().enumerate() {
        let mut scale: f64 = 0.0;
        for (i, &s) in samples.iter().enumerate() {
            let v = b.value(s);
            if !v.is_finite() {
                return Err(Error::NumericEvaluation {
                    context: format!("span basis {}", b.label()),
                    at: vec![s],
                });
            }
            mat[(i, j)] = v;
            scale = scale.max(v.abs());
        }
        if scale == 0.0 {
            return Err(Error::IllConditioned(format!("basis function {} vanishes on the samples", b.label())));
        }
        mat.column_mut(j).scale_mut(1.0 / scale);
        scales.push(scale);
    }
    Ok((mat, scales))
}

struct Solver {
    mat: DMatrix<f64>,
    scales: Vec<f64>,
    svd: nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl Solver {
    fn new(basis: &[RadialField], samples: &[f64]) -> Result<Self> {
        let (mat, scales) = design_matrix(basis, samples)?;
        let svd = mat.clone().svd(true, true);
        let sv = &svd.singular_values;
        let (smax, smin) = (sv.max(), sv.min());
        if !(smin > 1e-12 * smax) {
            return Err(Error::IllConditioned(format!(
                "singular value ratio {:e} below 1e-12",
                smin / smax
            )));
        }
        Ok(Solver { mat, scales, svd })
    }

    fn solve(&self, values: &[f64]) -> Result<SpanFit> {
        let rhs = DVector::from_column_slice(values);
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericEvaluation {
                context: "span target".into(),
                at: vec![],
            });
        }
        let beta = self
            .svd
            .solve(&rhs, 0.0)
            .map_err(|e| Error::IllConditioned(e.to_string()))?;
        let fitted = &self.mat * &beta;
        let amax = rhs.amax();
        let resid = (rhs - fitted).amax();
        Ok(SpanFit {
            coefficients: beta.iter().zip(&self.scales).map(|(c, s)| c / s).collect(),
            residual: if amax == 0.0 { 0.0 } else { resid / amax },
        })
    }
}

/// Fits every function of `a` on the span of `b`.
pub fn fit(a: &[RadialField], b: &[RadialField], samples: &[f64]) -> Result<Vec<SpanFit>> {
    let solver = Solver::new(b, samples)?;
    a.iter()
        .map(|f| {
            let values: Vec<f64> = samples.iter().map(|&s| f.value(s)).collect();
            solver.solve(&values).map_err(|e| match e {
                Error::NumericEvaluation { .. } => Error::NumericEvaluation {
                    context: format!("span target {}", f.label()),
                    at: samples.to_vec(),
                },
                other => other,
            })
        })
        .collect()
}

/// Fits observed `values` at radii `samples` on the span of `basis`.
pub fn fit_data(samples: &[f64], values: &[f64], basis: &[RadialField]) -> Result<SpanFit> {
    if samples.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: samples.len(),
            got: values.len(),
        });
    }
    Solver::new(basis, samples)?.solve(values)
}

/// Max relative least-squares residual of the functions of `a` against
/// the span of `b`.
pub fn span_match(a: &[RadialField], b: &[RadialField], samples: &[f64]) -> Result<f64> {
    Ok(fit(a, b, samples)?
        .iter()
        .map(|f| f.residual)
        .fold(0.0, f64::max))
}
