//! Model spaces `((0,∞) × S^{m-1}, dr² + σ(r)² g_{S^{m-1}})` and their
//! Laplacian and bi-Laplacian on radial and separable fields.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::SphericalHarmonic;
use crate::jets::{FieldFn, Jet1, Scalar, ScalarField};

/// Anything that can report its derivative stack `[u, u', u'', u''', u'''']`
/// at a radius.
pub trait RadialProfile: Send + Sync {
    fn derivatives(&self, r: f64) -> [f64; 5];

    fn value(&self, r: f64) -> f64 {
        self.derivatives(r)[0]
    }
}

struct JetFn<F>(F);

impl<F: Fn(Jet1) -> Jet1 + Send + Sync> RadialProfile for JetFn<F> {
    fn derivatives(&self, r: f64) -> [f64; 5] {
        (self.0)(Jet1::variable(r)).0
    }
}

/// A function of one radial variable, evaluable in every scalar kind.
#[derive(Clone)]
pub struct RadialField {
    inner: Arc<dyn RadialProfile>,
    label: String,
}

impl fmt::Debug for RadialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialField({})", self.label)
    }
}

impl RadialField {
    pub fn from_profile(p: impl RadialProfile + 'static) -> Self {
        RadialField {
            inner: Arc::new(p),
            label: String::new(),
        }
    }

    /// Wrap a function written against `Jet1`; its derivatives come from a
    /// single jet evaluation at the variable `r`.
    pub fn from_jet_fn(f: impl Fn(Jet1) -> Jet1 + Send + Sync + 'static) -> Self {
        Self::from_profile(JetFn(f))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_jet_fn(move |_| Jet1::constant(c)).with_label(format!("{c}"))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn derivatives(&self, r: f64) -> [f64; 5] {
        self.inner.derivatives(r)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.inner.value(r)
    }

    pub fn eval<S: Scalar>(&self, r: S) -> S {
        r.lift(self.inner.derivatives(r.value()))
    }

    /// `Σ cᵢ fᵢ`.
    pub fn combination(terms: &[(f64, RadialField)]) -> RadialField {
        let terms: Vec<(f64, RadialField)> = terms
            .iter()
            .filter(|(c, _)| *c != 0.0)
            .cloned()
            .collect();
        let label = terms
            .iter()
            .map(|(c, f)| format!("{c}*[{}]", f.label))
            .collect::<Vec<_>>()
            .join(" + ");
        RadialField::from_profile(Combination(terms)).with_label(label)
    }

    pub fn scaled(&self, c: f64) -> RadialField {
        Self::combination(&[(c, self.clone())])
    }

    /// `self(g(r))` for a coordinate change `g`.
    pub fn compose(&self, g: impl Fn(Jet1) -> Jet1 + Send + Sync + 'static) -> RadialField {
        let f = self.clone();
        RadialField::from_jet_fn(move |r| f.eval(g(r)))
    }
}

struct Combination(Vec<(f64, RadialField)>);

impl RadialProfile for Combination {
    fn derivatives(&self, r: f64) -> [f64; 5] {
        let mut out = [0.0; 5];
        for (c, f) in &self.0 {
            let d = f.derivatives(r);
            for i in 0..5 {
                out[i] += c * d[i];
            }
        }
        out
    }

    fn value(&self, r: f64) -> f64 {
        self.0.iter().map(|(c, f)| c * f.value(r)).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WarpKind {
    Euclidean,
    Spherical,
    Hyperbolic,
    Custom,
}

/// The warp `σ` with its open domain `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct WarpFunction {
    kind: WarpKind,
    sigma: RadialField,
    lo: f64,
    hi: f64,
}

impl WarpFunction {
    pub fn euclidean() -> Self {
        WarpFunction {
            kind: WarpKind::Euclidean,
            sigma: RadialField::from_jet_fn(|r| r).with_label("r"),
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn spherical() -> Self {
        WarpFunction {
            kind: WarpKind::Spherical,
            sigma: RadialField::from_jet_fn(|r| r.sin()).with_label("sin r"),
            lo: 0.0,
            hi: PI,
        }
    }

    pub fn hyperbolic() -> Self {
        WarpFunction {
            kind: WarpKind::Hyperbolic,
            sigma: RadialField::from_jet_fn(|r| r.sinh()).with_label("sinh r"),
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    /// A user warp; positivity is checked on a grid of the domain.
    pub fn custom(sigma: RadialField, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || lo.is_nan() {
            return Err(Error::InvalidWarp(format!("empty domain ({lo}, {hi})")));
        }
        let top = if hi.is_finite() { hi } else { lo + 50.0 };
        let n = 400;
        for i in 1..n {
            let r = lo + (top - lo) * i as f64 / n as f64;
            let d = sigma.derivatives(r);
            if !(d[0] > 0.0) {
                return Err(Error::InvalidWarp(format!(
                    "sigma({r}) = {} is not positive",
                    d[0]
                )));
            }
            if d[..4].iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidWarp(format!(
                    "sigma has non-finite derivatives at r = {r}"
                )));
            }
        }
        Ok(WarpFunction {
            kind: WarpKind::Custom,
            sigma,
            lo,
            hi,
        })
    }

    pub fn kind(&self) -> WarpKind {
        self.kind
    }

    pub fn sigma(&self) -> &RadialField {
        &self.sigma
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, r: f64) -> bool {
        r > self.lo && r < self.hi
    }

    pub fn label(&self) -> String {
        match self.kind {
            WarpKind::Euclidean => "r".into(),
            WarpKind::Spherical => "sin".into(),
            WarpKind::Hyperbolic => "sinh".into(),
            WarpKind::Custom => self.sigma.label().to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModelSpace {
    m: usize,
    warp: WarpFunction,
}

impl ModelSpace {
    pub fn new(m: usize, warp: WarpFunction) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!(
                "model space dimension must be >= 2, got {m}"
            )));
        }
        Ok(ModelSpace { m, warp })
    }

    pub fn euclidean(m: usize) -> Result<Self> {
        Self::new(m, WarpFunction::euclidean())
    }

    pub fn spherical(m: usize) -> Result<Self> {
        Self::new(m, WarpFunction::spherical())
    }

    pub fn hyperbolic(m: usize) -> Result<Self> {
        Self::new(m, WarpFunction::hyperbolic())
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn warp(&self) -> &WarpFunction {
        &self.warp
    }

    /// Working interval kept away from the coordinate singularities.
    pub fn default_interval(&self) -> (f64, f64) {
        match self.warp.kind {
            WarpKind::Spherical => (0.3, PI - 0.3),
            WarpKind::Euclidean | WarpKind::Hyperbolic => (0.3, 2.5),
            WarpKind::Custom => {
                let (lo, hi) = self.warp.domain();
                let a = lo + 0.3;
                let b = if hi.is_finite() { (hi - 0.3).min(a + 2.2) } else { a + 2.2 };
                (a, b.max(a + 0.1 * (hi - lo).min(1.0)))
            }
        }
    }

    /// Default quadrature base point.
    pub fn default_base_point(&self) -> f64 {
        match self.warp.kind {
            WarpKind::Spherical => PI / 2.0,
            WarpKind::Custom => {
                let (a, b) = self.default_interval();
                if self.warp.contains(1.0) && a <= 1.0 && 1.0 <= b {
                    1.0
                } else {
                    0.5 * (a + b)
                }
            }
            _ => 1.0,
        }
    }

    /// Eigenvalue of `-Δ_{S^{m-1}}` on degree-`k` spherical harmonics, the
    /// coefficient entering the separated radial operator.
    pub fn angular_eigenvalue(&self, k: usize) -> f64 {
        (k * (self.m + k - 2)) as f64
    }

    fn check(&self, r: f64) -> Result<Jet1> {
        if !self.warp.contains(r) {
            let (lo, hi) = self.warp.domain();
            return Err(Error::OutOfDomain { r, lo, hi });
        }
        let s = Jet1(self.warp.sigma.derivatives(r));
        if !(s.0[0] > 0.0) {
            return Err(Error::InvalidWarp(format!("sigma({r}) = {} <= 0", s.0[0])));
        }
        Ok(s)
    }

    /// `L_k u = u'' + (m-1)(σ'/σ)u' - k(m+k-2)/σ² u` as a jet in `r`; only
    /// orders `0..=2` of the result are valid.
    pub(crate) fn separated_operator(&self, u: Jet1, sigma: Jet1, k: usize) -> Jet1 {
        let d1 = u.shift();
        let d2 = d1.shift();
        let ratio = sigma.shift() / sigma;
        let mut out = d2 + ratio * d1 * (self.m as f64 - 1.0);
        let kappa = self.angular_eigenvalue(k);
        if kappa != 0.0 {
            out = out - u * kappa / (sigma * sigma);
        }
        out
    }

    fn stack(&self, u: &RadialField, k: usize, r: f64) -> Result<(f64, f64)> {
        let sigma = self.check(r)?;
        let uj = Jet1(u.derivatives(r));
        let lap = self.separated_operator(uj, sigma, k);
        let bilap = self.separated_operator(lap, sigma, k);
        if !uj.is_finite() || !lap.0[..3].iter().all(|v| v.is_finite()) || !bilap.0[0].is_finite()
        {
            return Err(Error::NumericEvaluation {
                context: format!("radial operator on {}", u.label()),
                at: vec![r],
            });
        }
        Ok((lap.0[0], bilap.0[0]))
    }
}

/// `u'' + (m-1)(σ'/σ)u'`.
pub fn laplacian_radial(space: &ModelSpace, u: &RadialField, r: f64) -> Result<f64> {
    Ok(space.stack(u, 0, r)?.0)
}

/// The radial Laplacian applied twice.
pub fn bilaplacian_radial(space: &ModelSpace, u: &RadialField, r: f64) -> Result<f64> {
    Ok(space.stack(u, 0, r)?.1)
}

/// Bracketed factor of `Δ(u v_k) = [u'' + (m-1)(σ'/σ)u' - k(m+k-2)u/σ²] v_k`.
pub fn laplacian_separable_radial_factor(
    space: &ModelSpace,
    u: &RadialField,
    k: usize,
    r: f64,
) -> Result<f64> {
    Ok(space.stack(u, k, r)?.0)
}

/// Radial factor of `Δ²(u v_k)`.
pub fn bilaplacian_separable_radial_factor(
    space: &ModelSpace,
    u: &RadialField,
    k: usize,
    r: f64,
) -> Result<f64> {
    Ok(space.stack(u, k, r)?.1)
}

/// `u(r) v_k(θ)` with `v_k` the restriction of a harmonic polynomial on `R^m`.
#[derive(Clone, Debug)]
pub struct SeparableField {
    pub radial: RadialField,
    pub angular: SphericalHarmonic,
}

impl SeparableField {
    pub fn new(space: &ModelSpace, radial: RadialField, angular: SphericalHarmonic) -> Result<Self> {
        if angular.poly().nvars() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: angular.poly().nvars(),
            });
        }
        Ok(SeparableField { radial, angular })
    }

    pub fn degree(&self) -> usize {
        self.angular.degree()
    }

    /// `v_k(θ)` for a unit vector `θ`.
    pub fn angular_value(&self, theta: &[f64]) -> f64 {
        self.angular.poly().eval(theta)
    }

    /// Value at the point `r·θ` given in polar form.
    pub fn value(&self, r: f64, theta: &[f64]) -> f64 {
        self.radial.value(r) * self.angular_value(theta)
    }

    /// `(Δp, Δ²p)` at `(r, θ)`.
    pub fn operators(&self, space: &ModelSpace, r: f64, theta: &[f64]) -> Result<(f64, f64)> {
        let v = self.angular_value(theta);
        let (l, b) = space.stack(&self.radial, self.degree(), r)?;
        Ok((l * v, b * v))
    }

    /// The product as a field on `R^m \ {0}`: `u(|x|) h(x) / |x|^k`.
    pub fn to_euclidean_field(&self) -> ScalarField {
        ScalarField::new(self.angular.poly().nvars(), ProductField(self.clone()))
    }
}

struct ProductField(SeparableField);

impl FieldFn for ProductField {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let r = x.iter().fold(S::constant(0.0), |a, &v| a + v * v).sqrt();
        let k = self.0.degree() as i32;
        self.0.radial.eval(r) * self.0.angular.poly().eval_generic(x) * r.powi(-k)
    }
}
