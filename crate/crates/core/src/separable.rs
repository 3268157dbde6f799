//! Biharmonic products `u(r) v_k(θ)` on model spaces: homogeneous radial
//! solutions, particular solutions by variation of parameters, and the
//! assembled four-parameter family
//! `u = c₁u₁ + c₂u₂ + c₃u_{p₁} + c₄u_{p₂}`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ModelSpace, RadialField, RadialProfile, SeparableField, WarpKind};
use crate::harmonics::SphericalHarmonic;
use crate::jets::{Jet1, Scalar, ScalarField};
use crate::ode::{self, OdeConfig, State};
use crate::quadrature::{Primitive, QuadratureConfig};

const SEGMENTS: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSource {
    ClosedForm,
    NumericIvp,
}

/// Two independent solutions of
/// `u'' + (m-1)(σ'/σ)u' - k(m+k-2)u/σ² = 0`.
#[derive(Clone, Debug)]
pub struct HomSolutionPair {
    pub u1: RadialField,
    pub u2: RadialField,
    /// `u₁u₂' - u₁'u₂` at the base point.
    pub w0: f64,
    pub r0: f64,
    pub source: PairSource,
    /// Interval on which both solutions are trustworthy.
    pub valid: (f64, f64),
    space: ModelSpace,
    k: usize,
}

impl HomSolutionPair {
    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// `W(r) = W₀ (σ(r₀)/σ(r))^{m-1}`.
    pub fn wronskian(&self, r: f64) -> f64 {
        let sigma = self.space.warp().sigma();
        let m = self.space.dim() as i32;
        self.w0 * (sigma.value(self.r0) / sigma.value(r)).powi(m - 1)
    }

    /// `u₁u₂' - u₁'u₂` from the solutions' own derivatives.
    pub fn direct_wronskian(&self, r: f64) -> f64 {
        let a = self.u1.derivatives(r);
        let b = self.u2.derivatives(r);
        a[0] * b[1] - a[1] * b[0]
    }

    /// Jet of the Wronskian through Abel's formula.
    fn wronskian_jet(&self, r: Jet1) -> Jet1 {
        let sigma = self.space.warp().sigma();
        let m = self.space.dim() as i32;
        sigma.eval(r).powi(1 - m) * (self.w0 * sigma.value(self.r0).powi(m - 1))
    }
}

/// `W(r)` by Abel's identity.
pub fn wronskian(pair: &HomSolutionPair, r: f64) -> f64 {
    pair.wronskian(r)
}

fn check_degree(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "angular degree must be at least 1; degree 0 is the radial case".into(),
        ));
    }
    Ok(())
}

fn base_point(space: &ModelSpace, cfg: &QuadratureConfig) -> Result<f64> {
    let r0 = cfg.r0.unwrap_or_else(|| space.default_base_point());
    if !space.warp().contains(r0) {
        let (lo, hi) = space.warp().domain();
        return Err(Error::OutOfDomain { r: r0, lo, hi });
    }
    Ok(r0)
}

/// Closed-form fundamental pair where one is known: `r^k, r^{2-m-k}` on
/// Euclidean space, `cot^k(r/2), tan^k(r/2)` on the 2-sphere and
/// `coth^k(r/2), tanh^k(r/2)` on the hyperbolic plane.
pub fn closed_form_pair(space: &ModelSpace, k: usize, cfg: &QuadratureConfig) -> Result<Option<HomSolutionPair>> {
    check_degree(k)?;
    let m = space.dim();
    let ki = k as i32;
    let (u1, u2) = match (space.warp().kind(), m) {
        (WarpKind::Euclidean, _) => {
            let p2 = 2 - m as i32 - ki;
            (
                RadialField::from_jet_fn(move |r| r.powi(ki)).with_label(format!("r^{k}")),
                RadialField::from_jet_fn(move |r| r.powi(p2)).with_label(format!("r^{p2}")),
            )
        }
        (WarpKind::Spherical, 2) => (
            RadialField::from_jet_fn(move |r| (r * 0.5).tan().recip().powi(ki)).with_label(format!("cot^{k}(r/2)")),
            RadialField::from_jet_fn(move |r| (r * 0.5).tan().powi(ki)).with_label(format!("tan^{k}(r/2)")),
        ),
        (WarpKind::Hyperbolic, 2) => (
            RadialField::from_jet_fn(move |r| (r * 0.5).tanh().recip().powi(ki)).with_label(format!("coth^{k}(r/2)")),
            RadialField::from_jet_fn(move |r| (r * 0.5).tanh().powi(ki)).with_label(format!("tanh^{k}(r/2)")),
        ),
        _ => return Ok(None),
    };
    let r0 = base_point(space, cfg)?;
    let a = u1.derivatives(r0);
    let b = u2.derivatives(r0);
    Ok(Some(HomSolutionPair {
        u1,
        u2,
        w0: a[0] * b[1] - a[1] * b[0],
        r0,
        source: PairSource::ClosedForm,
        valid: space.default_interval(),
        space: space.clone(),
        k,
    }))
}

/// Coefficients of `u'' = a u' + b u`.
fn coefficient_jets(space: &ModelSpace, k: usize, r: f64) -> (Jet1, Jet1) {
    let sigma = Jet1(space.warp().sigma().derivatives(r));
    let m = space.dim() as f64;
    let a = -(sigma.shift() / sigma) * (m - 1.0);
    let b = (sigma * sigma).recip() * space.angular_eigenvalue(k);
    (a, b)
}

/// One numeric solution, stored as states on a grid and re-integrated from
/// the nearest grid point on evaluation. Derivatives above the first come
/// from differentiating the equation.
struct IvpSolution {
    space: ModelSpace,
    k: usize,
    nodes: Vec<(f64, State)>,
    cfg: OdeConfig,
}

impl IvpSolution {
    fn rhs(&self) -> impl Fn(f64, &State) -> State + '_ {
        move |r, y| {
            let (a, b) = coefficient_jets(&self.space, self.k, r);
            [y[1], a.0[0] * y[1] + b.0[0] * y[0]]
        }
    }

    fn state(&self, r: f64) -> Option<State> {
        let (lo, hi) = (self.nodes[0].0, self.nodes[self.nodes.len() - 1].0);
        if !(r >= lo && r <= hi) {
            return None;
        }
        let j = match self.nodes.binary_search_by(|(x, _)| x.total_cmp(&r)) {
            Ok(i) => return Some(self.nodes[i].1),
            Err(i) if i == 0 => 0,
            Err(i) if i == self.nodes.len() => i - 1,
            Err(i) => {
                if r - self.nodes[i - 1].0 <= self.nodes[i].0 - r {
                    i - 1
                } else {
                    i
                }
            }
        };
        let (x0, y0) = self.nodes[j];
        let f = self.rhs();
        ode::integrate(&f, x0, y0, r, &self.cfg).ok().map(|t| t.last().1)
    }
}

impl RadialProfile for IvpSolution {
    fn derivatives(&self, r: f64) -> [f64; 5] {
        let Some([u0, u1]) = self.state(r) else {
            return [f64::NAN; 5];
        };
        let (a, b) = coefficient_jets(&self.space, self.k, r);
        let (a, b) = (a.0, b.0);
        let u2 = a[0] * u1 + b[0] * u0;
        let u3 = a[1] * u1 + a[0] * u2 + b[1] * u0 + b[0] * u1;
        let u4 = a[2] * u1 + 2.0 * a[1] * u2 + a[0] * u3 + b[2] * u0 + 2.0 * b[1] * u1 + b[0] * u2;
        [u0, u1, u2, u3, u4]
    }
}

fn integrate_grid(
    space: &ModelSpace,
    k: usize,
    r0: f64,
    y0: State,
    lo: f64,
    hi: f64,
    cfg: &OdeConfig,
) -> (Vec<(f64, State)>, (f64, f64)) {
    let proto = IvpSolution {
        space: space.clone(),
        k,
        nodes: vec![],
        cfg: *cfg,
    };
    let f = proto.rhs();
    let h = (hi - lo) / SEGMENTS as f64;
    let mut nodes = vec![(r0, y0)];
    let mut valid = (lo, hi);
    for (target, forward) in [(hi, true), (lo, false)] {
        let mut x = r0;
        let mut y = y0;
        while (forward && x < target) || (!forward && x > target) {
            let next = if forward { (x + h).min(target) } else { (x - h).max(target) };
            match ode::integrate(&f, x, y, next, cfg) {
                Ok(t) => {
                    y = t.last().1;
                    x = next;
                    nodes.push((x, y));
                }
                Err(_) => {
                    if forward {
                        valid.1 = x;
                    } else {
                        valid.0 = x;
                    }
                    break;
                }
            }
        }
    }
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
    (nodes, valid)
}

/// Numeric fundamental pair from the initial states `(1,0)` and `(0,1)` at
/// the base point.
pub fn numeric_pair(space: &ModelSpace, k: usize, cfg: &QuadratureConfig) -> Result<HomSolutionPair> {
    check_degree(k)?;
    cfg.validate()?;
    let r0 = base_point(space, cfg)?;
    let (lo, hi) = space.default_interval();
    let ode_cfg = OdeConfig {
        rel_tol: OdeConfig::default().rel_tol.min(cfg.rel_tol),
        abs_tol: OdeConfig::default().abs_tol.min(cfg.abs_tol),
        ..OdeConfig::default()
    };
    let mut fields = Vec::new();
    let mut valid = (lo, hi);
    for (i, y0) in [[1.0, 0.0], [0.0, 1.0]].into_iter().enumerate() {
        let (nodes, v) = integrate_grid(space, k, r0, y0, lo, hi, &ode_cfg);
        valid = (valid.0.max(v.0), valid.1.min(v.1));
        let sol = IvpSolution {
            space: space.clone(),
            k,
            nodes,
            cfg: ode_cfg,
        };
        fields.push(RadialField::from_profile(sol).with_label(format!("ivp u{}", i + 1)));
    }
    if !(valid.1 > valid.0) {
        return Err(Error::IntegrationBlowUp {
            at: r0,
            valid_lo: valid.0,
            valid_hi: valid.1,
        });
    }
    let u2 = fields.pop().expect("two solutions");
    let u1 = fields.pop().expect("two solutions");
    Ok(HomSolutionPair {
        u1,
        u2,
        w0: 1.0,
        r0,
        source: PairSource::NumericIvp,
        valid,
        space: space.clone(),
        k,
    })
}

/// Fundamental pair: closed form when one is known, numeric otherwise.
pub fn fundamental_pair(space: &ModelSpace, k: usize, cfg: &QuadratureConfig) -> Result<HomSolutionPair> {
    match closed_form_pair(space, k, cfg)? {
        Some(p) => Ok(p),
        None => numeric_pair(space, k, cfg),
    }
}

/// `(u_{p₁}, u_{p₂})` with `L u_{p₁} = u₁` and `L u_{p₂} = u₂`:
/// `u_{p₁} = u₁∫(-u₁u₂/W) + u₂∫(u₁²/W)`,
/// `u_{p₂} = u₁∫(-u₂²/W) + u₂∫(u₁u₂/W)`, antiderivatives based at `r₀`.
pub fn particular_solutions(pair: &HomSolutionPair, cfg: &QuadratureConfig) -> Result<(RadialField, RadialField)> {
    cfg.validate()?;
    let (lo, hi) = pair.valid;
    let shared = Arc::new(pair.clone());
    let integrand = |f: fn(Jet1, Jet1) -> Jet1| {
        let p = shared.clone();
        RadialField::from_jet_fn(move |r| {
            let a = p.u1.eval(r);
            let b = p.u2.eval(r);
            f(a, b) / p.wronskian_jet(r)
        })
    };
    let (cross, _) = Primitive::new(integrand(|a, b| -(a * b)), pair.r0, lo, hi, SEGMENTS, cfg)?.into_field("");
    let (first, _) = Primitive::new(integrand(|a, _| a * a), pair.r0, lo, hi, SEGMENTS, cfg)?.into_field("");
    let (second, _) = Primitive::new(integrand(|_, b| -(b * b)), pair.r0, lo, hi, SEGMENTS, cfg)?.into_field("");
    let (u1, u2) = (pair.u1.clone(), pair.u2.clone());
    let (c1, f1) = (cross.clone(), first);
    let up1 = RadialField::from_jet_fn(move |r| u1.eval(r) * c1.eval(r) + u2.eval(r) * f1.eval(r)).with_label("up1");
    let (u1, u2) = (pair.u1.clone(), pair.u2.clone());
    let up2 = RadialField::from_jet_fn(move |r| u1.eval(r) * second.eval(r) - u2.eval(r) * cross.eval(r))
        .with_label("up2");
    Ok((up1, up2))
}

/// An assembled product `u(r) v_k(θ)`.
#[derive(Clone, Debug)]
pub struct SeparableBiharmonic {
    pub space: ModelSpace,
    pub k: usize,
    pub angular: SphericalHarmonic,
    pub coefficients: [f64; 4],
    pub pair: HomSolutionPair,
    pub up1: RadialField,
    pub up2: RadialField,
    field: SeparableField,
}

impl SeparableBiharmonic {
    pub fn radial(&self) -> &RadialField {
        &self.field.radial
    }

    pub fn field(&self) -> &SeparableField {
        &self.field
    }

    /// Value at `r·θ` for a unit vector `θ ∈ R^m`.
    pub fn value(&self, r: f64, theta: &[f64]) -> f64 {
        self.field.value(r, theta)
    }

    /// `(Δp, Δ²p)` at `(r, θ)`.
    pub fn operators(&self, r: f64, theta: &[f64]) -> Result<(f64, f64)> {
        self.field.operators(&self.space, r, theta)
    }

    pub fn to_euclidean_field(&self) -> ScalarField {
        self.field.to_euclidean_field()
    }

    pub fn valid_interval(&self) -> (f64, f64) {
        self.pair.valid
    }
}

/// Assembles `(c₁u₁ + c₂u₂ + c₃u_{p₁} + c₄u_{p₂}) v_k`.
pub fn build(
    space: &ModelSpace,
    k: usize,
    angular: SphericalHarmonic,
    coefficients: [f64; 4],
    cfg: &QuadratureConfig,
) -> Result<SeparableBiharmonic> {
    check_degree(k)?;
    if angular.degree() != k {
        return Err(Error::DegreeMismatch {
            expected: k,
            got: angular.degree(),
        });
    }
    let pair = fundamental_pair(space, k, cfg)?;
    assemble(space, pair, angular, coefficients, cfg)
}

/// As [`build`] with a given fundamental pair.
pub fn assemble(
    space: &ModelSpace,
    pair: HomSolutionPair,
    angular: SphericalHarmonic,
    coefficients: [f64; 4],
    cfg: &QuadratureConfig,
) -> Result<SeparableBiharmonic> {
    let k = pair.degree();
    if angular.degree() != k {
        return Err(Error::DegreeMismatch {
            expected: k,
            got: angular.degree(),
        });
    }
    let (up1, up2) = particular_solutions(&pair, cfg)?;
    let [c1, c2, c3, c4] = coefficients;
    let radial = RadialField::combination(&[
        (c1, pair.u1.clone()),
        (c2, pair.u2.clone()),
        (c3, up1.clone()),
        (c4, up2.clone()),
    ]);
    let field = SeparableField::new(space, radial, angular.clone())?;
    Ok(SeparableBiharmonic {
        space: space.clone(),
        k,
        angular,
        coefficients,
        pair,
        up1,
        up2,
        field,
    })
}

fn half(r: Jet1) -> Jet1 {
    r * 0.5
}

/// Radial factors of explicit products on the 2-sphere and the hyperbolic
/// plane, with the angular degree they pair with.
pub mod examples {
    use super::*;

    fn f(label: &str, g: impl Fn(Jet1) -> Jet1 + Send + Sync + 'static) -> RadialField {
        RadialField::from_jet_fn(g).with_label(label)
    }

    /// Particular solutions on the 2-sphere for `k = 1`, harmonic parts
    /// included.
    pub fn sphere_degree1_particulars() -> [RadialField; 2] {
        [
            f("up1 S2 k=1", |r| {
                let (t, s) = (half(r).tan(), half(r).sin());
                t.recip() * 0.5 - s * s * (t.recip() + t) + t * s.ln() * 2.0
            }),
            f("up2 S2 k=1", |r| {
                let (t, s, c) = (half(r).tan(), half(r).sin(), half(r).cos());
                -(t * 0.5) + s * s * (t.recip() + t) + t.recip() * c.ln() * 2.0
            }),
        ]
    }

    /// `2 tan(r/2) ln sin(r/2) + 2 cot(r/2) ln cos(r/2)`, `k = 1`.
    pub fn sphere_degree1() -> RadialField {
        f("2tan(r/2)ln sin(r/2) + 2cot(r/2)ln cos(r/2)", |r| {
            let (t, s, c) = (half(r).tan(), half(r).sin(), half(r).cos());
            t * s.ln() * 2.0 + t.recip() * c.ln() * 2.0
        })
    }

    /// The two family members on the hyperbolic plane, `k = 1`.
    pub fn hyperbolic_degree1_members() -> [RadialField; 2] {
        [
            f("H2 k=1 c3", |r| {
                let (t, s) = (half(r).tanh(), half(r).sinh());
                -(s * s * (t.recip() - t)) + t * s.ln() * 2.0
            }),
            f("H2 k=1 c4", |r| {
                let (t, s, c) = (half(r).tanh(), half(r).sinh(), half(r).cosh());
                -(s * s * (t.recip() - t)) + t.recip() * c.ln() * 2.0
            }),
        ]
    }

    /// `2 tanh(r/2) ln sinh(r/2) - 2 coth(r/2) ln cosh(r/2)`, `k = 1`.
    pub fn hyperbolic_degree1() -> RadialField {
        f("2tanh(r/2)ln sinh(r/2) - 2coth(r/2)ln cosh(r/2)", |r| {
            let (t, s, c) = (half(r).tanh(), half(r).sinh(), half(r).cosh());
            t * s.ln() * 2.0 - t.recip() * c.ln() * 2.0
        })
    }

    /// The two family members on the 2-sphere for `k = 2`.
    pub fn sphere_degree2_members() -> [RadialField; 2] {
        [
            f("S2 k=2 c3", |r| {
                let (t, s, c) = (half(r).tan(), half(r).sin(), half(r).cos());
                c * c + 1.0 - s * s * t * t + t * t * s.ln() * 4.0
            }),
            f("S2 k=2 c4", |r| {
                let (t, s, c) = (half(r).tan(), half(r).sin(), half(r).cos());
                c * c - s * s * t * t + (t * t).recip() * c.ln() * 2.0
            }),
        ]
    }

    /// `1 + 4 tan²(r/2) ln sin(r/2) - 2 cot²(r/2) ln cos(r/2)`, `k = 2`.
    pub fn sphere_degree2() -> RadialField {
        f("1 + 4tan^2(r/2)ln sin(r/2) - 2cot^2(r/2)ln cos(r/2)", |r| {
            let (t, s, c) = (half(r).tan(), half(r).sin(), half(r).cos());
            t * t * s.ln() * 4.0 + 1.0 - (t * t).recip() * c.ln() * 2.0
        })
    }
}
