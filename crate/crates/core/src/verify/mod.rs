//! Residual sweeps and verdicts: harmonic, quasi-harmonic, proper
//! biharmonic or not biharmonic, plus bi-eigen and buckling residuals.

pub mod catalog;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ModelSpace, RadialField, SeparableField};
use crate::jets::{ScalarField, euclidean_bilaplacian, euclidean_laplacian};
use crate::radial::{RadialOperator, linspace};
use crate::sphere::{SphereFunction, sphere_bilaplacian, sphere_laplacian};

pub use catalog::{CatalogEntry, CatalogOutcome, CatalogReport, Expectation, catalog, run_catalog, run_entry};

pub const DEFAULT_TAU: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Sample {
    Radius(f64),
    Point(Vec<f64>),
    /// `(r, θ)` with `θ` a unit vector.
    Polar(f64, Vec<f64>),
}

/// Deterministic sample sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Sampler {
    /// `count` equally spaced radii in `[lo, hi]`.
    RadialGrid { lo: f64, hi: f64, count: usize },
    /// Normalized Gaussian points of `S^m` with `|x_{m+1}| ≤ 1 - cap`.
    SphereGaussian { m: usize, count: usize, seed: u64, cap: f64 },
    /// `radii` equally spaced radii in `[lo, hi]` times `directions`
    /// seeded directions of `S^{m-1}`.
    ProductGrid {
        m: usize,
        lo: f64,
        hi: f64,
        radii: usize,
        directions: usize,
        seed: u64,
    },
}

fn gaussian_directions(n: usize, count: usize, seed: u64, keep: impl Fn(&[f64]) -> bool) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count && tries < 1000 * (count + 1) {
        tries += 1;
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        let u: Vec<f64> = v.into_iter().map(|t| t / norm).collect();
        if keep(&u) {
            out.push(u);
        }
    }
    out
}

impl Sampler {
    pub fn radial(lo: f64, hi: f64, count: usize) -> Self {
        Sampler::RadialGrid { lo, hi, count }
    }

    pub fn sphere(m: usize, count: usize, seed: u64) -> Self {
        Sampler::SphereGaussian {
            m,
            count,
            seed,
            cap: 0.05,
        }
    }

    pub fn product(m: usize, lo: f64, hi: f64, radii: usize, directions: usize, seed: u64) -> Self {
        Sampler::ProductGrid {
            m,
            lo,
            hi,
            radii,
            directions,
            seed,
        }
    }

    pub fn samples(&self) -> Vec<Sample> {
        match *self {
            Sampler::RadialGrid { lo, hi, count } => linspace(lo, hi, count).into_iter().map(Sample::Radius).collect(),
            Sampler::SphereGaussian { m, count, seed, cap } => {
                gaussian_directions(m + 1, count, seed, |u| u[m].abs() <= 1.0 - cap)
                    .into_iter()
                    .map(Sample::Point)
                    .collect()
            }
            Sampler::ProductGrid {
                m,
                lo,
                hi,
                radii,
                directions,
                seed,
            } => {
                let dirs = gaussian_directions(m, directions, seed, |_| true);
                let mut out = Vec::with_capacity(radii * directions);
                for r in linspace(lo, hi, radii) {
                    for d in &dirs {
                        out.push(Sample::Polar(r, d.clone()));
                    }
                }
                out
            }
        }
    }
}

/// A function together with the geometry its operators are taken in.
#[derive(Clone, Debug)]
pub enum Subject {
    Euclidean(ScalarField),
    Sphere(SphereFunction),
    Radial { operator: RadialOperator, field: RadialField },
    Separable { space: ModelSpace, field: SeparableField },
}

impl Subject {
    pub fn radial(space: &ModelSpace, field: RadialField) -> Self {
        Subject::Radial {
            operator: RadialOperator::warped(space),
            field,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Subject::Euclidean(f) => f.label().to_string(),
            Subject::Sphere(f) => f.ambient().label().to_string(),
            Subject::Radial { field, .. } => field.label().to_string(),
            Subject::Separable { field, .. } => field.radial.label().to_string(),
        }
    }

    /// `α·f`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Ok(match self {
            Subject::Euclidean(f) => Subject::Euclidean(f.scaled(alpha)),
            Subject::Sphere(f) => Subject::Sphere(SphereFunction::from_ambient(f.m(), f.ambient().scaled(alpha))?),
            Subject::Radial { operator, field } => Subject::Radial {
                operator: operator.clone(),
                field: field.scaled(alpha),
            },
            Subject::Separable { space, field } => Subject::Separable {
                space: space.clone(),
                field: SeparableField::new(space, field.radial.scaled(alpha), field.angular.clone())?,
            },
        })
    }

    /// `(f, Δf, Δ²f)` at one sample.
    pub fn evaluate(&self, s: &Sample) -> Result<(f64, f64, f64)> {
        let mismatch = || Error::InvalidArgument(format!("sample {s:?} does not fit this subject"));
        match (self, s) {
            (Subject::Euclidean(f), Sample::Point(x)) => {
                Ok((f.eval(x), euclidean_laplacian(f, x)?, euclidean_bilaplacian(f, x)?))
            }
            (Subject::Euclidean(f), Sample::Polar(r, th)) => {
                let x: Vec<f64> = th.iter().map(|t| r * t).collect();
                Ok((f.eval(&x), euclidean_laplacian(f, &x)?, euclidean_bilaplacian(f, &x)?))
            }
            (Subject::Sphere(f), Sample::Point(x)) => Ok((f.value(x)?, sphere_laplacian(f, x)?, sphere_bilaplacian(f, x)?)),
            (Subject::Radial { operator, field }, Sample::Radius(r) | Sample::Polar(r, _)) => {
                let (l, b) = operator.operators(field, *r)?;
                Ok((field.value(*r), l, b))
            }
            (Subject::Separable { space, field }, Sample::Polar(r, th)) => {
                let (l, b) = field.operators(space, *r, th)?;
                Ok((field.value(*r, th), l, b))
            }
            _ => Err(mismatch()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Harmonic,
    QuasiHarmonic,
    ProperBiharmonic,
    NotBiharmonic,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Harmonic => "harmonic",
            Verdict::QuasiHarmonic => "quasi-harmonic",
            Verdict::ProperBiharmonic => "proper-biharmonic",
            Verdict::NotBiharmonic => "not-biharmonic",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_laplacian: f64,
    pub mean_laplacian: f64,
    pub stddev_laplacian: f64,
    pub max_bilaplacian: f64,
    pub mean_bilaplacian: f64,
    /// `max |f|` over the samples.
    pub scale: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub samples: usize,
    pub excluded: usize,
}

struct Sweep {
    values: Vec<(f64, f64, f64)>,
    excluded: usize,
}

fn sweep(subject: &Subject, sampler: &Sampler) -> Result<Sweep> {
    let samples = sampler.samples();
    let total = samples.len();
    let mut values = Vec::with_capacity(total);
    let mut excluded = 0;
    for s in &samples {
        match subject.evaluate(s) {
            Ok(v) if v.0.is_finite() && v.1.is_finite() && v.2.is_finite() => values.push(v),
            Ok(_) | Err(Error::NumericEvaluation { .. }) | Err(Error::OutOfDomain { .. }) => excluded += 1,
            Err(e) => return Err(e),
        }
    }
    if values.is_empty() || excluded * 10 > total {
        return Err(Error::Sampling { excluded, total });
    }
    Ok(Sweep { values, excluded })
}

/// Sweeps `Δ` and `Δ²` over the samples and applies the thresholds
/// (`τ` relative to `1 + scale`).
pub fn classify(subject: &Subject, sampler: &Sampler, tau: f64) -> Result<ResidualReport> {
    let Sweep { values, excluded } = sweep(subject, sampler)?;
    let n = values.len() as f64;
    let scale = values.iter().map(|v| v.0.abs()).fold(0.0, f64::max);
    let max_laplacian = values.iter().map(|v| v.1.abs()).fold(0.0, f64::max);
    let mean_laplacian = values.iter().map(|v| v.1).sum::<f64>() / n;
    let stddev_laplacian = (values.iter().map(|v| (v.1 - mean_laplacian).powi(2)).sum::<f64>() / n).sqrt();
    let max_bilaplacian = values.iter().map(|v| v.2.abs()).fold(0.0, f64::max);
    let mean_bilaplacian = values.iter().map(|v| v.2.abs()).sum::<f64>() / n;
    let rel = tau * (1.0 + scale);
    let biharmonic = max_bilaplacian < rel;
    let quasi = biharmonic && stddev_laplacian < tau * (1.0 + mean_laplacian.abs()) && mean_laplacian.abs() > 10.0 * tau;
    let verdict = if max_laplacian < rel {
        Verdict::Harmonic
    } else if quasi {
        Verdict::QuasiHarmonic
    } else if biharmonic && max_laplacian > 10.0 * rel {
        Verdict::ProperBiharmonic
    } else {
        Verdict::NotBiharmonic
    };
    Ok(ResidualReport {
        max_laplacian,
        mean_laplacian,
        stddev_laplacian,
        max_bilaplacian,
        mean_bilaplacian,
        scale,
        verdict,
        tolerance: tau,
        samples: values.len(),
        excluded,
    })
}

/// `max |f|` over the samples.
pub fn sample_scale(subject: &Subject, sampler: &Sampler) -> Result<f64> {
    Ok(sweep(subject, sampler)?.values.iter().map(|v| v.0.abs()).fold(0.0, f64::max))
}

/// `max |Δ²f - μf|`.
pub fn eigen_residual(subject: &Subject, mu: f64, sampler: &Sampler) -> Result<f64> {
    Ok(sweep(subject, sampler)?
        .values
        .iter()
        .map(|v| (v.2 - mu * v.0).abs())
        .fold(0.0, f64::max))
}

/// `max |Δ²f + νΔf|`.
pub fn buckling_residual(subject: &Subject, nu: f64, sampler: &Sampler) -> Result<f64> {
    Ok(sweep(subject, sampler)?
        .values
        .iter()
        .map(|v| (v.2 + nu * v.1).abs())
        .fold(0.0, f64::max))
}
