//! Intrinsic operators on the unit sphere `S^m ⊂ R^{m+1}` computed from
//! ambient Euclidean data, plus the closed-form spectra.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonics::{poly_laplacian, CompiledPolynomial, HomogeneousPolynomial, SphericalHarmonic};
use crate::jets::{directional_derivatives, euclidean_bilaplacian, euclidean_laplacian, FieldFn, Scalar, ScalarField};

const UNIT_TOL: f64 = 1e-12;
const RENORMALIZE_TOL: f64 = 1e-8;

/// A function on `S^m` carried by an ambient field on `R^{m+1}`.
///
/// `ambient` is the representative the caller supplied; `extension` is its
/// degree-0 homogeneous version `x ↦ F(x/|x|)` (the same field when the
/// caller already supplied a degree-0 function).
#[derive(Clone, Debug)]
pub struct SphereFunction {
    m: usize,
    ambient: ScalarField,
    extension: ScalarField,
}

impl SphereFunction {
    /// `F` arbitrary on `R^{m+1}`; only its values on the sphere matter.
    pub fn from_ambient(m: usize, ambient: ScalarField) -> Result<Self> {
        check_dim(m, &ambient)?;
        let extension = ambient.radial_projection();
        Ok(SphereFunction {
            m,
            ambient,
            extension,
        })
    }

    /// `F` already satisfies `F(tx) = F(x)`; verified at sampled points.
    pub fn homogeneous(m: usize, field: ScalarField) -> Result<Self> {
        check_dim(m, &field)?;
        for x in sphere_samples(m, 16, 0x5eed)? {
            let scaled: Vec<f64> = x.iter().map(|v| 0.5 * v).collect();
            let doubled: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
            let a = field.eval(&scaled);
            let b = field.eval(&doubled);
            if !a.is_finite() || !b.is_finite() {
                continue;
            }
            if (a - b).abs() > UNIT_TOL * a.abs().max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "field {} is not degree-0 homogeneous: F(x/2) = {a}, F(2x) = {b}",
                    field.label()
                )));
            }
        }
        Ok(SphereFunction {
            m,
            ambient: field.clone(),
            extension: field,
        })
    }

    /// Restriction of a homogeneous polynomial in `m+1` variables.
    pub fn from_polynomial(p: &HomogeneousPolynomial) -> Result<Self> {
        if p.nvars() < 2 {
            return Err(Error::InvalidArgument("need at least 2 variables".into()));
        }
        let m = p.nvars() - 1;
        let ambient = p.to_field();
        let extension = ScalarField::new(p.nvars(), DegreeZero(p.compile())).with_label(format!("({p})/|x|^{}", p.degree()));
        Ok(SphereFunction { m, ambient, extension })
    }

    /// Pointwise sum of two functions on the same sphere.
    pub fn plus(&self, other: &SphereFunction) -> Result<Self> {
        if other.m != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m + 1,
                got: other.m + 1,
            });
        }
        Ok(SphereFunction {
            m: self.m,
            ambient: self.ambient.plus(&other.ambient),
            extension: self.extension.plus(&other.extension),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ambient(&self) -> &ScalarField {
        &self.ambient
    }

    pub fn extension(&self) -> &ScalarField {
        &self.extension
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        let x = unit(x)?;
        Ok(self.extension.eval(&x))
    }
}

/// `P(x)/|x|^k`, the degree-0 extension of a degree-`k` polynomial.
struct DegreeZero(CompiledPolynomial);

impl FieldFn for DegreeZero {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let p = self.0.eval(x);
        if self.0.degree() == 0 {
            return p;
        }
        let mut fixed = 0.0;
        let mut r2 = S::constant(0.0);
        for v in x {
            match v.as_constant() {
                Some(c) => fixed += c * c,
                None => r2 = r2 + *v * *v,
            }
        }
        let r2 = r2 + S::constant(fixed);
        p * r2.powf(-0.5 * self.0.degree() as f64)
    }
}

fn check_dim(m: usize, f: &ScalarField) -> Result<()> {
    if m < 1 {
        return Err(Error::InvalidArgument("sphere dimension must be >= 1".into()));
    }
    if f.dim() != m + 1 {
        return Err(Error::DimensionMismatch {
            expected: m + 1,
            got: f.dim(),
        });
    }
    Ok(())
}

/// Accepts `|x| = 1` within 1e-12, renormalizes within 1e-8, rejects beyond.
pub fn unit(x: &[f64]) -> Result<Vec<f64>> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let dev = (norm - 1.0).abs();
    if dev <= UNIT_TOL {
        Ok(x.to_vec())
    } else if dev <= RENORMALIZE_TOL {
        Ok(x.iter().map(|v| v / norm).collect())
    } else {
        Err(Error::NotUnit { norm })
    }
}

fn checked_point(f: &SphereFunction, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != f.m + 1 {
        return Err(Error::DimensionMismatch {
            expected: f.m + 1,
            got: x.len(),
        });
    }
    unit(x)
}

/// `Δ_{S^m} f` as the ambient Laplacian of the degree-0 extension.
pub fn sphere_laplacian(f: &SphereFunction, x: &[f64]) -> Result<f64> {
    let x = checked_point(f, x)?;
    euclidean_laplacian(&f.extension, &x)
}

/// `Δ_{S^m} f` from the supplied ambient representative:
/// `ΔF − ∂²F/∂r² − m ∂F/∂r` on the sphere.
pub fn sphere_laplacian_intrinsic(f: &SphereFunction, x: &[f64]) -> Result<f64> {
    let x = checked_point(f, x)?;
    let lap = euclidean_laplacian(&f.ambient, &x)?;
    let d = directional_derivatives(&f.ambient, &x, &x, 2)?;
    Ok(lap - d[2] - f.m as f64 * d[1])
}

/// How the lower-order correction in the sphere bi-Laplacian is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BilaplacianRoute {
    /// Ambient bi-Laplacian of the extension plus `2(m−3)` times the
    /// intrinsic sphere Laplacian.
    Intrinsic,
    /// Ambient bi-Laplacian plus `2(m−3)` times the ambient Laplacian, both
    /// of the extension.
    Ambient,
}

/// `Δ²_{S^m} f = Δ²(f∘π) + 2(m−3)Δ_{S^m} f` on the sphere.
pub fn sphere_bilaplacian(f: &SphereFunction, x: &[f64]) -> Result<f64> {
    sphere_bilaplacian_via(f, x, BilaplacianRoute::Intrinsic)
}

pub fn sphere_bilaplacian_via(f: &SphereFunction, x: &[f64], route: BilaplacianRoute) -> Result<f64> {
    let x = checked_point(f, x)?;
    let bilap = euclidean_bilaplacian(&f.extension, &x)?;
    let correction = 2.0 * (f.m as f64 - 3.0);
    if correction == 0.0 {
        return Ok(bilap);
    }
    let lap = match route {
        BilaplacianRoute::Intrinsic => sphere_laplacian_intrinsic(f, &x)?,
        BilaplacianRoute::Ambient => euclidean_laplacian(&f.extension, &x)?,
    };
    Ok(bilap + correction * lap)
}

/// Exact evaluation of `Δ²_{S^m}(F|_{S^m})` for `F` homogeneous of degree
/// `k` in `m+1` variables:
/// `k²(k−1+m)² F + Δ²F − 2[k² + (k−1)(m−3)] ΔF` on the sphere.
pub fn bilaplacian_poly_restriction(p: &HomogeneousPolynomial, x: &[f64]) -> Result<f64> {
    let n = p.nvars();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("need at least 2 variables".into()));
    }
    let x = unit(x)?;
    let k = p.degree() as f64;
    let m = (n - 1) as f64;
    let value = p.eval(&x);
    let euler: f64 = (0..n).map(|i| x[i] * p.partial(i).eval(&x)).sum();
    let size: f64 = p.terms().map(|(_, c)| c.abs()).sum::<f64>().max(1.0);
    if (euler - k * value).abs() > 1e-9 * size * (1.0 + k) {
        return Err(Error::DegreeMismatch {
            expected: p.degree(),
            got: (euler / value).round().max(0.0) as usize,
        });
    }
    let lap = poly_laplacian(p);
    let bilap = poly_laplacian(&lap);
    let lam = k * (k - 1.0 + m);
    Ok(lam * lam * value + bilap.eval(&x)
        - 2.0 * (k * k + (k - 1.0) * (m - 3.0)) * lap.eval(&x))
}

/// One row of the closed-form spectrum on `S^m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub k: usize,
    pub lambda: f64,
    pub bi: f64,
    pub buckling: f64,
    /// Eigenvalue of `(−Δ)^j` keyed by the order `j`.
    pub k_laplacian: BTreeMap<u32, f64>,
}

/// `λ_k = k(m+k−1)` on `S^m`.
pub fn laplace_eigenvalue(m: usize, k: usize) -> f64 {
    (k * (m + k - 1)) as f64
}

/// Buckling eigenvalue carried by degree-2 polynomial restrictions.
pub fn degree2_buckling(m: usize) -> f64 {
    2.0 * (m as f64 + 1.0)
}

pub fn spectra(m: usize, k_max: usize, orders: &[u32]) -> Vec<SpectrumEntry> {
    (0..=k_max)
        .map(|k| {
            let lambda = laplace_eigenvalue(m, k);
            SpectrumEntry {
                k,
                lambda,
                bi: lambda * lambda,
                buckling: lambda,
                k_laplacian: orders.iter().map(|&j| (j, lambda.powi(j as i32))).collect(),
            }
        })
        .collect()
}

/// `n` points of `S^m`, normalized standard Gaussians from a seeded stream.
pub fn sphere_samples(m: usize, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v: Vec<f64> = (0..=m).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|t| t * t).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        out.push(v.into_iter().map(|t| t / norm).collect());
    }
    Ok(out)
}

/// Result of a buckling sweep over sphere samples.
#[derive(Clone, Debug, Serialize)]
pub struct BucklingReport {
    pub nu: f64,
    pub max_residual: f64,
    pub scale: f64,
    pub samples: usize,
}

/// `max |Δ²f + λ_k Δf|` for `f = (h + c|x|²)|_{S^m}`.
pub fn buckling_check(h: &SphericalHarmonic, c: f64, samples: &[Vec<f64>]) -> Result<BucklingReport> {
    let poly = h.poly();
    let n = poly.nvars();
    let m = n - 1;
    let k = h.degree();
    let nu = laplace_eigenvalue(m, k);
    // c|x|^2 and c agree on the sphere
    let shift = HomogeneousPolynomial::norm_power(n, 0).scale(c);
    let f = SphereFunction::from_polynomial(poly)?.plus(&SphereFunction::from_polynomial(&shift)?)?;
    let mut max_residual: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for x in samples {
        let bl = sphere_bilaplacian(&f, x)?;
        let l = sphere_laplacian(&f, x)?;
        max_residual = max_residual.max((bl + nu * l).abs());
        scale = scale.max(f.value(x)?.abs());
    }
    Ok(BucklingReport {
        nu,
        max_residual,
        scale,
        samples: samples.len(),
    })
}
