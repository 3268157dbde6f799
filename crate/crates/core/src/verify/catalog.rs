//! Named regression entries: every closed-form example with its expected
//! verdict or constant.

use std::f64::consts::PI;
use std::time::Instant;

use serde::Serialize;

use super::{Sampler, Subject, Verdict, buckling_residual, classify, eigen_residual, sample_scale};
use crate::error::Result;
use crate::expr::Expr;
use crate::geometry::{ModelSpace, RadialField, SeparableField};
use crate::harmonics::{HomogeneousPolynomial, harmonic_basis};
use crate::punctured::PositiveLaplacianFamily;
use crate::quadrature::QuadratureConfig;
use crate::radial::{ClosedForm, RadialOperator, closed_form_basis, numeric_basis};
use crate::separable::{self, examples};
use crate::sphere::SphereFunction;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Expectation {
    Verdict(Verdict),
    /// Quasi-harmonic with `Δf` equal to this constant.
    Quasi(f64),
    /// `Δ²f = μf`.
    BiEigen(f64),
    /// `Δ²f = -νΔf`.
    Buckling(f64),
}

impl std::fmt::Display for Expectation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expectation::Verdict(v) => write!(f, "{v}"),
            Expectation::Quasi(c) => write!(f, "quasi-harmonic ({c})"),
            Expectation::BiEigen(mu) => write!(f, "bi-eigen mu={mu}"),
            Expectation::Buckling(nu) => write!(f, "buckling nu={nu}"),
        }
    }
}

type Builder = Box<dyn Fn() -> Result<Subject> + Send + Sync>;

pub struct CatalogEntry {
    pub name: &'static str,
    pub space: &'static str,
    pub sampler: Sampler,
    pub expected: Expectation,
    build: Builder,
}

impl CatalogEntry {
    fn new(
        name: &'static str,
        space: &'static str,
        sampler: Sampler,
        expected: Expectation,
        build: impl Fn() -> Result<Subject> + Send + Sync + 'static,
    ) -> Self {
        CatalogEntry {
            name,
            space,
            sampler,
            expected,
            build: Box::new(build),
        }
    }

    pub fn subject(&self) -> Result<Subject> {
        (self.build)()
    }
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("space", &self.space)
            .field("expected", &self.expected)
            .finish()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogOutcome {
    pub name: String,
    pub space: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
    /// Residual or the quantity compared against the expectation.
    pub metric: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub tolerance: f64,
    pub outcomes: Vec<CatalogOutcome>,
    pub passed: bool,
}

impl CatalogReport {
    pub fn failures(&self) -> impl Iterator<Item = &CatalogOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

fn euclid(m: usize, src: &'static str) -> impl Fn() -> Result<Subject> + Send + Sync {
    move || Ok(Subject::Euclidean(Expr::parse(src)?.to_field(m)?.with_label(src)))
}

fn on_sphere(m: usize, src: &'static str) -> impl Fn() -> Result<Subject> + Send + Sync {
    move || {
        let f = Expr::parse(src)?.to_field(m + 1)?.with_label(src);
        Ok(Subject::Sphere(SphereFunction::from_ambient(m, f)?))
    }
}

fn warped(space: fn(usize) -> Result<ModelSpace>, m: usize, src: &'static str) -> impl Fn() -> Result<Subject> + Send + Sync {
    move || {
        let f = Expr::parse(src)?.to_radial()?.with_label(src);
        Ok(Subject::radial(&space(m)?, f))
    }
}

fn closed_form(kind: ClosedForm, i: usize) -> impl Fn() -> Result<Subject> + Send + Sync {
    move || {
        let basis = closed_form_basis(kind, &QuadratureConfig::default())?;
        Ok(Subject::Radial {
            operator: basis.operator().clone(),
            field: basis.function(i).clone(),
        })
    }
}

fn product(space: fn(usize) -> Result<ModelSpace>, k: usize, radial: fn() -> RadialField) -> impl Fn() -> Result<Subject> + Send + Sync {
    move || {
        let space = space(2)?;
        let angular = harmonic_basis(2, k)?.remove(0);
        Ok(Subject::Separable {
            field: SeparableField::new(&space, radial(), angular)?,
            space,
        })
    }
}

fn family(m: usize, c1: f64, c2: f64, a: f64, b: f64) -> impl Fn() -> Result<Subject> + Send + Sync {
    move || Ok(Subject::Euclidean(PositiveLaplacianFamily::new(m, c1, c2, a, b)?.to_field()))
}

fn punctured(m: usize) -> Sampler {
    Sampler::product(m, 0.3, 3.0, 10, 6, 100 + m as u64)
}

fn sphere_grid() -> Sampler {
    Sampler::radial(0.3, PI - 0.3, 60)
}

fn hyperbolic_grid() -> Sampler {
    Sampler::radial(0.3, 3.0, 60)
}

fn conformal_grid(sign: i32) -> Sampler {
    let (lo, hi) = RadialOperator::conformal(sign, 2).expect("m = 2 is valid").default_interval();
    Sampler::radial(lo, hi, 60)
}

/// Every entry of the regression catalog.
pub fn catalog() -> Vec<CatalogEntry> {
    use Expectation::{BiEigen, Buckling, Quasi, Verdict as V};
    use Verdict::{Harmonic, NotBiharmonic, ProperBiharmonic};
    let s2 = Sampler::sphere(2, 60, 21);
    let s3 = Sampler::sphere(3, 60, 31);
    let sph = ModelSpace::spherical;
    let hyp = ModelSpace::hyperbolic;
    vec![
        // ambient restrictions to spheres
        CatalogEntry::new("S2-ln(1-x3)", "S2", s2.clone(), Quasi(-1.0), on_sphere(2, "ln(1-x3)")),
        CatalogEntry::new(
            "S3-linear-over-sqrt(1-x4^2)",
            "S3",
            s3.clone(),
            V(ProperBiharmonic),
            on_sphere(3, "(x1 - 2*x2 + 0.5*x3)/sqrt(1-x4^2)"),
        ),
        CatalogEntry::new("S3-x3-over-sqrt(1-x4^2)", "S3", s3.clone(), V(ProperBiharmonic), on_sphere(3, "x3/sqrt(1-x4^2)")),
        CatalogEntry::new("S2-h2-bi-eigen", "S2", s2.clone(), BiEigen(36.0), || {
            Ok(Subject::Sphere(SphereFunction::from_polynomial(harmonic_basis(3, 2)?[0].poly())?))
        }),
        CatalogEntry::new("S3-h1-bi-eigen", "S3", s3.clone(), BiEigen(9.0), || {
            Ok(Subject::Sphere(SphereFunction::from_polynomial(harmonic_basis(4, 1)?[0].poly())?))
        }),
        CatalogEntry::new("S4-h2+3|x|^2-buckling", "S4", Sampler::sphere(4, 60, 41), Buckling(10.0), || {
            let p = harmonic_basis(5, 2)?[1].poly().add(&HomogeneousPolynomial::norm_power(5, 1).scale(3.0))?;
            Ok(Subject::Sphere(SphereFunction::from_polynomial(&p)?))
        }),
        CatalogEntry::new("S2-h3+|x|^2-buckling", "S2", s2.clone(), Buckling(12.0), || {
            let f = harmonic_basis(3, 3)?[2].poly().to_field().plus(&HomogeneousPolynomial::norm_power(3, 1).to_field());
            Ok(Subject::Sphere(SphereFunction::from_ambient(2, f)?))
        }),
        // radial functions on Euclidean space
        CatalogEntry::new("R2-ln-r", "R2", punctured(2), V(Harmonic), euclid(2, "ln(r)")),
        CatalogEntry::new("R2-r2lnr", "R2", punctured(2), V(ProperBiharmonic), euclid(2, "r^2*ln(r)")),
        CatalogEntry::new("R2-r2", "R2", punctured(2), Quasi(4.0), euclid(2, "r^2")),
        CatalogEntry::new("R4-r^-2", "R4", punctured(4), V(Harmonic), euclid(4, "r^-2")),
        CatalogEntry::new("R4-ln-r", "R4", punctured(4), V(ProperBiharmonic), euclid(4, "ln(r)")),
        CatalogEntry::new("R3-r^-1", "R3", punctured(3), V(Harmonic), euclid(3, "1/r")),
        CatalogEntry::new("R3-r", "R3", punctured(3), V(ProperBiharmonic), euclid(3, "r")),
        CatalogEntry::new("R3-r2", "R3", punctured(3), Quasi(6.0), euclid(3, "r^2")),
        CatalogEntry::new("R3-r3", "R3", punctured(3), V(NotBiharmonic), euclid(3, "r^3")),
        CatalogEntry::new("R5-r^-3", "R5", punctured(5), V(Harmonic), euclid(5, "r^-3")),
        CatalogEntry::new("R5-r^-1", "R5", punctured(5), V(ProperBiharmonic), euclid(5, "r^-1")),
        // punctured plane, angular degree 2
        CatalogEntry::new("R2-cos2theta", "R2", punctured(2), V(ProperBiharmonic), euclid(2, "cos(2*theta)")),
        CatalogEntry::new("R2-sin2theta", "R2", punctured(2), V(ProperBiharmonic), euclid(2, "sin(2*theta)")),
        CatalogEntry::new("R2-r4cos2theta", "R2", punctured(2), V(ProperBiharmonic), euclid(2, "r^4*cos(2*theta)")),
        CatalogEntry::new("R2-r2cos2theta", "R2", punctured(2), V(Harmonic), euclid(2, "r^2*cos(2*theta)")),
        // 3-sphere and hyperbolic 3-space
        CatalogEntry::new("S3-cotr", "S3", sphere_grid(), V(Harmonic), warped(sph, 3, "cot(r)")),
        CatalogEntry::new("S3-r", "S3", sphere_grid(), V(ProperBiharmonic), warped(sph, 3, "r")),
        CatalogEntry::new("S3-rcotr", "S3", sphere_grid(), Quasi(-2.0), warped(sph, 3, "r*cot(r)")),
        CatalogEntry::new("H3-cothr", "H3", hyperbolic_grid(), V(Harmonic), warped(hyp, 3, "coth(r)")),
        CatalogEntry::new("H3-r", "H3", hyperbolic_grid(), V(ProperBiharmonic), warped(hyp, 3, "r")),
        CatalogEntry::new("H3-rcothr", "H3", hyperbolic_grid(), Quasi(2.0), warped(hyp, 3, "r*coth(r)")),
        // 2-sphere and hyperbolic plane
        CatalogEntry::new("S2-ln-tan-half-r", "S2", sphere_grid(), V(Harmonic), warped(sph, 2, "ln(tan(r/2))")),
        CatalogEntry::new("S2-ln-sin-r", "S2", sphere_grid(), Quasi(-1.0), warped(sph, 2, "ln(sin(r))")),
        CatalogEntry::new("S2-log-product", "S2", sphere_grid(), V(ProperBiharmonic), closed_form(ClosedForm::Spherical(2), 3)),
        CatalogEntry::new("H2-ln-tanh-half-r", "H2", hyperbolic_grid(), V(Harmonic), warped(hyp, 2, "ln(tanh(r/2))")),
        CatalogEntry::new("H2-ln-sinh-r", "H2", hyperbolic_grid(), Quasi(1.0), warped(hyp, 2, "ln(sinh(r))")),
        CatalogEntry::new("H2-log-product", "H2", hyperbolic_grid(), V(ProperBiharmonic), closed_form(ClosedForm::Hyperbolic(2), 3)),
        // conformal charts
        CatalogEntry::new("S2-conformal-ln-t", "S2 conformal", conformal_grid(1), V(Harmonic), closed_form(ClosedForm::ConformalSphere(2), 1)),
        CatalogEntry::new("S2-conformal-ln(1+t^2)", "S2 conformal", conformal_grid(1), Quasi(1.0), closed_form(ClosedForm::ConformalSphere(2), 2)),
        CatalogEntry::new(
            "S2-conformal-log-product",
            "S2 conformal",
            conformal_grid(1),
            V(ProperBiharmonic),
            closed_form(ClosedForm::ConformalSphere(2), 3),
        ),
        CatalogEntry::new("H2-conformal-ln-t", "H2 conformal", conformal_grid(-1), V(Harmonic), closed_form(ClosedForm::ConformalHyperbolic(2), 1)),
        CatalogEntry::new(
            "H2-conformal-ln(1-t^2)",
            "H2 conformal",
            conformal_grid(-1),
            Quasi(-1.0),
            closed_form(ClosedForm::ConformalHyperbolic(2), 2),
        ),
        CatalogEntry::new(
            "H2-conformal-log-product",
            "H2 conformal",
            conformal_grid(-1),
            V(ProperBiharmonic),
            closed_form(ClosedForm::ConformalHyperbolic(2), 3),
        ),
        CatalogEntry::new("S3-conformal-arctan-t", "S3 conformal", Sampler::radial(0.2, 4.0, 60), V(ProperBiharmonic), || {
            Ok(Subject::Radial {
                operator: RadialOperator::conformal(1, 3)?,
                field: Expr::parse("atan(t)")?.to_radial()?.with_label("atan(t)"),
            })
        }),
        CatalogEntry::new("S4-numeric-basis-4th", "S4", Sampler::radial(0.4, PI - 0.4, 40), V(ProperBiharmonic), || {
            let space = ModelSpace::spherical(4)?;
            let basis = numeric_basis(&space, &QuadratureConfig::default())?;
            Ok(Subject::radial(&space, basis.function(3).clone()))
        }),
        // separable products
        CatalogEntry::new(
            "S2-k1-separable",
            "S2",
            Sampler::product(2, 0.3, PI - 0.3, 12, 5, 51),
            V(ProperBiharmonic),
            product(sph, 1, examples::sphere_degree1),
        ),
        CatalogEntry::new(
            "H2-k1-separable",
            "H2",
            Sampler::product(2, 0.3, 3.0, 12, 5, 52),
            V(ProperBiharmonic),
            product(hyp, 1, examples::hyperbolic_degree1),
        ),
        CatalogEntry::new(
            "S2-k2-separable",
            "S2",
            Sampler::product(2, 0.3, PI - 0.3, 12, 5, 53),
            V(ProperBiharmonic),
            product(sph, 2, examples::sphere_degree2),
        ),
        CatalogEntry::new("H3-k2-numeric-separable", "H3", Sampler::product(3, 0.5, 2.5, 10, 4, 54), V(ProperBiharmonic), || {
            let space = ModelSpace::hyperbolic(3)?;
            let angular = harmonic_basis(3, 2)?.remove(0);
            let b = separable::build(&space, 2, angular, [0.0, 0.0, 1.0, 1.0], &QuadratureConfig::default())?;
            Ok(Subject::Separable {
                space,
                field: b.field().clone(),
            })
        }),
        // positive-Laplacian families on punctured space
        CatalogEntry::new("R2-family", "R2", punctured(2), Quasi(4.0), family(2, 1.0, 0.5, 1.0, 0.0)),
        CatalogEntry::new("R3-family", "R3", punctured(3), V(ProperBiharmonic), family(3, 1.0, 1.0, 0.5, 2.0)),
        CatalogEntry::new("R4-family", "R4", punctured(4), V(ProperBiharmonic), family(4, 0.0, 1.0, 1.0, 1.0)),
        CatalogEntry::new("R5-|x|^2-|x|^-1", "R5", punctured(5), V(ProperBiharmonic), family(5, 0.0, 0.0, 1.0, -1.0)),
        CatalogEntry::new("R6-family", "R6", punctured(6), V(ProperBiharmonic), family(6, -1.0, 2.0, 0.25, -1.0)),
    ]
}

/// Runs one entry at threshold `tau`.
pub fn run_entry(entry: &CatalogEntry, tau: f64) -> CatalogOutcome {
    let start = Instant::now();
    let result: Result<(String, bool, f64)> = (|| {
        let subject = entry.subject()?;
        Ok(match entry.expected {
            Expectation::Verdict(v) => {
                let rep = classify(&subject, &entry.sampler, tau)?;
                (rep.verdict.to_string(), rep.verdict == v, rep.max_bilaplacian)
            }
            Expectation::Quasi(c) => {
                let rep = classify(&subject, &entry.sampler, tau)?;
                let ok = rep.verdict == Verdict::QuasiHarmonic && (rep.mean_laplacian - c).abs() <= tau * (1.0 + c.abs());
                (format!("{} ({:.9})", rep.verdict, rep.mean_laplacian), ok, rep.mean_laplacian)
            }
            Expectation::BiEigen(mu) => {
                let res = eigen_residual(&subject, mu, &entry.sampler)?;
                let scale = sample_scale(&subject, &entry.sampler)?;
                (format!("residual {res:.3e}"), res < tau * (1.0 + mu * scale), res)
            }
            Expectation::Buckling(nu) => {
                let res = buckling_residual(&subject, nu, &entry.sampler)?;
                let scale = sample_scale(&subject, &entry.sampler)?;
                (format!("residual {res:.3e}"), res < tau * (1.0 + nu * scale), res)
            }
        })
    })();
    let (observed, passed, metric) = match result {
        Ok(v) => v,
        Err(e) => (format!("error: {e}"), false, f64::NAN),
    };
    CatalogOutcome {
        name: entry.name.to_string(),
        space: entry.space.to_string(),
        expected: entry.expected.to_string(),
        observed,
        passed,
        metric,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_catalog(tau: f64) -> CatalogReport {
    let outcomes: Vec<CatalogOutcome> = catalog().iter().map(|e| run_entry(e, tau)).collect();
    let passed = outcomes.iter().all(|o| o.passed);
    CatalogReport {
        tolerance: tau,
        outcomes,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::DEFAULT_TAU;

    #[test]
    fn names_are_unique() {
        let names: Vec<_> = catalog().iter().map(|e| e.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }

    #[test]
    fn full_catalog_passes() {
        let rep = run_catalog(DEFAULT_TAU);
        for o in rep.failures() {
            eprintln!("{} expected {} observed {}", o.name, o.expected, o.observed);
        }
        assert!(rep.passed);
    }

    #[test]
    fn verdicts_stable_across_thresholds() {
        for tau in [1e-7, 1e-5] {
            let rep = run_catalog(tau);
            for o in rep.failures() {
                eprintln!("tau={tau}: {} expected {} observed {}", o.name, o.expected, o.observed);
            }
            assert!(rep.passed);
        }
    }

    #[test]
    fn verdicts_scale_invariant() {
        for e in catalog() {
            let Expectation::Verdict(v) = e.expected else { continue };
            let subject = e.subject().unwrap();
            for alpha in [1e-3, 1e3] {
                let rep = classify(&subject.scaled(alpha).unwrap(), &e.sampler, DEFAULT_TAU).unwrap();
                assert_eq!(rep.verdict, v, "{} alpha={alpha}", e.name);
            }
        }
    }

    #[test]
    fn report_lists_every_entry() {
        let rep = run_catalog(DEFAULT_TAU);
        assert_eq!(rep.outcomes.len(), catalog().len());
        let q = rep.outcomes.iter().find(|o| o.name == "S3-rcotr").unwrap();
        assert!((q.metric + 2.0).abs() < 1e-9);
    }
}
