//! Biharmonic functions with one-signed Laplacian on `R^m \ {0}`, positive
//! harmonic functions there, and bounded biharmonic fixtures.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::RadialField;
use crate::jets::{FieldFn, Scalar, ScalarField, euclidean_laplacian};
use crate::radial::fit_data;

/// `c₁ + c₂ ln|x| + a|x|²` (m = 2), `c₁ + c₂|x|⁻² + a|x|² + b ln|x|`
/// (m = 4), `c₁ + c₂|x|^{2-m} + a|x|² + b|x|^{4-m}` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositiveLaplacianFamily {
    pub m: usize,
    pub c1: f64,
    pub c2: f64,
    pub a: f64,
    pub b: f64,
}

/// The radial terms multiplying `c₁, c₂, a, b`; no `b` term for m = 2.
pub fn family_basis(m: usize) -> Vec<RadialField> {
    let mut out = vec![RadialField::constant(1.0).with_label("1")];
    let p = m as i32;
    match m {
        2 => {
            out.push(RadialField::from_jet_fn(|r| r.ln()).with_label("ln r"));
            out.push(RadialField::from_jet_fn(|r| r * r).with_label("r^2"));
        }
        4 => {
            out.push(RadialField::from_jet_fn(|r| r.powi(-2)).with_label("r^-2"));
            out.push(RadialField::from_jet_fn(|r| r * r).with_label("r^2"));
            out.push(RadialField::from_jet_fn(|r| r.ln()).with_label("ln r"));
        }
        _ => {
            out.push(RadialField::from_jet_fn(move |r| r.powi(2 - p)).with_label(format!("r^{}", 2 - p)));
            out.push(RadialField::from_jet_fn(|r| r * r).with_label("r^2"));
            out.push(RadialField::from_jet_fn(move |r| r.powi(4 - p)).with_label(format!("r^{}", 4 - p)));
        }
    }
    out
}

struct FamilyField(PositiveLaplacianFamily);

impl FieldFn for FamilyField {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let f = self.0;
        let r2 = x.iter().fold(S::constant(0.0), |acc, &v| acc + v * v);
        let r = r2.sqrt();
        let p = f.m as i32;
        let base = r2 * f.a + f.c1;
        match f.m {
            2 => base + r.ln() * f.c2,
            4 => base + r2.recip() * f.c2 + r.ln() * f.b,
            _ => base + r.powi(2 - p) * f.c2 + r.powi(4 - p) * f.b,
        }
    }
}

impl PositiveLaplacianFamily {
    pub fn new(m: usize, c1: f64, c2: f64, a: f64, b: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {m}")));
        }
        Ok(PositiveLaplacianFamily { m, c1, c2, a, b })
    }

    pub fn to_field(&self) -> ScalarField {
        ScalarField::new(self.m, FamilyField(*self)).with_label(format!(
            "family m={} (c1={}, c2={}, a={}, b={})",
            self.m, self.c1, self.c2, self.a, self.b
        ))
    }

    /// `(α, β)` with `Δu = α + β|x|^{2-m}`: `(2ma, 2(4-m)b)`, and
    /// `(8a, 2b)` for m = 4.
    pub fn laplacian_form(&self) -> (f64, f64) {
        let m = self.m as f64;
        match self.m {
            2 => (4.0 * self.a, 0.0),
            4 => (8.0 * self.a, 2.0 * self.b),
            _ => (2.0 * m * self.a, 2.0 * (4.0 - m) * self.b),
        }
    }

    /// `(c₁, c₂, -a, -b)`.
    pub fn sign_flipped(&self) -> Self {
        PositiveLaplacianFamily {
            a: -self.a,
            b: -self.b,
            ..*self
        }
    }
}

/// Closed-form value at `x ≠ 0`.
pub fn family_eval(fam: &PositiveLaplacianFamily, x: &[f64]) -> Result<f64> {
    if x.len() != fam.m {
        return Err(Error::DimensionMismatch {
            expected: fam.m,
            got: x.len(),
        });
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::OutOfDomain {
            r: 0.0,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(FamilyField(*fam).eval(x))
}

/// `n` log-spaced values in `[lo, hi]`.
pub fn log_radii(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![(lo * hi).sqrt()];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// A point of norm `r` whose direction cycles deterministically through
/// the sphere.
pub fn point_at(m: usize, r: f64, i: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m)
        .map(|j| ((i + 1) as f64 * 0.7548776662 + (j + 1) as f64 * 0.5698402910).fract() - 0.5 + 1e-3)
        .collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x *= r / n);
    v
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub sign_table_ok: bool,
    pub sampled_ok: bool,
    pub min_laplacian: f64,
    pub violations: Vec<String>,
}

impl ConstraintReport {
    pub fn ok(&self) -> bool {
        self.sign_table_ok && self.sampled_ok
    }
}

/// Checks the sign table (m = 2: a > 0; m ∈ {3, 4}: a, b ≥ 0; otherwise
/// a ≥ 0, b ≤ 0; a² + b² ≠ 0) and `Δu > 0` at 30 log-spaced radii in
/// `[0.1, 10]`.
pub fn validate(fam: &PositiveLaplacianFamily) -> ConstraintReport {
    let mut violations = Vec::new();
    let (a, b) = (fam.a, fam.b);
    match fam.m {
        2 => {
            if !(a > 0.0) {
                violations.push(format!("m=2 requires a > 0, got a = {a}"));
            }
            if b != 0.0 {
                violations.push(format!("m=2 has no b term, got b = {b}"));
            }
        }
        3 | 4 => {
            if a < 0.0 || b < 0.0 {
                violations.push(format!("m={} requires a, b >= 0, got a = {a}, b = {b}", fam.m));
            }
        }
        _ => {
            if a < 0.0 || b > 0.0 {
                violations.push(format!("m={} requires a >= 0, b <= 0, got a = {a}, b = {b}", fam.m));
            }
        }
    }
    if a * a + b * b == 0.0 {
        violations.push("a^2 + b^2 must be nonzero".into());
    }
    let sign_table_ok = violations.is_empty();
    let field = fam.to_field();
    let mut min_laplacian = f64::INFINITY;
    let mut finite = true;
    for (i, r) in log_radii(0.1, 10.0, 30).into_iter().enumerate() {
        match euclidean_laplacian(&field, &point_at(fam.m, r, i)) {
            Ok(lap) if lap.is_finite() => min_laplacian = min_laplacian.min(lap),
            _ => finite = false,
        }
    }
    let sampled_ok = finite && min_laplacian > 0.0;
    if !sampled_ok {
        violations.push(format!("sampled Laplacian not positive (min {min_laplacian:e})"));
    }
    ConstraintReport {
        sign_table_ok,
        sampled_ok,
        min_laplacian,
        violations,
    }
}

/// The positive harmonic functions on `R^m \ {0}`: the constant `a` for
/// m = 2 and `a + b|x|^{2-m}` with `a, b ≥ 0`, `a + b > 0` for m > 2.
pub fn positive_harmonic_form(m: usize, a: f64, b: f64) -> Result<ScalarField> {
    let p = m as i32;
    match m {
        0 | 1 => Err(Error::InvalidArgument(format!("dimension must be at least 2, got {m}"))),
        2 => {
            if !(a > 0.0) || b != 0.0 {
                return Err(Error::Constraint(format!(
                    "positive harmonic functions on the punctured plane are positive constants (a = {a}, b = {b})"
                )));
            }
            Ok(ScalarField::new(2, PhForm { a, b: 0.0, p: 2 }).with_label(format!("{a}")))
        }
        _ => {
            if a < 0.0 || b < 0.0 || !(a + b > 0.0) {
                return Err(Error::Constraint(format!(
                    "need a, b >= 0 and a + b > 0, got a = {a}, b = {b}"
                )));
            }
            Ok(ScalarField::new(m, PhForm { a, b, p }).with_label(format!("{a} + {b}|x|^{}", 2 - p)))
        }
    }
}

struct PhForm {
    a: f64,
    b: f64,
    p: i32,
}

impl FieldFn for PhForm {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        let r = x.iter().fold(S::constant(0.0), |acc, &v| acc + v * v).sqrt();
        r.powi(2 - self.p) * self.b + self.a
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyFit {
    pub family: PositiveLaplacianFamily,
    pub residual: f64,
    pub constraints_ok: bool,
}

/// Least-squares identification of samples `(x, value)` with a family
/// member. The residual is `max |u - fit| / max |u|`.
pub fn fit_family(samples: &[(Vec<f64>, f64)], m: usize) -> Result<FamilyFit> {
    if samples.len() < 8 {
        return Err(Error::InvalidArgument(format!(
            "need at least 8 samples, got {}",
            samples.len()
        )));
    }
    let mut radii = Vec::with_capacity(samples.len());
    let mut values = Vec::with_capacity(samples.len());
    for (x, v) in samples {
        if x.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: x.len() });
        }
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(r > 0.0) {
            return Err(Error::OutOfDomain {
                r,
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        radii.push(r);
        values.push(*v);
    }
    let mut distinct = radii.clone();
    distinct.sort_by(|a, b| a.total_cmp(b));
    distinct.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    if distinct.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "need samples at 4 distinct radii, got {}",
            distinct.len()
        )));
    }
    let fit = fit_data(&radii, &values, &family_basis(m))?;
    let c = &fit.coefficients;
    let family = PositiveLaplacianFamily {
        m,
        c1: c[0],
        c2: c[1],
        a: c[2],
        b: if m == 2 { 0.0 } else { c[3] },
    };
    Ok(FamilyFit {
        family,
        residual: fit.residual,
        constraints_ok: validate(&family).ok(),
    })
}

/// `u = h₁ + |x|²h₂ + (log term)` for a family member.
pub struct AlmansiParts {
    pub h1: ScalarField,
    pub h2: ScalarField,
    /// Coefficient of the extra `ln|x|` term needed when m = 4.
    pub log_coefficient: f64,
}

pub fn almansi_parts(fam: &PositiveLaplacianFamily) -> AlmansiParts {
    let m = fam.m;
    let harmonic = |c1: f64, c2: f64| {
        PositiveLaplacianFamily {
            m,
            c1,
            c2,
            a: 0.0,
            b: 0.0,
        }
        .to_field()
    };
    match m {
        2 | 4 => AlmansiParts {
            h1: harmonic(fam.c1, fam.c2),
            h2: harmonic(fam.a, 0.0),
            log_coefficient: if m == 4 { fam.b } else { 0.0 },
        },
        _ => AlmansiParts {
            h1: harmonic(fam.c1, fam.c2),
            h2: harmonic(fam.a, fam.b),
            log_coefficient: 0.0,
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub biharmonic: bool,
    pub bounded: bool,
}

#[derive(Clone, Debug)]
pub struct BoundedFixture {
    pub name: String,
    pub m: usize,
    pub field: ScalarField,
    pub expected: Expected,
}

fn fixture(name: &str, m: usize, src: &str, biharmonic: bool, bounded: bool) -> BoundedFixture {
    let field = Expr::parse(src)
        .and_then(|e| e.to_field(m))
        .expect("fixture expressions parse");
    BoundedFixture {
        name: name.to_string(),
        m,
        field: field.with_label(src),
        expected: Expected { biharmonic, bounded },
    }
}

/// Bounded biharmonic functions on `R^m \ {0}` and negative controls.
///
/// For m = 3 the bounded space is spanned by `1` and `xᵢ/|x|`. The
/// listing `cos r cos θ, sin r sin θ, cos r` read with `r = |x|` is kept
/// as negative controls: those fields are not biharmonic.
pub fn bounded_fixtures(m: usize) -> Vec<BoundedFixture> {
    let mut out = vec![fixture("1", m, "1", true, true)];
    match m {
        0 | 1 => return vec![],
        2 => {
            out.push(fixture("cos 2theta", 2, "(x1^2 - x2^2)/(x1^2 + x2^2)", true, true));
            out.push(fixture("sin 2theta", 2, "2*x1*x2/(x1^2 + x2^2)", true, true));
            out.push(fixture("r^4 cos 2theta", 2, "(x1^2 - x2^2)*(x1^2 + x2^2)", true, false));
            out.push(fixture("r^2 ln r", 2, "r^2*ln(r)", true, false));
        }
        3 => {
            for i in 1..=3 {
                out.push(fixture(&format!("x{i}/|x|"), 3, &format!("x{i}/r"), true, true));
            }
            out.push(fixture("cos r cos theta (literal)", 3, "cos(r)*x3/r", false, true));
            out.push(fixture("cos r (literal)", 3, "cos(r)", false, true));
            out.push(fixture("|x|", 3, "r", true, false));
        }
        _ => {
            out.push(fixture("x1/|x|", m, "x1/r", false, true));
            out.push(fixture("|x|^2", m, "r^2", true, false));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::euclidean_bilaplacian;
    use approx::assert_relative_eq;

    #[test]
    fn family_values() {
        let f = PositiveLaplacianFamily::new(2, 3.0, 2.0, 5.0, 0.0).unwrap();
        assert_relative_eq!(family_eval(&f, &[0.6, 0.8]).unwrap(), 8.0, epsilon = 1e-14);
        let lap = euclidean_laplacian(&f.to_field(), &[1.3, -0.4]).unwrap();
        assert_relative_eq!(lap, 20.0, epsilon = 1e-10);
        let f4 = PositiveLaplacianFamily::new(4, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(family_eval(&f4, &[0.5, 0.5, 0.5, 0.5]).unwrap(), 2.0, epsilon = 1e-14);
        let f5 = PositiveLaplacianFamily::new(5, 0.0, 0.0, 1.0, -1.0).unwrap();
        let x = [1.0, 2.0, 0.0, 0.0, 2.0];
        assert_relative_eq!(family_eval(&f5, &x).unwrap(), 9.0 - 1.0 / 3.0, epsilon = 1e-14);
        assert!(family_eval(&f5, &[0.0; 5]).is_err());
    }

    #[test]
    fn validation_examples() {
        assert!(validate(&PositiveLaplacianFamily::new(5, 0.0, 0.0, 1.0, -1.0).unwrap()).ok());
        let zero = validate(&PositiveLaplacianFamily::new(5, 0.0, 0.0, 0.0, 0.0).unwrap());
        assert!(!zero.sign_table_ok && !zero.sampled_ok);
        let log = validate(&PositiveLaplacianFamily::new(2, 0.0, 1.0, 0.0, 0.0).unwrap());
        assert!(!log.ok());
        // m=2 read with "a, b >= 0" would admit a = 0; the sampled check rejects it
        assert!(!log.sampled_ok);
        assert!(validate(&PositiveLaplacianFamily::new(3, 1.0, -2.0, 0.0, 1.0).unwrap()).ok());
        assert!(!validate(&PositiveLaplacianFamily::new(6, 0.0, 0.0, 1.0, 1.0).unwrap()).sign_table_ok);
    }

    #[test]
    fn members_are_biharmonic_with_positive_laplacian() {
        for m in 2..=7 {
            let fam = PositiveLaplacianFamily::new(m, 0.4, -1.1, 0.8, if m == 2 { 0.0 } else if m <= 4 { 0.5 } else { -0.5 })
                .unwrap();
            let field = fam.to_field();
            let flipped = fam.sign_flipped().to_field();
            let (alpha, beta) = fam.laplacian_form();
            for (i, r) in log_radii(0.2, 5.0, 50).into_iter().enumerate() {
                let x = point_at(m, r, i);
                let scale = 1.0 + family_eval(&fam, &x).unwrap().abs();
                assert!(euclidean_bilaplacian(&field, &x).unwrap().abs() < 1e-6 * scale);
                let lap = euclidean_laplacian(&field, &x).unwrap();
                assert!(lap > 0.0);
                assert_relative_eq!(lap, alpha + beta * r.powi(2 - m as i32), max_relative = 1e-9);
                assert!(euclidean_laplacian(&flipped, &x).unwrap() < 0.0);
            }
        }
    }

    #[test]
    fn positive_harmonic_forms() {
        let f = positive_harmonic_form(3, 1.0, 2.0).unwrap();
        let x = [0.3, -0.4, 1.2];
        assert_relative_eq!(f.eval(&x), 1.0 + 2.0 / 1.3, epsilon = 1e-14);
        assert!(euclidean_laplacian(&f, &x).unwrap().abs() < 1e-9);
        let c = positive_harmonic_form(2, 2.5, 0.0).unwrap();
        assert_eq!(c.eval(&[0.1, 7.0]), 2.5);
        assert!(positive_harmonic_form(4, -1.0, 1.0).is_err());
        assert!(positive_harmonic_form(2, 1.0, 1.0).is_err());
    }

    #[test]
    fn fitting() {
        let fam = PositiveLaplacianFamily::new(5, 0.0, 0.0, 1.0, -1.0).unwrap();
        let samples: Vec<_> = log_radii(0.3, 4.0, 20)
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let x = point_at(5, r, i);
                let v = family_eval(&fam, &x).unwrap();
                (x, v)
            })
            .collect();
        let fit = fit_family(&samples, 5).unwrap();
        assert!(fit.residual < 1e-8);
        assert!(fit.constraints_ok);
        assert_relative_eq!(fit.family.a, 1.0, epsilon = 1e-8);
        assert_relative_eq!(fit.family.b, -1.0, epsilon = 1e-8);
        assert!(fit.family.c1.abs() < 1e-8 && fit.family.c2.abs() < 1e-8);

        let sample = |src: &str| -> Vec<(Vec<f64>, f64)> {
            let f = Expr::parse(src).unwrap().to_field(2).unwrap();
            log_radii(0.2, 5.0, 40)
                .into_iter()
                .enumerate()
                .map(|(i, r)| {
                    let x = point_at(2, r, i);
                    let v = f.eval(&x);
                    (x, v)
                })
                .collect()
        };
        assert!(fit_family(&sample("r^2*ln(r)"), 2).unwrap().residual > 1e-2);
        assert!(fit_family(&sample("(x1^2-x2^2)/(x1^2+x2^2)"), 2).unwrap().residual > 1e-2);
        assert!(fit_family(&samples[..5], 5).is_err());
    }

    #[test]
    fn almansi_shape() {
        for m in [3, 4, 5] {
            let fam = PositiveLaplacianFamily::new(m, 0.3, 0.7, 1.1, if m == 5 { -0.4 } else { 0.4 }).unwrap();
            let parts = almansi_parts(&fam);
            let u = fam.to_field();
            for i in 0..10 {
                let x = point_at(m, 0.5 + 0.3 * i as f64, i);
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!(euclidean_laplacian(&parts.h1, &x).unwrap().abs() < 1e-9);
                assert!(euclidean_laplacian(&parts.h2, &x).unwrap().abs() < 1e-9);
                let rebuilt = parts.h1.eval(&x) + r * r * parts.h2.eval(&x) + parts.log_coefficient * r.ln();
                assert_relative_eq!(rebuilt, u.eval(&x), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn bounded_fixture_flags() {
        for m in [2, 3, 4] {
            for fx in bounded_fixtures(m) {
                let mut worst: f64 = 0.0;
                let mut biggest: f64 = 0.0;
                for (i, r) in log_radii(0.2, 5.0, 30).into_iter().enumerate() {
                    let x = point_at(m, r, i);
                    worst = worst.max(euclidean_bilaplacian(&fx.field, &x).unwrap().abs());
                    biggest = biggest.max(fx.field.eval(&x).abs());
                }
                assert_eq!(worst < 1e-6, fx.expected.biharmonic, "{} m={m}: {worst}", fx.name);
                assert_eq!(biggest <= 1.0 + 1e-12, fx.expected.bounded, "{} m={m}", fx.name);
            }
        }
    }
}
