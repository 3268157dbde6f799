use biharm::expr::Expr;
use biharm::geometry::{ModelSpace, WarpFunction};
use biharm::harmonics::harmonic_basis;
use biharm::quadrature::QuadratureConfig;
use biharm::radial::{closed_form_basis, span_match, numeric_basis, ClosedForm};
use biharm::separable::build;
use biharm::verify::{catalog::run_catalog, classify, Sampler, Subject, Verdict};
use biharm::Error;

#[test]
fn numeric_radial_basis_spans_closed_form() {
    let cfg = QuadratureConfig::default();
    let space = ModelSpace::hyperbolic(3).unwrap();
    let numeric = numeric_basis(&space, &cfg).unwrap();
    let exact = closed_form_basis(ClosedForm::Hyperbolic(3), &cfg).unwrap();
    let samples = numeric.sample_points(50);
    let geodesic = numeric.geodesic_functions();
    assert!(span_match(exact.functions(), &geodesic, &samples).unwrap() < 1e-6);
    for r in numeric.bilaplacian_residuals(50).unwrap() {
        assert!(r < 1e-6, "residual {r}");
    }
}

#[test]
fn numeric_basis_in_high_dimension() {
    let cfg = QuadratureConfig::default();
    let space = ModelSpace::spherical(6).unwrap();
    let basis = numeric_basis(&space, &cfg).unwrap();
    let lap = basis.laplacian_magnitudes(50).unwrap();
    let bilap = basis.bilaplacian_residuals(50).unwrap();
    // constant and harmonic members, then two proper ones
    assert!(lap[0] < 1e-12);
    assert!(lap[2] > 1e-3 && lap[3] > 1e-3);
    for (i, r) in bilap.iter().enumerate() {
        assert!(*r < 1e-6 * (1.0 + lap[i]), "function {i}: {r}");
    }
}

#[test]
fn separable_products_classify_as_biharmonic() {
    let cfg = QuadratureConfig::default();
    for (space, k) in [
        (ModelSpace::spherical(3).unwrap(), 1),
        (ModelSpace::hyperbolic(3).unwrap(), 2),
        (ModelSpace::euclidean(4).unwrap(), 2),
    ] {
        let m = space.dim();
        let angular = harmonic_basis(m, k).unwrap().remove(0);
        let sep = build(&space, k, angular, [0.0, 0.0, 1.0, 1.0], &cfg).unwrap();
        let (lo, hi) = sep.valid_interval();
        let (dlo, dhi) = space.default_interval();
        let sampler = Sampler::product(m, lo.max(dlo), hi.min(dhi), 12, 4, 3);
        let subject = Subject::Separable {
            space: space.clone(),
            field: sep.field().clone(),
        };
        let report = classify(&subject, &sampler, 1e-6).unwrap();
        assert_eq!(report.verdict, Verdict::ProperBiharmonic, "{m} {k}: {report:?}");
    }
}

#[test]
fn construction_errors_are_typed() {
    let sigma = Expr::parse("r - 1").unwrap().to_radial().unwrap();
    assert!(matches!(WarpFunction::custom(sigma, 0.5, 2.0), Err(Error::InvalidWarp(_))));
    let space = ModelSpace::spherical(3).unwrap();
    let angular = harmonic_basis(3, 0).unwrap().remove(0);
    assert!(build(&space, 0, angular, [1.0; 4], &QuadratureConfig::default()).is_err());
    assert!(matches!(Expr::parse("sin(("), Err(Error::Parse { .. })));
}

#[test]
fn regression_catalog_passes() {
    let report = run_catalog(1e-6);
    let failed: Vec<_> = report.failures().map(|o| o.name.clone()).collect();
    assert!(report.passed, "{failed:?}");
}
