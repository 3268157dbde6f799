use biharm::expr::Expr;
use biharm::geometry::{ModelSpace, RadialField};
use biharm::harmonics::{harmonic_basis, poly_laplacian, HomogeneousPolynomial};
use biharm::jets::{euclidean_bilaplacian, euclidean_laplacian, Jet1, Jet2, Scalar};
use biharm::punctured::{family_eval, fit_family, point_at, PositiveLaplacianFamily};
use biharm::radial::{closed_form_basis, linspace, span_match, ClosedForm};
use biharm::quadrature::QuadratureConfig;
use biharm::sphere::{sphere_bilaplacian, sphere_samples, SphereFunction};
use biharm::verify::{classify, Sampler, Subject, Verdict};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn poly_strategy(n: usize, k: usize) -> impl Strategy<Value = HomogeneousPolynomial> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |c| {
        // a random combination of products x_i^(k-1) x_j
        let mut p = HomogeneousPolynomial::zero(n, k);
        for i in 0..n {
            for j in 0..n {
                let mut e = vec![0u32; n];
                e[i] += k as u32 - 1;
                e[j] += 1;
                let mono = HomogeneousPolynomial::from_terms(n, k, &[(e, 1.0)]).unwrap();
                p.add_scaled(&mono, c[i * n + j]).unwrap();
            }
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jet1_product_and_quotient(a in -3.0f64..3.0, b in 0.5f64..3.0) {
        let x = Jet1::variable(a);
        let y = Jet1::variable(b) + 1.0;
        let q = (x * y) / y;
        for n in 0..5 {
            prop_assert!(close(q.d(n), x.d(n), 1e-12));
        }
        // d/dx sin(x) exp(x) at a
        let f = x.sin() * x.exp();
        let expected = a.exp() * (a.sin() + a.cos());
        prop_assert!(close(f.d(1), expected, 1e-12));
    }

    #[test]
    fn jet2_matches_jet1_on_one_axis(a in -2.0f64..2.0) {
        let j2 = Jet2::linear(a, 1.0, 0.0);
        let j1 = Jet1::variable(a);
        let f2 = (j2 * j2).exp() * j2.cos();
        let f1 = (j1 * j1).exp() * j1.cos();
        for n in 0..3 {
            prop_assert!(close(f2.d(n, 0), f1.d(n), 1e-12));
        }
    }

    #[test]
    fn jet_laplacian_matches_polynomial_laplacian(
        p in poly_strategy(4, 4),
        x in prop::collection::vec(-1.5f64..1.5, 4),
    ) {
        let jet = euclidean_laplacian(&p.to_field(), &x).unwrap();
        let exact = poly_laplacian(&p).eval(&x);
        prop_assert!(close(jet, exact, 1e-10));
        let jet2 = euclidean_bilaplacian(&p.to_field(), &x).unwrap();
        let exact2 = poly_laplacian(&poly_laplacian(&p)).eval(&x);
        prop_assert!(close(jet2, exact2, 1e-10));
    }

    #[test]
    fn sphere_bilaplacian_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, seed in 0u64..1000) {
        let f = Expr::parse("exp(x1) * x2").unwrap().to_field(4).unwrap();
        let g = Expr::parse("sin(x3 + x4)").unwrap().to_field(4).unwrap();
        let fs = SphereFunction::from_ambient(3, f.clone()).unwrap();
        let gs = SphereFunction::from_ambient(3, g.clone()).unwrap();
        let combo = SphereFunction::from_ambient(3, f.scaled(a).plus(&g.scaled(b))).unwrap();
        for x in sphere_samples(3, 4, seed).unwrap() {
            let lhs = sphere_bilaplacian(&combo, &x).unwrap();
            let rhs = a * sphere_bilaplacian(&fs, &x).unwrap() + b * sphere_bilaplacian(&gs, &x).unwrap();
            prop_assert!(close(lhs, rhs, 1e-9));
        }
    }

    #[test]
    fn verdict_is_scale_invariant(alpha in prop::sample::select(vec![1e-3, 0.1, 7.0, 1e3])) {
        let space = ModelSpace::euclidean(3).unwrap();
        let sampler = Sampler::radial(0.5, 3.0, 50);
        for (src, verdict) in [
            ("r^2", Verdict::QuasiHarmonic),
            ("1/r", Verdict::Harmonic),
            ("r", Verdict::ProperBiharmonic),
        ] {
            let field = Expr::parse(src).unwrap().to_radial().unwrap();
            let subject = Subject::radial(&space, field).scaled(alpha).unwrap();
            prop_assert_eq!(classify(&subject, &sampler, 1e-6).unwrap().verdict, verdict);
        }
    }

    #[test]
    fn span_is_invariant_under_recombination(c in prop::collection::vec(0.5f64..2.0, 4)) {
        let basis = closed_form_basis(ClosedForm::Euclidean(3), &QuadratureConfig::default()).unwrap();
        let f = basis.functions();
        // a triangular, hence invertible, recombination
        let mixed: Vec<RadialField> = (0..4)
            .map(|i| {
                let terms: Vec<(f64, RadialField)> =
                    (0..=i).map(|j| (if j == i { c[i] } else { 1.0 }, f[j].clone())).collect();
                RadialField::combination(&terms)
            })
            .collect();
        let samples = linspace(0.3, 2.0, 40);
        prop_assert!(span_match(&mixed, f, &samples).unwrap() < 1e-9);
        prop_assert!(span_match(f, &mixed, &samples).unwrap() < 1e-9);
    }

    #[test]
    fn family_fit_recovers_coefficients(
        m in 2usize..7,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        a in 0.1f64..2.0,
        b in 0.1f64..2.0,
    ) {
        // inside the admissible sign region for each dimension
        let b = match m {
            2 => 0.0,
            3 | 4 => b,
            _ => -b,
        };
        let fam = PositiveLaplacianFamily::new(m, c1, c2, a, b).unwrap();
        let samples: Vec<(Vec<f64>, f64)> = (0..24)
            .map(|i| {
                let x = point_at(m, 0.3 + 0.1 * i as f64, i);
                let v = family_eval(&fam, &x).unwrap();
                (x, v)
            })
            .collect();
        let fit = fit_family(&samples, m).unwrap();
        prop_assert!(fit.residual < 1e-9);
        prop_assert!(close(fit.family.a, a, 1e-7));
        prop_assert!(close(fit.family.c1, c1, 1e-6));
        prop_assert!(fit.constraints_ok);
    }
}

#[test]
fn harmonic_bases_are_harmonic_and_independent() {
    for (n, k) in [(3, 3), (4, 2), (5, 4)] {
        let basis = harmonic_basis(n, k).unwrap();
        for h in &basis {
            assert!(poly_laplacian(h.poly()).is_zero());
        }
        // dimension of degree-k harmonics in n variables
        let binom = |a: usize, b: usize| (0..b).fold(1usize, |acc, i| acc * (a - i) / (i + 1));
        let dim = binom(n + k - 1, k) - if k >= 2 { binom(n + k - 3, k - 2) } else { 0 };
        assert_eq!(basis.len(), dim);
    }
}
