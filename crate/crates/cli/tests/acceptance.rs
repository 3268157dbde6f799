//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use biharm::expr::Expr;
use biharm::geometry::{
    ModelSpace, RadialField, SeparableField, bilaplacian_separable_radial_factor, laplacian_separable_radial_factor,
};
use biharm::harmonics::{HomogeneousPolynomial, harmonic_basis, monomials};
use biharm::punctured::{PositiveLaplacianFamily, fit_family, log_radii, point_at, validate};
use biharm::quadrature::QuadratureConfig;
use biharm::radial::{
    ClosedForm, RadialOperator, closed_form_basis, conformal_basis, linspace, span_match, numeric_basis,
};
use biharm::separable::{self, examples, numeric_pair, particular_solutions};
use biharm::sphere::{
    BilaplacianRoute, SphereFunction, bilaplacian_poly_restriction, degree2_buckling, laplace_eigenvalue,
    sphere_bilaplacian, sphere_bilaplacian_via, sphere_laplacian, sphere_samples,
};
use biharm::verify::{Sampler, Subject, classify};
use biharm::jets::{Scalar, euclidean_bilaplacian, euclidean_laplacian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b.abs()) })
}

fn sphere_fn(p: &HomogeneousPolynomial) -> SphereFunction {
    SphereFunction::from_polynomial(p).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, k: usize) -> HomogeneousPolynomial {
    let terms: Vec<_> = monomials(n, k).into_iter().map(|e| (e, rng.gen_range(-1.0..1.0))).collect();
    HomogeneousPolynomial::from_terms(n, k, &terms).unwrap()
}

fn spectra_check() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut first_ok = true;
    for m in [2usize, 3, 4, 10] {
        let pts = sphere_samples(m, 50, 100 + m as u64).unwrap();
        first_ok &= laplace_eigenvalue(m, 1).powi(2) == (m * m) as f64;
        for k in 0..=5 {
            let mu = laplace_eigenvalue(m, k).powi(2);
            for h in harmonic_basis(m + 1, k).unwrap() {
                let f = sphere_fn(h.poly());
                let scale = max_abs(pts.iter().map(|x| f.value(x).unwrap()));
                let res = max_abs(pts.iter().map(|x| sphere_bilaplacian(&f, x).unwrap() - mu * f.value(x).unwrap()));
                worst = worst.max(res / (1e-6 * (1.0 + mu * scale)));
                count += 1;
            }
        }
    }
    outcome(
        worst < 1.0 && first_ok,
        format!("{count} harmonics, worst residual/tolerance {worst:.2e}, first bi-eigenvalue m^2 {first_ok}"),
    )
}

fn buckling_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut worst_deg2: f64 = 0.0;
    let mut count = 0;
    for m in [2usize, 3, 4, 10] {
        let n = m + 1;
        let pts = sphere_samples(m, 50, 200 + m as u64).unwrap();
        for k in 0..=5 {
            let nu = laplace_eigenvalue(m, k);
            let basis = harmonic_basis(n, k).unwrap();
            for _ in 0..5 {
                let c: f64 = rng.gen_range(-3.0..3.0);
                let mut h = HomogeneousPolynomial::zero(n, k);
                for b in &basis {
                    h.add_scaled(b.poly(), rng.gen_range(-1.0..1.0)).unwrap();
                }
                // h + c|x|^2 restricted to the sphere is h + c
                let shift = sphere_fn(&HomogeneousPolynomial::norm_power(n, 0).scale(c));
                let f = sphere_fn(&h).plus(&shift).unwrap();
                let scale = max_abs(pts.iter().map(|x| f.value(x).unwrap()));
                let res = max_abs(pts.iter().map(|x| {
                    sphere_bilaplacian(&f, x).unwrap() + nu * sphere_laplacian(&f, x).unwrap()
                }));
                worst = worst.max(res / (1e-6 * scale));
                count += 1;
            }
        }
        let nu2 = degree2_buckling(m);
        for _ in 0..5 {
            let f = sphere_fn(&random_poly(&mut rng, n, 2));
            let scale = max_abs(pts.iter().map(|x| f.value(x).unwrap()));
            let res = max_abs(pts.iter().map(|x| {
                sphere_bilaplacian(&f, x).unwrap() + nu2 * sphere_laplacian(&f, x).unwrap()
            }));
            worst_deg2 = worst_deg2.max(res / (1e-6 * scale));
        }
    }
    outcome(
        worst < 1.0 && worst_deg2 < 1.0,
        format!("{count} fields, worst residual/tolerance {worst:.2e}; degree-2 restrictions {worst_deg2:.2e}"),
    )
}

fn smooth_field(rng: &mut ChaCha8Rng, n: usize) -> String {
    let mut lin = |s: f64| {
        (1..=n)
            .map(|i| format!("({:.6})*x{i}", s * rng.gen_range(-1.0..1.0)))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let (a, b, c) = (lin(0.6), lin(1.5), lin(1.0));
    format!("exp({a}) + sin({b}) + ({c})^2 * cos({a}) + 1/(3 + ({b})^2)")
}

fn routes_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut m3_identical = true;
    for m in [2usize, 3, 5] {
        let pts = sphere_samples(m, 20, 300 + m as u64).unwrap();
        for _ in 0..10 {
            let src = smooth_field(&mut rng, m + 1);
            let f = SphereFunction::from_ambient(m, Expr::parse(&src).unwrap().to_field(m + 1).unwrap()).unwrap();
            let pairs: Vec<(f64, f64)> = pts
                .iter()
                .map(|x| {
                    (
                        sphere_bilaplacian_via(&f, x, BilaplacianRoute::Intrinsic).unwrap(),
                        sphere_bilaplacian_via(&f, x, BilaplacianRoute::Ambient).unwrap(),
                    )
                })
                .collect();
            let size = max_abs(pairs.iter().map(|p| p.0));
            worst = worst.max(max_abs(pairs.iter().map(|p| p.0 - p.1)) / size);
            if m == 3 {
                m3_identical &= pairs.iter().all(|p| p.0 == p.1);
            }
        }
    }
    outcome(
        worst < 1e-9 && m3_identical,
        format!("worst relative route gap {worst:.2e}; m=3 routes identical {m3_identical}"),
    )
}

fn fixtures_check() -> Outcome {
    let f = SphereFunction::from_ambient(2, Expr::parse("ln(1-x3)").unwrap().to_field(3).unwrap()).unwrap();
    let pts: Vec<Vec<f64>> = sphere_samples(2, 400, 4)
        .unwrap()
        .into_iter()
        .filter(|x| x[2] < 0.95)
        .take(50)
        .collect();
    let lap_err = max_abs(pts.iter().map(|x| sphere_laplacian(&f, x).unwrap() + 1.0));
    let bilap = max_abs(pts.iter().map(|x| sphere_bilaplacian(&f, x).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut family: f64 = 0.0;
    for _ in 0..5 {
        let (a, b, c): (f64, f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let src = format!("(({a})*x1 + ({b})*x2 + ({c})*x3)/sqrt(1-x4^2)");
        let g = SphereFunction::from_ambient(3, Expr::parse(&src).unwrap().to_field(4).unwrap()).unwrap();
        let pts = sphere_samples(3, 400, 5).unwrap().into_iter().filter(|x| x[3].abs() < 0.95).take(50);
        family = family.max(max_abs(pts.map(|x| sphere_bilaplacian(&g, &x).unwrap())));
    }
    outcome(
        lap_err < 1e-8 && bilap < 1e-7 && family < 1e-7,
        format!(
            "S2 ln(1-x3): |Lap + 1| {lap_err:.2e} (value -1, see ledger), |Bilap| {bilap:.2e}; S3 family |Bilap| {family:.2e}"
        ),
    )
}

fn radial_engine_check() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst_res: f64 = 0.0;
    let mut worst_span: f64 = 0.0;
    let mut spans = 0;
    for space_of in [ModelSpace::euclidean, ModelSpace::spherical, ModelSpace::hyperbolic] {
        for m in [2usize, 3, 4, 5, 7] {
            let space = space_of(m).unwrap();
            let basis = numeric_basis(&space, &cfg).unwrap();
            worst_res = worst_res.max(max_abs(basis.bilaplacian_residuals(60).unwrap()));
            if let Some(kind) = ClosedForm::for_space(&space) {
                let closed = closed_form_basis(kind, &cfg).unwrap();
                let (lo, hi) = basis.interval();
                let samples = linspace(lo, hi, 80);
                worst_span = worst_span.max(span_match(basis.functions(), closed.functions(), &samples).unwrap());
                spans += 1;
            }
        }
    }
    outcome(
        worst_res < 1e-6 && worst_span < 1e-6,
        format!("15 bases, worst bilaplacian residual {worst_res:.2e}; {spans} span matches, worst {worst_span:.2e}"),
    )
}

fn conformal_check() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    let mut span: f64 = 0.0;
    for (kind, sign) in [(ClosedForm::ConformalSphere(2), 1), (ClosedForm::ConformalHyperbolic(2), -1)] {
        let closed = closed_form_basis(kind, &cfg).unwrap();
        worst = worst.max(max_abs(closed.bilaplacian_residuals(60).unwrap()));
        let numeric = conformal_basis(sign, 2, &cfg).unwrap();
        let (lo, hi) = closed.interval();
        span = span.max(span_match(numeric.functions(), closed.functions(), &linspace(lo, hi, 80)).unwrap());
    }
    let op = RadialOperator::conformal(1, 3).unwrap();
    let u = Expr::parse("atan(t)").unwrap().to_radial().unwrap();
    let (lo, hi) = op.default_interval();
    let ops: Vec<(f64, f64)> = linspace(lo, hi, 50).into_iter().map(|t| op.operators(&u, t).unwrap()).collect();
    let bilap = max_abs(ops.iter().map(|o| o.1));
    let min_lap = ops.iter().map(|o| o.0.abs()).fold(f64::INFINITY, f64::min);
    outcome(
        worst < 1e-6 && span < 1e-6 && bilap < 1e-6 && min_lap > 1e-3,
        format!(
            "m=2 bases residual {worst:.2e}, numeric span {span:.2e}; atan(t) on S3: |Bilap| {bilap:.2e}, min |Lap| {min_lap:.2e} on 50 grid points"
        ),
    )
}

fn separable_check() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut mh: f64 = 0.0;
    let mut abel: f64 = 0.0;
    let mut image: f64 = 0.0;
    let mut product: f64 = 0.0;
    for space_of in [ModelSpace::euclidean, ModelSpace::spherical, ModelSpace::hyperbolic] {
        for m in [2usize, 3] {
            let space = space_of(m).unwrap();
            for k in 1..=3 {
                let pair = numeric_pair(&space, k, &cfg).unwrap();
                let (lo, hi) = pair.valid;
                let pts = linspace(lo, hi, 40);
                let sigma = space.warp().sigma();
                for u in [&pair.u1, &pair.u2] {
                    mh = mh.max(max_abs(pts.iter().map(|&r| laplacian_separable_radial_factor(&space, u, k, r).unwrap())));
                }
                let w: Vec<f64> = pts
                    .iter()
                    .map(|&r| pair.direct_wronskian(r) * sigma.value(r).powi(m as i32 - 1))
                    .collect();
                let w0 = w[0];
                abel = abel.max(max_abs(w.iter().map(|v| (v - w0) / w0)));
                let (up1, up2) = particular_solutions(&pair, &cfg).unwrap();
                for (up, u) in [(&up1, &pair.u1), (&up2, &pair.u2)] {
                    image = image.max(max_abs(
                        pts.iter().map(|&r| laplacian_separable_radial_factor(&space, up, k, r).unwrap() - u.value(r)),
                    ));
                }
                let angular = harmonic_basis(m, k).unwrap().remove(0);
                let built = separable::assemble(&space, pair, angular, [1.0, -0.5, 1.0, 0.75], &cfg).unwrap();
                let sampler = Sampler::product(m, lo, hi, 15, 4, 7);
                let subject = Subject::Separable {
                    space: space.clone(),
                    field: built.field().clone(),
                };
                let rep = classify(&subject, &sampler, 1e-6).unwrap();
                product = product.max(rep.max_bilaplacian / (1.0 + rep.scale));
            }
        }
    }
    let s2 = ModelSpace::spherical(2).unwrap();
    let h2 = ModelSpace::hyperbolic(2).unwrap();
    let sp = linspace(0.3, PI - 0.3, 60);
    let hp = linspace(0.3, 3.0, 60);
    let res = |space: &ModelSpace, u: &RadialField, k: usize, pts: &[f64]| {
        max_abs(pts.iter().map(|&r| bilaplacian_separable_radial_factor(space, u, k, r).unwrap()))
    };
    let printed = res(&s2, &examples::sphere_degree1(), 1, &sp)
        .max(res(&h2, &examples::hyperbolic_degree1(), 1, &hp))
        .max(res(&s2, &examples::sphere_degree2(), 2, &sp));
    let [c3, c4] = examples::sphere_degree2_members();
    let mut signs = Vec::new();
    for (s3, s4) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let u = RadialField::combination(&[(s3, c3.clone()), (s4, c4.clone())]);
        if res(&s2, &u, 2, &sp) < 1e-6 {
            signs.push(format!("({s3:+},{s4:+})"));
        }
    }
    outcome(
        mh < 1e-7 && abel < 1e-7 && image < 1e-5 && product < 1e-6 && printed < 1e-6 && signs.len() == 4,
        format!(
            "homogeneous {mh:.2e}, Abel {abel:.2e}, particular image {image:.2e}, products {product:.2e}, printed families {printed:.2e}; k=2 sign combinations verifying: {}",
            signs.join(" ")
        ),
    )
}

fn punctured_plane_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let space = ModelSpace::euclidean(2).unwrap();
    let v2 = harmonic_basis(2, 2).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let (c3, c4): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        for h in &v2 {
            let radial = RadialField::from_jet_fn(move |r| r.powi(4) * c4 + c3);
            let field = SeparableField::new(&space, radial, h.clone()).unwrap().to_euclidean_field();
            for &r in &log_radii(0.1, 10.0, 30) {
                let x = point_at(2, r, 0);
                let scale = 1.0 + field.eval(&x).abs();
                worst = worst.max(euclidean_bilaplacian(&field, &x).unwrap().abs() / scale);
            }
        }
    }
    let mut bounded = true;
    let mut sw: f64 = 0.0;
    for src in ["cos(2*theta)", "sin(2*theta)"] {
        let f = Expr::parse(src).unwrap().to_field(2).unwrap();
        for &r in &log_radii(1e-3, 1e3, 40) {
            for i in 0..8 {
                let x = point_at(2, r, i);
                bounded &= f.eval(&x).abs() <= 1.0;
                sw = sw.max(euclidean_bilaplacian(&f, &x).unwrap().abs() * r.powi(4));
            }
        }
    }
    outcome(
        worst < 1e-6 && sw < 1e-6 && bounded,
        format!("(c3 + c4 r^4) v2 relative Bilap {worst:.2e}; cos/sin 2theta r^4|Bilap| {sw:.2e}, bounded by 1 {bounded}"),
    )
}

fn family_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let radii = log_radii(0.1, 10.0, 50);
    let mut worst: f64 = 0.0;
    let mut positive = true;
    let mut flipped_negative = true;
    let mut valid = true;
    for m in 2..=7usize {
        for i in 0..10 {
            let c1 = rng.gen_range(-2.0..2.0);
            let c2 = rng.gen_range(-2.0..2.0);
            let a: f64 = rng.gen_range(0.1..2.0);
            let b: f64 = match m {
                2 => 0.0,
                3 | 4 => rng.gen_range(0.0..2.0),
                _ => -rng.gen_range(0.0..2.0),
            };
            let fam = PositiveLaplacianFamily::new(m, c1, c2, a, b).unwrap();
            valid &= validate(&fam).ok();
            let f = fam.to_field();
            let g = fam.sign_flipped().to_field();
            for &r in &radii {
                let x = point_at(m, r, i);
                let scale = 1.0 + f.eval(&x).abs();
                worst = worst.max(euclidean_bilaplacian(&f, &x).unwrap().abs() / scale);
                positive &= euclidean_laplacian(&f, &x).unwrap() > 0.0;
                flipped_negative &= euclidean_laplacian(&g, &x).unwrap() < 0.0;
            }
        }
    }
    let r2lnr = Expr::parse("r^2*ln(r)").unwrap().to_field(2).unwrap();
    let samples: Vec<(Vec<f64>, f64)> = radii
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let x = point_at(2, r, i);
            let v = r2lnr.eval(&x);
            (x, v)
        })
        .collect();
    let rejected = fit_family(&samples, 2).unwrap().residual;
    let lap_gap = max_abs(samples.iter().map(|(x, _)| {
        let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        euclidean_laplacian(&r2lnr, x).unwrap() - 4.0 * (1.0 + r.ln())
    }));
    outcome(
        worst < 1e-6 && positive && flipped_negative && valid && rejected > 1e-2 && lap_gap < 1e-8,
        format!(
            "60 families: relative Bilap {worst:.2e}, Lap > 0 {positive}, flipped Lap < 0 {flipped_negative}; r^2 ln r fit residual {rejected:.2e}, |Lap - 4(1+ln r)| {lap_gap:.2e}"
        ),
    )
}

fn cross_oracle_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for m in [2usize, 3, 4] {
        let pts = sphere_samples(m, 10, 400 + m as u64).unwrap();
        for i in 0..20 {
            let p = random_poly(&mut rng, m + 1, 1 + i % 4);
            let f = sphere_fn(&p);
            let pairs: Vec<(f64, f64)> = pts
                .iter()
                .map(|x| (bilaplacian_poly_restriction(&p, x).unwrap(), sphere_bilaplacian(&f, x).unwrap()))
                .collect();
            let size = max_abs(pairs.iter().map(|q| q.0)).max(f64::MIN_POSITIVE);
            worst = worst.max(max_abs(pairs.iter().map(|q| q.0 - q.1)) / size);
        }
    }
    outcome(worst < 1e-7, format!("60 polynomials, worst relative gap {worst:.2e}"))
}

fn catalog_check() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_biharm"))
        .args(["verify", "--catalog", "--format", "json"])
        .output()
        .expect("binary runs");
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let entries = report["outcomes"].as_array().map_or(0, Vec::len);
    let failed: Vec<String> = report["outcomes"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|o| o["passed"] != true)
        .map(|o| o["name"].to_string())
        .collect();
    outcome(
        out.status.code() == Some(0) && entries > 0 && failed.is_empty(),
        format!("exit {:?}, {entries} entries, failures [{}]", out.status.code(), failed.join(", ")),
    )
}

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 11] = [
        ("sphere bi-Laplacian spectra", 10.0, spectra_check),
        ("buckling spectra", 10.0, buckling_check),
        ("sphere bi-Laplacian routes agree", f64::INFINITY, routes_check),
        ("sphere fixtures", f64::INFINITY, fixtures_check),
        ("radial basis engine", 30.0, radial_engine_check),
        ("conformal models", f64::INFINITY, conformal_check),
        ("separable engine", f64::INFINITY, separable_check),
        ("punctured plane degree 2", f64::INFINITY, punctured_plane_check),
        ("positive-Laplacian families", f64::INFINITY, family_check),
        ("polynomial vs jet bi-Laplacian", f64::INFINITY, cross_oracle_check),
        ("regression catalog via CLI", 60.0, catalog_check),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = o.pass && secs < *budget;
        let limit = if budget.is_finite() { format!(" (limit {budget} s)") } else { String::new() };
        println!(
            "criterion {:>2} {}: {} | {} | {secs:.2} s{limit}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
