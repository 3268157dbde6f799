use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use biharm::expr::Expr;
use biharm::geometry::{ModelSpace, WarpFunction};
use biharm::harmonics::harmonic_basis;
use biharm::punctured::fit_family;
use biharm::radial::{ClosedForm, RadialOperator, closed_form_basis, span_match, numeric_basis};
use biharm::separable;
use biharm::sphere::{SphereFunction, spectra};
use biharm::verify::{self, Sample, Sampler, Subject, Verdict};
use clap::Args;
use serde_json::json;

use crate::Failure;
use crate::config::{Config, Format};
use crate::output::{Table, num, sci};

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(table: &Table, json: &serde_json::Value, cfg: &Config) -> Outcome {
    let mut out = io::stdout().lock();
    match cfg.format {
        Format::Table => table.write_text(&mut out)?,
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(json)?)?,
    }
    Ok(())
}

fn write_csv_file(path: &Path, table: &Table) -> Outcome {
    table.write_csv(&mut File::create(path)?)?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    m: u64,
    #[arg(long = "kmax")]
    k_max: usize,
    /// Orders j of (-Δ)^j to tabulate.
    #[arg(long = "k-laplacian", value_delimiter = ',')]
    orders: Vec<u32>,
}

pub fn spectrum(a: &SpectrumArgs, cfg: &Config) -> Outcome {
    let rows = spectra(a.m as usize, a.k_max, &a.orders);
    let mut headers = vec!["k".to_string(), "lambda".into(), "mu".into(), "nu".into()];
    headers.extend(a.orders.iter().map(|j| format!("lambda^{j}")));
    let mut table = Table {
        headers,
        rows: Vec::new(),
    };
    for e in &rows {
        let mut row = vec![e.k.to_string(), num(e.lambda), num(e.bi), num(e.buckling)];
        row.extend(e.k_laplacian.values().map(|v| num(*v)));
        table.push(row);
    }
    if let (Some(&j), Some(first)) = (a.orders.first(), rows.iter().find(|e| e.lambda > 0.0)) {
        if cfg.format == Format::Table {
            println!("first nonzero eigenvalue of the order-{j} Laplacian: {}", num(first.k_laplacian[&j]));
        }
    }
    emit(&table, &json!({ "m": a.m, "entries": rows }), cfg)
}

/// `r`, `sin`, `sinh` or an expression in `r` for the warp function.
fn model_space(sigma: &str, m: usize, lo: Option<f64>, hi: Option<f64>) -> Result<ModelSpace, Failure> {
    if m < 2 {
        return Err(usage(format!("dimension must be at least 2, got {m}")));
    }
    let space = match sigma {
        "r" => ModelSpace::euclidean(m)?,
        "sin" => ModelSpace::spherical(m)?,
        "sinh" => ModelSpace::hyperbolic(m)?,
        src => {
            let s = Expr::parse(src)?.to_radial()?.with_label(src);
            let warp = WarpFunction::custom(s, lo.unwrap_or(0.0), hi.unwrap_or(f64::INFINITY))?;
            ModelSpace::new(m, warp)?
        }
    };
    Ok(space)
}

#[derive(Args, Debug)]
pub struct RadialBasisArgs {
    /// Warp function: r, sin, sinh or an expression in r.
    #[arg(long)]
    sigma: String,
    #[arg(long)]
    m: usize,
    /// Quadrature base point.
    #[arg(long)]
    r0: Option<f64>,
    /// Number of output radii.
    #[arg(long)]
    samples: Option<usize>,
    /// Domain of a custom warp function.
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    /// CSV of basis values; metadata goes next to it with a .json extension.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Span-check against the closed-form basis when one exists.
    #[arg(long)]
    check: bool,
}

pub fn radial_basis(a: &RadialBasisArgs, cfg: &Config) -> Outcome {
    let space = model_space(&a.sigma, a.m, a.lo, a.hi)?;
    let mut qcfg = cfg.quadrature();
    qcfg.r0 = a.r0;
    let basis = numeric_basis(&space, &qcfg)?;
    let n = a.samples.unwrap_or(cfg.sample_count).max(2);
    let pts = basis.sample_points(n);

    let mut data = Table::new(&["r", "u1", "u2", "u3", "u4", "err1", "err2", "err3", "err4"]);
    for &r in &pts {
        let ve: Vec<(f64, f64)> = (0..4).map(|i| basis.value_with_error(i, r)).collect();
        let mut row = vec![num(r)];
        row.extend(ve.iter().map(|v| num(v.0)));
        row.extend(ve.iter().map(|v| num(v.1)));
        data.push(row);
    }

    let bilap = basis.bilaplacian_residuals(n)?;
    let lap = basis.laplacian_magnitudes(n)?;
    let mut summary = Table::new(&["function", "max|Lu|", "max|L^2 u|", "max error bound"]);
    let mut rows_json = Vec::new();
    for (i, f) in basis.functions().iter().enumerate() {
        let err = pts.iter().map(|&r| basis.value_with_error(i, r).1).fold(0.0, f64::max);
        summary.push(vec![f.label().to_string(), sci(lap[i]), sci(bilap[i]), sci(err)]);
        rows_json.push(json!({"label": f.label(), "max_laplacian": lap[i], "max_bilaplacian": bilap[i], "max_error": err}));
    }

    let mut check = serde_json::Value::Null;
    let mut failed = None;
    if a.check {
        let scale = |i: usize| pts.iter().map(|&r| basis.function(i).value(r).abs()).fold(0.0, f64::max);
        let worst = (0..4).map(|i| bilap[i] / (1.0 + scale(i))).fold(0.0, f64::max);
        let span = match ClosedForm::for_space(&space) {
            Some(kind) => {
                let closed = closed_form_basis(kind, &qcfg)?;
                let (lo, hi) = basis.interval();
                let (clo, chi) = closed.interval();
                let samples = biharm::radial::linspace(lo.max(clo), hi.min(chi), 4 * n.max(8));
                Some((closed.label().to_string(), span_match(basis.functions(), closed.functions(), &samples)?))
            }
            None => None,
        };
        let pass = worst < cfg.tau && span.as_ref().is_none_or(|s| s.1 < cfg.tau);
        if !pass {
            failed = Some(format!(
                "radial basis check: bilaplacian {worst:.3e}, span {:?}",
                span.as_ref().map(|s| s.1)
            ));
        }
        check = json!({
            "pass": pass,
            "relative_bilaplacian": worst,
            "closed_form": span.as_ref().map(|s| &s.0),
            "span_residual": span.as_ref().map(|s| s.1),
        });
        if cfg.format == Format::Table {
            match &span {
                Some((label, res)) => println!("span vs {label}: residual {}", sci(*res)),
                None => println!("no closed form for this space; residual checks only"),
            }
            println!("check: {}", if pass { "PASS" } else { "FAIL" });
        }
    }

    let meta = json!({ "basis": basis.metadata(), "summary": rows_json, "check": check });
    if let Some(path) = &a.out {
        write_csv_file(path, &data)?;
        std::fs::write(path.with_extension("json"), serde_json::to_string_pretty(&meta)?)?;
        emit(&summary, &meta, cfg)?;
    } else if cfg.format == Format::Csv {
        data.write_csv(&mut io::stdout().lock())?;
    } else {
        emit(&summary, &meta, cfg)?;
    }
    failed.map_or(Ok(()), |m| Err(Failure::Verification(m)))
}

fn parse_coeffs(s: &str) -> Result<[f64; 4], Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("--coeffs {s}: {e}")))?;
    v.try_into().map_err(|_| usage(format!("--coeffs needs four values, got '{s}'")))
}

#[derive(Args, Debug)]
pub struct SeparableArgs {
    /// Warp function: r, sin, sinh or an expression in r.
    #[arg(long)]
    sigma: String,
    #[arg(long)]
    m: usize,
    /// Angular degree, at least 1.
    #[arg(long)]
    k: usize,
    /// c1,c2,c3,c4 multiplying u1, u2, up1, up2.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    /// Index into the generated harmonic basis of degree k.
    #[arg(long, default_value_t = 0)]
    harmonic: usize,
    #[arg(long, default_value_t = 20)]
    radii: usize,
    #[arg(long, default_value_t = 6)]
    directions: usize,
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
    /// CSV grid of values, Laplacian and bi-Laplacian; metadata goes next to it with a .json extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn separable(a: &SeparableArgs, cfg: &Config) -> Outcome {
    if a.k < 1 {
        return Err(usage("--k must be at least 1"));
    }
    let coeffs = parse_coeffs(&a.coeffs)?;
    let space = model_space(&a.sigma, a.m, a.lo, a.hi)?;
    let basis = harmonic_basis(a.m, a.k)?;
    let angular = basis
        .get(a.harmonic)
        .cloned()
        .ok_or_else(|| usage(format!("--harmonic {} out of range (dimension {})", a.harmonic, basis.len())))?;
    let qcfg = cfg.quadrature();
    let built = separable::build(&space, a.k, angular, coeffs, &qcfg)?;
    let (dlo, dhi) = space.default_interval();
    let (vlo, vhi) = built.valid_interval();
    let sampler = Sampler::product(a.m, dlo.max(vlo), dhi.min(vhi), a.radii.max(2), a.directions.max(1), cfg.seed);
    let subject = Subject::Separable {
        space: space.clone(),
        field: built.field().clone(),
    };
    let report = verify::classify(&subject, &sampler, cfg.tau)?;
    let pass = report.verdict != Verdict::NotBiharmonic;

    let mut headers: Vec<String> = vec!["r".into(), "theta-index".into()];
    headers.extend((1..=a.m).map(|i| format!("dir{i}")));
    headers.extend(["value", "laplacian", "bilaplacian"].map(String::from));
    let mut grid = Table {
        headers,
        rows: Vec::new(),
    };
    let per_radius = a.directions.max(1);
    for (i, s) in sampler.samples().into_iter().enumerate() {
        let Sample::Polar(r, th) = &s else { continue };
        let Ok((v, l, b)) = subject.evaluate(&s) else { continue };
        let mut row = vec![num(*r), (i % per_radius).to_string()];
        row.extend(th.iter().map(|t| num(*t)));
        row.extend([num(v), num(l), num(b)]);
        grid.push(row);
    }

    let mut summary = Table::new(&["verdict", "max|Lap|", "max|Bilap|", "scale", "samples", "check"]);
    summary.push(vec![
        report.verdict.to_string(),
        sci(report.max_laplacian),
        sci(report.max_bilaplacian),
        sci(report.scale),
        report.samples.to_string(),
        if pass { "PASS" } else { "FAIL" }.into(),
    ]);
    let meta = json!({
        "sigma": a.sigma,
        "space": space.warp().label(),
        "m": a.m,
        "k": a.k,
        "c1": coeffs[0],
        "c2": coeffs[1],
        "c3": coeffs[2],
        "c4": coeffs[3],
        "pair_source": built.pair.source,
        "valid_interval": built.valid_interval(),
        "report": report,
        "pass": pass,
    });
    if let Some(path) = &a.out {
        write_csv_file(path, &grid)?;
        std::fs::write(path.with_extension("json"), serde_json::to_string_pretty(&meta)?)?;
        emit(&summary, &meta, cfg)?;
    } else if cfg.format == Format::Csv {
        grid.write_csv(&mut io::stdout().lock())?;
    } else {
        emit(&summary, &meta, cfg)?;
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "separable field is not biharmonic: max |bilaplacian| {:.3e}",
            report.max_bilaplacian
        )))
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run every catalog entry.
    #[arg(long, conflicts_with = "field")]
    catalog: bool,
    /// Field expression over x1..xn, r, theta (t in conformal charts).
    #[arg(long, requires = "space")]
    field: Option<String>,
    /// sphereM, RM, SM-radial, HM-radial, RM-radial, SM-conformal or HM-conformal.
    #[arg(long)]
    space: Option<String>,
    /// Also report max |Δ²f - μf|.
    #[arg(long)]
    mu: Option<f64>,
    /// Also report max |Δ²f + νΔf|.
    #[arg(long)]
    nu: Option<f64>,
    /// Exit 1 unless the verdict matches.
    #[arg(long)]
    expect: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    lo: Option<f64>,
    #[arg(long)]
    hi: Option<f64>,
}

fn parse_verdict(s: &str) -> Result<Verdict, Failure> {
    [
        Verdict::Harmonic,
        Verdict::QuasiHarmonic,
        Verdict::ProperBiharmonic,
        Verdict::NotBiharmonic,
    ]
    .into_iter()
    .find(|v| v.as_str() == s)
    .ok_or_else(|| usage(format!("unknown verdict '{s}'")))
}

fn split_dim<'a>(s: &'a str, prefixes: &[&str]) -> Option<(&'a str, usize)> {
    prefixes.iter().find_map(|p| {
        let rest = s.strip_prefix(p)?;
        rest.parse().ok().map(|m| (&s[..p.len()], m))
    })
}

fn field_subject(src: &str, space: &str, a: &VerifyArgs, cfg: &Config) -> Result<(Subject, Sampler), Failure> {
    let expr = Expr::parse(src)?;
    let n = a.samples.unwrap_or(cfg.sample_count).max(4);
    let (head, chart) = match space.split_once('-') {
        Some((h, c)) => (h, Some(c)),
        None => (space, None),
    };
    let bad = || usage(format!("unknown space '{space}'"));
    let (kind, m) = split_dim(head, &["sphere", "euclidean", "S", "H", "R"]).ok_or_else(bad)?;
    if m < 1 {
        return Err(bad());
    }
    let grid = |lo: f64, hi: f64| Sampler::radial(a.lo.unwrap_or(lo), a.hi.unwrap_or(hi), n);
    Ok(match (kind, chart) {
        ("sphere" | "S", None) => {
            let f = expr.to_field(m + 1)?.with_label(src);
            (Subject::Sphere(SphereFunction::from_ambient(m, f)?), Sampler::sphere(m, n, cfg.seed))
        }
        ("euclidean" | "R", None) => {
            let f = expr.to_field(m)?.with_label(src);
            let radii = (n / 5).max(4);
            (
                Subject::Euclidean(f),
                Sampler::product(m, a.lo.unwrap_or(0.3), a.hi.unwrap_or(3.0), radii, 5, cfg.seed),
            )
        }
        (k, Some("radial")) => {
            let space = match k {
                "S" | "sphere" => ModelSpace::spherical(m)?,
                "H" => ModelSpace::hyperbolic(m)?,
                _ => ModelSpace::euclidean(m)?,
            };
            let (lo, hi) = space.default_interval();
            (Subject::radial(&space, expr.to_radial()?.with_label(src)), grid(lo, hi))
        }
        (k @ ("S" | "H" | "sphere"), Some("conformal")) => {
            let op = RadialOperator::conformal(if k == "H" { -1 } else { 1 }, m)?;
            let (lo, hi) = op.default_interval();
            let field = expr.to_radial()?.with_label(src);
            (Subject::Radial { operator: op, field }, grid(lo, hi))
        }
        _ => return Err(bad()),
    })
}

pub fn verify(a: &VerifyArgs, cfg: &Config) -> Outcome {
    if a.catalog {
        return run_catalog(cfg);
    }
    let (Some(src), Some(space)) = (&a.field, &a.space) else {
        return Err(usage("pass --catalog or --field with --space"));
    };
    let (subject, sampler) = field_subject(src, space, a, cfg)?;
    let report = verify::classify(&subject, &sampler, cfg.tau)?;
    let eigen = a.mu.map(|mu| verify::eigen_residual(&subject, mu, &sampler)).transpose()?;
    let buckling = a.nu.map(|nu| verify::buckling_residual(&subject, nu, &sampler)).transpose()?;

    let mut table = Table::new(&["quantity", "value"]);
    table.push(vec!["verdict".into(), report.verdict.to_string()]);
    table.push(vec!["mean Laplacian".into(), num(report.mean_laplacian)]);
    table.push(vec!["stddev Laplacian".into(), sci(report.stddev_laplacian)]);
    table.push(vec!["max |Laplacian|".into(), sci(report.max_laplacian)]);
    table.push(vec!["max |bi-Laplacian|".into(), sci(report.max_bilaplacian)]);
    table.push(vec!["scale".into(), sci(report.scale)]);
    table.push(vec!["samples".into(), format!("{} ({} excluded)", report.samples, report.excluded)]);
    if let Some(e) = eigen {
        table.push(vec!["bi-eigen residual".into(), sci(e)]);
    }
    if let Some(b) = buckling {
        table.push(vec!["buckling residual".into(), sci(b)]);
    }
    let value = json!({
        "field": src,
        "space": space,
        "report": report,
        "eigen_residual": eigen,
        "buckling_residual": buckling,
    });
    emit(&table, &value, cfg)?;
    if let Some(expected) = &a.expect {
        let v = parse_verdict(expected)?;
        if v != report.verdict {
            return Err(Failure::Verification(format!("expected {v}, observed {}", report.verdict)));
        }
    }
    Ok(())
}

fn run_catalog(cfg: &Config) -> Outcome {
    let report = verify::run_catalog(cfg.tau);
    let mut table = Table::new(&["entry", "space", "expected", "observed", "result"]);
    for o in &report.outcomes {
        table.push(vec![
            o.name.clone(),
            o.space.clone(),
            o.expected.clone(),
            o.observed.clone(),
            if o.passed { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    emit(&table, &serde_json::to_value(&report)?, cfg)?;
    let failed: Vec<String> = report.failures().map(|o| o.name.clone()).collect();
    for o in report.failures() {
        eprintln!("FAIL {}: expected {}, observed {}", o.name, o.expected, o.observed);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} catalog entries failed: {}", failed.len(), failed.join(", "))))
    }
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    m: usize,
    /// CSV with columns x1..xm,value; a header row is optional.
    #[arg(long)]
    samples: PathBuf,
}

fn read_samples(path: &Path, m: usize) -> Result<Vec<(Vec<f64>, f64)>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let Ok(v) = parsed else {
            if i == 0 {
                continue;
            }
            return Err(usage(format!("line {}: non-numeric value", i + 1)));
        };
        if v.len() != m + 1 {
            return Err(usage(format!("line {}: expected {} columns, got {}", i + 1, m + 1, v.len())));
        }
        out.push((v[..m].to_vec(), v[m]));
    }
    if out.is_empty() {
        return Err(usage(format!("{}: no samples", path.display())));
    }
    Ok(out)
}

pub fn classify(a: &ClassifyArgs, cfg: &Config) -> Outcome {
    if a.m < 2 {
        return Err(usage("--m must be at least 2"));
    }
    let samples = read_samples(&a.samples, a.m)?;
    let fit = fit_family(&samples, a.m)?;
    let f = fit.family;
    let in_family = fit.residual < cfg.tau;
    let value = json!({
        "m": f.m,
        "c1": f.c1,
        "c2": f.c2,
        "a": f.a,
        "b": f.b,
        "residual": fit.residual,
        "constraints_ok": fit.constraints_ok,
        "in_family": in_family,
    });
    let mut table = Table::new(&["m", "c1", "c2", "a", "b", "residual", "constraints_ok", "in_family"]);
    table.push(vec![
        f.m.to_string(),
        num(f.c1),
        num(f.c2),
        num(f.a),
        num(f.b),
        sci(fit.residual),
        fit.constraints_ok.to_string(),
        in_family.to_string(),
    ]);
    let json_cfg = Config {
        format: if cfg.format == Format::Table { Format::Json } else { cfg.format },
        ..cfg.clone()
    };
    emit(&table, &value, &json_cfg)
}
