//! Homogeneous polynomials and harmonic bases.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::{euclidean_laplacian, FieldFn, Scalar, ScalarField};

type Exponent = Vec<u32>;
type Rational = Ratio<i128>;

/// Homogeneous polynomial of degree `k` in `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial {
    n: usize,
    k: usize,
    terms: BTreeMap<Exponent, f64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    k: usize,
    terms: Vec<TermJson>,
}

impl Serialize for HomogeneousPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            n: self.n,
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| TermJson {
                    exponents: e.clone(),
                    coeff: c,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let terms: Vec<(Exponent, f64)> =
            raw.terms.into_iter().map(|t| (t.exponents, t.coeff)).collect();
        HomogeneousPolynomial::from_terms(raw.n, raw.k, &terms).map_err(serde::de::Error::custom)
    }
}

impl HomogeneousPolynomial {
    pub fn zero(n: usize, k: usize) -> Self {
        HomogeneousPolynomial {
            n,
            k,
            terms: BTreeMap::new(),
        }
    }

    /// Build from `(exponents, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(n: usize, k: usize, terms: &[(Exponent, f64)]) -> Result<Self> {
        let mut p = Self::zero(n, k);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            let deg: u32 = e.iter().sum();
            if deg as usize != k {
                return Err(Error::DegreeMismatch {
                    expected: k,
                    got: deg as usize,
                });
            }
            *p.terms.entry(e.clone()).or_insert(0.0) += c;
        }
        p.terms.retain(|_, c| *c != 0.0);
        Ok(p)
    }

    /// `x_i` (0-based index) in `n` variables.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::from_terms(n, 1, &[(e, 1.0)]).unwrap()
    }

    /// `|x|^{2j}` expanded.
    pub fn norm_power(n: usize, j: usize) -> Self {
        let mut p = Self::from_terms(n, 0, &[(vec![0; n], 1.0)]).unwrap();
        let mut sq = Self::zero(n, 2);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 2;
            sq.terms.insert(e, 1.0);
        }
        for _ in 0..j {
            p = p.mul(&sq);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coefficient(&self, e: &[u32]) -> f64 {
        self.terms.get(e).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_generic(x)
    }

    pub fn eval_generic<S: Scalar>(&self, x: &[S]) -> S {
        // powers 0..=k of every constant argument, row by row
        let width = self.k + 1;
        let mut powers = vec![1.0; x.len() * width];
        let mut constant = vec![false; x.len()];
        for (i, v) in x.iter().enumerate() {
            if let Some(c) = v.as_constant() {
                constant[i] = true;
                let row = &mut powers[i * width..(i + 1) * width];
                for p in 1..width {
                    row[p] = row[p - 1] * c;
                }
            }
        }
        let mut acc = S::constant(0.0);
        for (e, &c) in &self.terms {
            let mut coef = c;
            let mut t: Option<S> = None;
            for (i, (xi, &p)) in x.iter().zip(e).enumerate() {
                if p == 0 {
                    continue;
                }
                if constant[i] {
                    coef *= powers[i * width + p as usize];
                    continue;
                }
                let f = match p {
                    1 => *xi,
                    2 => *xi * *xi,
                    _ => xi.powi(p as i32),
                };
                t = Some(t.map_or(f, |t| t * f));
            }
            acc = match t {
                Some(t) => acc + t * coef,
                None => acc + coef,
            };
        }
        acc
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v *= c;
        }
        p.terms.retain(|_, v| *v != 0.0);
        p
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.k != other.k && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: self.k,
                got: other.k,
            });
        }
        let k = if self.is_zero() { other.k } else { self.k };
        let mut p = Self::zero(self.n, k);
        for (e, &c) in self.terms.iter().chain(other.terms.iter()) {
            *p.terms.entry(e.clone()).or_insert(0.0) += c;
        }
        p.terms.retain(|_, c| *c != 0.0);
        Ok(p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.n, self.k + other.k);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e: Exponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *p.terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        p.terms.retain(|_, c| *c != 0.0);
        p
    }

    /// `∂p/∂x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self::zero(self.n, self.k.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                *p.terms.entry(f).or_insert(0.0) += c * e[i] as f64;
            }
        }
        p.terms.retain(|_, c| *c != 0.0);
        p
    }

    /// The polynomial as a field on `R^n`.
    pub fn to_field(&self) -> ScalarField {
        ScalarField::new(self.n, PolyField(self.compile())).with_label(self.to_string())
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: f64) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if other.is_zero() || c == 0.0 {
            return Ok(());
        }
        if self.is_zero() {
            self.k = other.k;
        } else if self.k != other.k {
            return Err(Error::DegreeMismatch {
                expected: self.k,
                got: other.k,
            });
        }
        for (e, &v) in &other.terms {
            match self.terms.get_mut(e) {
                Some(slot) => *slot += c * v,
                None => {
                    self.terms.insert(e.clone(), c * v);
                }
            }
        }
        self.terms.retain(|_, v| *v != 0.0);
        Ok(())
    }

    pub(crate) fn compile(&self) -> CompiledPolynomial {
        let mut out = CompiledPolynomial {
            n: self.n,
            k: self.k,
            coefs: Vec::with_capacity(self.terms.len()),
            factors: Vec::new(),
            ends: Vec::with_capacity(self.terms.len()),
        };
        for (e, &c) in &self.terms {
            out.coefs.push(c);
            out.factors
                .extend(e.iter().enumerate().filter(|(_, &p)| p > 0).map(|(i, &p)| (i, p)));
            out.ends.push(out.factors.len());
        }
        out
    }
}

/// Flat term list with only the nonzero powers of each monomial.
#[derive(Clone, Debug)]
pub(crate) struct CompiledPolynomial {
    n: usize,
    k: usize,
    coefs: Vec<f64>,
    factors: Vec<(usize, u32)>,
    ends: Vec<usize>,
}

impl CompiledPolynomial {
    pub(crate) fn degree(&self) -> usize {
        self.k
    }

    pub(crate) fn eval<S: Scalar>(&self, x: &[S]) -> S {
        debug_assert_eq!(x.len(), self.n);
        let width = self.k + 1;
        let mut powers = vec![1.0; x.len() * width];
        let mut constant = vec![false; x.len()];
        for (i, v) in x.iter().enumerate() {
            if let Some(c) = v.as_constant() {
                constant[i] = true;
                let row = &mut powers[i * width..(i + 1) * width];
                for p in 1..width {
                    row[p] = row[p - 1] * c;
                }
            }
        }
        let mut acc = S::constant(0.0);
        let mut start = 0;
        for (&c, &end) in self.coefs.iter().zip(&self.ends) {
            let mut coef = c;
            let mut t: Option<S> = None;
            for &(i, p) in &self.factors[start..end] {
                if constant[i] {
                    coef *= powers[i * width + p as usize];
                    continue;
                }
                let xi = x[i];
                let f = match p {
                    1 => xi,
                    2 => xi * xi,
                    _ => xi.powi(p as i32),
                };
                t = Some(t.map_or(f, |t| t * f));
            }
            start = end;
            acc = match t {
                Some(t) => acc + t * coef,
                None => acc + coef,
            };
        }
        acc
    }
}

struct PolyField(CompiledPolynomial);

impl FieldFn for PolyField {
    fn eval<S: Scalar>(&self, x: &[S]) -> S {
        self.0.eval(x)
    }
}

impl std::fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{p}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Exact coefficient-level Laplacian; degree `k-2`, zero when `k < 2`.
pub fn poly_laplacian(p: &HomogeneousPolynomial) -> HomogeneousPolynomial {
    let mut out = HomogeneousPolynomial::zero(p.n, p.k.saturating_sub(2));
    if p.k < 2 {
        return out;
    }
    for (e, &c) in &p.terms {
        for i in 0..p.n {
            if e[i] >= 2 {
                let mut f = e.clone();
                f[i] -= 2;
                *out.terms.entry(f).or_insert(0.0) += c * (e[i] * (e[i] - 1)) as f64;
            }
        }
    }
    out.terms.retain(|_, c| *c != 0.0);
    out
}

/// A homogeneous polynomial with identically zero Laplacian.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphericalHarmonic {
    poly: HomogeneousPolynomial,
    eigenvalue: f64,
}

impl SphericalHarmonic {
    /// Fails unless the polynomial Laplacian is exactly zero.
    pub fn new(poly: HomogeneousPolynomial) -> Result<Self> {
        let lap = poly_laplacian(&poly);
        if !lap.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "polynomial is not harmonic: Laplacian = {lap}"
            )));
        }
        let (n, k) = (poly.n, poly.k);
        Ok(SphericalHarmonic {
            eigenvalue: (k * (n + k - 2)) as f64,
            poly,
        })
    }

    pub fn poly(&self) -> &HomogeneousPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.k
    }

    /// `k(n+k-2)`: eigenvalue of `-Δ` on `S^{n-1}` for the restriction, `n`
    /// being the number of variables. With `n = m+1` this is `k(m+k-1)`.
    pub fn eigenvalue(&self) -> f64 {
        self.eigenvalue
    }
}

/// All exponent vectors of total degree `k` in `n` variables, lexicographic.
pub fn monomials(n: usize, k: usize) -> Vec<Exponent> {
    fn rec(n: usize, k: usize, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if prefix.len() == n - 1 {
            prefix.push(k as u32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=k).rev() {
            prefix.push(a as u32);
            rec(n, k - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, k, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `dim 𝓗^k(R^n) = C(n+k-1, k) - C(n+k-3, k-2)`.
pub fn harmonic_dimension(n: usize, k: usize) -> usize {
    let all = binomial(n + k - 1, k);
    if k < 2 {
        all
    } else {
        all - binomial(n + k - 3, k - 2)
    }
}

/// Basis of the kernel of the Laplacian on degree-`k` polynomials in `n`
/// variables.
///
/// The monomial Laplacian matrix is integral. Its columns for monomials
/// containing `x1²` form a triangular block (ordered by the power of `x1`),
/// so exact rational elimination pivots there and each remaining column,
/// a monomial with `x1`-degree 0 or 1, contributes one kernel vector by
/// back substitution. Each vector is rescaled to coprime integer
/// coefficients so its `f64` Laplacian is exactly zero.
pub fn harmonic_basis(n: usize, k: usize) -> Result<Vec<SphericalHarmonic>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2 variables, got {n}")));
    }
    let mut out = Vec::new();
    for free in monomials(n, k).into_iter().filter(|e| e[0] <= 1) {
        let kernel = back_substitute(n, &free);
        let poly = integerize(n, k, &kernel)?;
        out.push(SphericalHarmonic::new(poly)?);
    }
    debug_assert_eq!(out.len(), harmonic_dimension(n, k));
    Ok(out)
}

/// Solves `Δh = 0` with `h = Σ_j x1^{a+2j} p_j`, `p_0` the free monomial.
fn back_substitute(n: usize, free: &[u32]) -> BTreeMap<Exponent, Rational> {
    let a = free[0];
    let mut result = BTreeMap::new();
    let mut p: BTreeMap<Exponent, Rational> = BTreeMap::new();
    let mut base = free.to_vec();
    base[0] = 0;
    p.insert(base, Rational::from_integer(1));
    let mut j = 0u32;
    while !p.is_empty() {
        for (e, c) in &p {
            let mut full = e.clone();
            full[0] = a + 2 * j;
            *result.entry(full).or_insert_with(Rational::zero) += *c;
        }
        // p_{j+1} = -Δ' p_j / ((a+2j+1)(a+2j+2)), Δ' acting on x2..xn
        let denom = Rational::from_integer(((a + 2 * j + 1) * (a + 2 * j + 2)) as i128);
        let mut next: BTreeMap<Exponent, Rational> = BTreeMap::new();
        for (e, c) in &p {
            for i in 1..n {
                if e[i] >= 2 {
                    let mut f = e.clone();
                    f[i] -= 2;
                    let w = Rational::from_integer((e[i] * (e[i] - 1)) as i128);
                    *next.entry(f).or_insert_with(Rational::zero) -= *c * w / denom;
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        p = next;
        j += 1;
    }
    result.retain(|_, c| !c.is_zero());
    result
}

fn integerize(n: usize, k: usize, coeffs: &BTreeMap<Exponent, Rational>) -> Result<HomogeneousPolynomial> {
    let lcm = coeffs
        .values()
        .fold(1i128, |acc, c| acc.lcm(c.denom()));
    let ints: Vec<(Exponent, i128)> = coeffs
        .iter()
        .map(|(e, c)| (e.clone(), (c * Rational::from_integer(lcm)).to_integer()))
        .collect();
    let g = ints.iter().fold(0i128, |acc, (_, v)| acc.gcd(v)).max(1);
    let terms: Vec<(Exponent, f64)> = ints
        .into_iter()
        .map(|(e, v)| {
            let q = v / g;
            debug_assert!(q.abs() < (1i128 << 53));
            (e, q as f64)
        })
        .collect();
    if terms.iter().any(|(_, v)| v.abs() >= 2f64.powi(53)) {
        return Err(Error::InvalidArgument(
            "harmonic basis coefficients exceed exact f64 range".into(),
        ));
    }
    HomogeneousPolynomial::from_terms(n, k, &terms)
}

/// Split a quadratic `p = h₂ + c|x|²` with `h₂` harmonic.
pub fn decompose_degree2(p: &HomogeneousPolynomial) -> Result<(SphericalHarmonic, f64)> {
    if p.k != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            got: p.k,
        });
    }
    let n = p.n;
    let trace: f64 = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            p.coefficient(&e)
        })
        .sum();
    let c = trace / n as f64;
    let h = p.add(&HomogeneousPolynomial::norm_power(n, 1).scale(-c))?;
    let lap = poly_laplacian(&h);
    // trace/n may not be exact in binary; clear roundoff on the diagonal
    let h = if lap.is_zero() {
        h
    } else {
        let residue = lap.coefficient(&vec![0; n]) / (2.0 * n as f64);
        h.add(&HomogeneousPolynomial::norm_power(n, 1).scale(-residue))?
    };
    Ok((SphericalHarmonic::new(h)?, c))
}

/// Both sides of the Euler identity `⟨x, ∇F⟩ = kF` and of
/// `Δ|x|^α = α(α+n-2)|x|^{α-2}` on `R^n`.
#[derive(Clone, Debug, Serialize)]
pub struct EulerDiagnostics {
    pub euler_lhs: f64,
    pub euler_rhs: f64,
    pub power_lhs: f64,
    pub power_rhs: f64,
}

pub fn euler_radial_identities(
    p: &HomogeneousPolynomial,
    x: &[f64],
    alpha: f64,
) -> Result<EulerDiagnostics> {
    if x.len() != p.n {
        return Err(Error::DimensionMismatch {
            expected: p.n,
            got: x.len(),
        });
    }
    let euler_lhs: f64 = (0..p.n).map(|i| x[i] * p.partial(i).eval(x)).sum();
    let euler_rhs = p.k as f64 * p.eval(x);
    struct NormPow(f64);
    impl FieldFn for NormPow {
        fn eval<S: Scalar>(&self, x: &[S]) -> S {
            x.iter()
                .fold(S::constant(0.0), |a, &v| a + v * v)
                .powf(self.0 / 2.0)
        }
    }
    let field = ScalarField::new(p.n, NormPow(alpha));
    let power_lhs = euclidean_laplacian(&field, x)?;
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let power_rhs = alpha * (alpha + p.n as f64 - 2.0) * norm.powf(alpha - 2.0);
    Ok(EulerDiagnostics {
        euler_lhs,
        euler_rhs,
        power_lhs,
        power_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn poly(n: usize, k: usize, t: &[(&[u32], f64)]) -> HomogeneousPolynomial {
        let terms: Vec<(Exponent, f64)> = t.iter().map(|(e, c)| (e.to_vec(), *c)).collect();
        HomogeneousPolynomial::from_terms(n, k, &terms).unwrap()
    }

    #[test]
    fn laplacian_examples() {
        assert!(poly_laplacian(&poly(2, 2, &[(&[2, 0], 1.0), (&[0, 2], -1.0)])).is_zero());
        for n in 2..6 {
            let l = poly_laplacian(&HomogeneousPolynomial::norm_power(n, 1));
            assert_eq!(l.coefficient(&vec![0; n]), 2.0 * n as f64);
            assert_eq!(l.terms().count(), 1);
        }
        let l = poly_laplacian(&poly(3, 3, &[(&[3, 0, 0], 1.0)]));
        assert_eq!(l, poly(3, 1, &[(&[1, 0, 0], 6.0)]));
        assert!(poly_laplacian(&poly(3, 1, &[(&[1, 0, 0], 1.0)])).is_zero());
    }

    #[test]
    fn degree_checks() {
        assert!(matches!(
            HomogeneousPolynomial::from_terms(2, 2, &[(vec![1, 0], 1.0)]),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(HomogeneousPolynomial::from_terms(2, 2, &[(vec![1, 0, 1], 1.0)]).is_err());
    }

    #[test]
    fn basis_examples() {
        assert_eq!(harmonic_basis(3, 2).unwrap().len(), 5);
        let b = harmonic_basis(2, 2).unwrap();
        assert_eq!(b.len(), 2);
        // the span is {x1²-x2², x1x2}: every element has zero trace
        for h in &b {
            let p = h.poly();
            assert_eq!(p.coefficient(&[2, 0]) + p.coefficient(&[0, 2]), 0.0);
        }
        for n in 2..5 {
            let c = harmonic_basis(n, 0).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(c[0].poly().coefficient(&vec![0; n]), 1.0);
        }
    }

    #[test]
    fn dimension_formula_and_exact_harmonicity() {
        for n in 2..=5 {
            for k in 0..=6 {
                let b = harmonic_basis(n, k).unwrap();
                assert_eq!(b.len(), harmonic_dimension(n, k), "n={n} k={k}");
                for h in &b {
                    assert!(poly_laplacian(h.poly()).is_zero());
                    assert_eq!(h.eigenvalue(), (k * (n + k - 2)) as f64);
                }
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let (h, c) = decompose_degree2(&HomogeneousPolynomial::norm_power(3, 1)).unwrap();
        assert!(h.poly().is_zero());
        assert_eq!(c, 1.0);
        let (h, c) = decompose_degree2(&poly(2, 2, &[(&[2, 0], 1.0)])).unwrap();
        assert_eq!(c, 0.5);
        assert_eq!(h.poly(), &poly(2, 2, &[(&[2, 0], 0.5), (&[0, 2], -0.5)]));
        let (h, c) = decompose_degree2(&poly(3, 2, &[(&[1, 1, 0], 1.0)])).unwrap();
        assert_eq!(c, 0.0);
        assert_eq!(h.poly(), &poly(3, 2, &[(&[1, 1, 0], 1.0)]));
        assert!(decompose_degree2(&poly(2, 3, &[(&[3, 0], 1.0)])).is_err());
    }

    #[test]
    fn euler_identity_examples() {
        let f = poly(3, 3, &[(&[1, 1, 1], 1.0)]);
        let d = euler_radial_identities(&f, &[1.0, 1.0, 1.0], 2.0).unwrap();
        assert_relative_eq!(d.euler_lhs, 3.0);
        assert_relative_eq!(d.euler_rhs, 3.0);
        let g = poly(4, 1, &[(&[1, 0, 0, 0], 1.0)]);
        let d = euler_radial_identities(&g, &[0.3, 0.4, -0.2, 0.9], 2.0).unwrap();
        assert_relative_eq!(d.power_lhs, 8.0, epsilon = 1e-12);
        assert_relative_eq!(d.power_rhs, 8.0);
        for n in 3..6 {
            let z = HomogeneousPolynomial::zero(n, 0);
            let x: Vec<f64> = (0..n).map(|i| 0.3 + 0.2 * i as f64).collect();
            let d = euler_radial_identities(&z, &x, 2.0 - n as f64).unwrap();
            assert!(d.power_lhs.abs() < 1e-12 && d.power_rhs == 0.0);
        }
    }

    #[test]
    fn json_shape() {
        let p = poly(2, 2, &[(&[1, 1], 3.0)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"n":2,"k":2,"terms":[{"exponents":[1,1],"coeff":3.0}]}"#);
        let q: HomogeneousPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let bad = r#"{"n":2,"k":3,"terms":[{"exponents":[1,1],"coeff":3.0}]}"#;
        assert!(serde_json::from_str::<HomogeneousPolynomial>(bad).is_err());
    }
}
