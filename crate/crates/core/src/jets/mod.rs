//! Truncated-Taylor arithmetic for exact-to-roundoff derivatives up to order 4.
//!
//! Both jet types store *raw derivatives*, not Taylor coefficients:
//! `Jet1` holds `[f, f', f'', f''', f'''']` with respect to one parameter and
//! `Jet2` holds `c[i][j] = ∂^{i+j} f / ∂s^i ∂t^j` for `0 <= i, j <= 2`.
//! The only place factorials enter is the binomial weights of the Leibniz
//! product and the `1/n!` in [`Scalar::lift`]; everything else reads
//! derivatives straight off the coefficient arrays.

mod field;
pub mod finite_diff;
mod ops;

pub use field::{FieldFn, ScalarField};
pub use ops::{directional_derivatives, euclidean_bilaplacian, euclidean_laplacian};

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Values whose magnitude is below this are treated as zero divisors.
pub const DIVISION_GUARD: f64 = 1e-300;

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Number kinds a [`ScalarField`] can be evaluated in: plain reals and jets.
///
/// Every elementary function is expressed through [`Scalar::lift`], which
/// applies a univariate function given its derivative stack at the value
/// part. That keeps the chain rule in one place.
pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn constant(v: f64) -> Self;

    fn value(&self) -> f64;

    /// Compose a univariate function `g` with `self`, where `d[n]` is the
    /// n-th derivative of `g` at `self.value()`.
    fn lift(self, d: [f64; 5]) -> Self;

    fn is_finite(&self) -> bool;

    /// The value when every derivative part is zero.
    fn as_constant(&self) -> Option<f64>;

    /// Evaluate a type-erased field in this scalar kind.
    fn eval_field(field: &ScalarField, x: &[Self]) -> Self;

    fn recip(self) -> Self {
        let x = self.value();
        if x.abs() < DIVISION_GUARD {
            return self.lift([f64::NAN; 5]);
        }
        let i = 1.0 / x;
        let i2 = i * i;
        self.lift([i, -i2, 2.0 * i2 * i, -6.0 * i2 * i2, 24.0 * i2 * i2 * i])
    }

    fn sqr(self) -> Self {
        self * self
    }

    fn sin(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.lift([s, c, -s, -c, s])
    }

    fn cos(self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.lift([c, -s, -c, s, c])
    }

    fn tan(self) -> Self {
        let t = self.value().tan();
        let u = 1.0 + t * t;
        self.lift([
            t,
            u,
            2.0 * t * u,
            2.0 * u * (1.0 + 3.0 * t * t),
            8.0 * t * u * (2.0 + 3.0 * t * t),
        ])
    }

    fn sinh(self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.lift([s, c, s, c, s])
    }

    fn cosh(self) -> Self {
        let x = self.value();
        let (s, c) = (x.sinh(), x.cosh());
        self.lift([c, s, c, s, c])
    }

    fn tanh(self) -> Self {
        let t = self.value().tanh();
        let u = 1.0 - t * t;
        self.lift([
            t,
            u,
            -2.0 * t * u,
            -2.0 * u * (1.0 - 3.0 * t * t),
            8.0 * t * u * (2.0 - 3.0 * t * t),
        ])
    }

    fn exp(self) -> Self {
        let e = self.value().exp();
        self.lift([e; 5])
    }

    fn ln(self) -> Self {
        let x = self.value();
        if x <= 0.0 {
            return self.lift([f64::NAN; 5]);
        }
        let i = 1.0 / x;
        let i2 = i * i;
        self.lift([x.ln(), i, -i2, 2.0 * i2 * i, -6.0 * i2 * i2])
    }

    fn atan(self) -> Self {
        let x = self.value();
        let w = 1.0 / (1.0 + x * x);
        let w2 = w * w;
        self.lift([
            x.atan(),
            w,
            -2.0 * x * w2,
            (6.0 * x * x - 2.0) * w2 * w,
            24.0 * x * (1.0 - x * x) * w2 * w2,
        ])
    }

    /// Real power for a positive base.
    fn powf(self, a: f64) -> Self {
        let x = self.value();
        if x <= 0.0 {
            if a.fract() == 0.0 && a.abs() < i32::MAX as f64 {
                return self.powi(a as i32);
            }
            return self.lift([f64::NAN; 5]);
        }
        let mut d = [0.0; 5];
        let mut coeff = 1.0;
        let mut term = x.powf(a);
        let inv = 1.0 / x;
        for (n, slot) in d.iter_mut().enumerate() {
            *slot = coeff * term;
            coeff *= a - n as f64;
            term *= inv;
        }
        self.lift(d)
    }

    fn powi(self, n: i32) -> Self {
        let x = self.value();
        let mut d = [0.0; 5];
        let mut coeff = 1.0;
        for (j, slot) in d.iter_mut().enumerate() {
            let e = n - j as i32;
            *slot = if coeff == 0.0 { 0.0 } else { coeff * x.powi(e) };
            coeff *= e as f64;
        }
        if x.abs() < DIVISION_GUARD && n < 4 {
            // negative exponents at the origin are singular
            if d.iter().any(|v| !v.is_finite()) {
                return self.lift([f64::NAN; 5]);
            }
        }
        self.lift(d)
    }

    fn sqrt(self) -> Self {
        self.powf(0.5)
    }

    fn abs(self) -> Self {
        if self.value() < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl Scalar for f64 {
    fn constant(v: f64) -> Self {
        v
    }
    fn as_constant(&self) -> Option<f64> {
        Some(*self)
    }
    fn value(&self) -> f64 {
        *self
    }
    fn lift(self, d: [f64; 5]) -> Self {
        d[0]
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn eval_field(field: &ScalarField, x: &[Self]) -> Self {
        field.eval(x)
    }
    fn recip(self) -> Self {
        if self.abs() < DIVISION_GUARD {
            f64::NAN
        } else {
            1.0 / self
        }
    }
}

/// Derivatives `[f, f', f'', f''', f'''']` along one real parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet1(pub [f64; 5]);

impl Jet1 {
    pub fn constant(v: f64) -> Self {
        Jet1([v, 0.0, 0.0, 0.0, 0.0])
    }

    /// The independent variable `s` evaluated at `v`.
    pub fn variable(v: f64) -> Self {
        Jet1([v, 1.0, 0.0, 0.0, 0.0])
    }

    pub fn derivs(&self) -> [f64; 5] {
        self.0
    }

    pub fn d(&self, n: usize) -> f64 {
        self.0[n]
    }

    /// `f'` as a jet; the top coefficient is unknown and set to zero, so only
    /// orders `0..=3` of the result are meaningful.
    pub fn shift(&self) -> Self {
        let c = self.0;
        Jet1([c[1], c[2], c[3], c[4], 0.0])
    }

    fn is_constant(&self) -> bool {
        self.0[1..].iter().all(|&v| v == 0.0)
    }

    fn nilpotent_part(&self) -> Self {
        let mut c = self.0;
        c[0] = 0.0;
        Jet1(c)
    }
}

impl Scalar for Jet1 {
    fn constant(v: f64) -> Self {
        Jet1::constant(v)
    }
    fn as_constant(&self) -> Option<f64> {
        self.is_constant().then_some(self.0[0])
    }
    fn value(&self) -> f64 {
        self.0[0]
    }
    fn lift(self, d: [f64; 5]) -> Self {
        let delta = self.nilpotent_part();
        let mut out = Jet1::constant(d[0]);
        let mut power = Jet1::constant(1.0);
        for n in 1..5 {
            power = power * delta;
            out = out + power * (d[n] / FACT[n]);
        }
        out
    }
    fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
    fn eval_field(field: &ScalarField, x: &[Self]) -> Self {
        field.eval_jet1(x)
    }
}

impl Add for Jet1 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0) {
            *a += b;
        }
        Jet1(c)
    }
}

impl Sub for Jet1 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(o.0) {
            *a -= b;
        }
        Jet1(c)
    }
}

impl Mul for Jet1 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (f, g) = (self.0, o.0);
        Jet1([
            f[0] * g[0],
            f[1] * g[0] + f[0] * g[1],
            f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2],
            f[3] * g[0] + 3.0 * (f[2] * g[1] + f[1] * g[2]) + f[0] * g[3],
            f[4] * g[0] + 4.0 * (f[3] * g[1] + f[1] * g[3]) + 6.0 * f[2] * g[2] + f[0] * g[4],
        ])
    }
}

impl Div for Jet1 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for Jet1 {
    type Output = Self;
    fn neg(self) -> Self {
        Jet1(self.0.map(|v| -v))
    }
}

impl Add<f64> for Jet1 {
    type Output = Self;
    fn add(mut self, v: f64) -> Self {
        self.0[0] += v;
        self
    }
}

impl Sub<f64> for Jet1 {
    type Output = Self;
    fn sub(mut self, v: f64) -> Self {
        self.0[0] -= v;
        self
    }
}

impl Mul<f64> for Jet1 {
    type Output = Self;
    fn mul(self, v: f64) -> Self {
        Jet1(self.0.map(|c| c * v))
    }
}

impl Div<f64> for Jet1 {
    type Output = Self;
    fn div(self, v: f64) -> Self {
        Jet1(self.0.map(|c| c / v))
    }
}

/// Mixed partials `c[i][j] = ∂^{i+j} f / ∂s^i ∂t^j` for `i, j <= 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2(pub [[f64; 3]; 3]);

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        let mut c = [[0.0; 3]; 3];
        c[0][0] = v;
        Jet2(c)
    }

    /// `x0 + s*u + t*w` for scalar components `u`, `w` of two directions.
    pub fn linear(x0: f64, u: f64, w: f64) -> Self {
        let mut c = [[0.0; 3]; 3];
        c[0][0] = x0;
        c[1][0] = u;
        c[0][1] = w;
        Jet2(c)
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    fn is_constant(&self) -> bool {
        self.0.iter().flatten().skip(1).all(|&v| v == 0.0)
    }

    fn nilpotent_part(&self) -> Self {
        let mut c = self.0;
        c[0][0] = 0.0;
        Jet2(c)
    }

    fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Jet2(self.0.map(|row| row.map(&f)))
    }
}

impl Scalar for Jet2 {
    fn constant(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn as_constant(&self) -> Option<f64> {
        self.is_constant().then_some(self.0[0][0])
    }
    fn value(&self) -> f64 {
        self.0[0][0]
    }
    fn lift(self, d: [f64; 5]) -> Self {
        let delta = self.nilpotent_part();
        let mut out = Jet2::constant(d[0]);
        let mut power = Jet2::constant(1.0);
        for n in 1..5 {
            power = power * delta;
            out = out + power * (d[n] / FACT[n]);
        }
        out
    }
    fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
    fn eval_field(field: &ScalarField, x: &[Self]) -> Self {
        field.eval_jet2(x)
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut c = self.0;
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] += o.0[i][j];
            }
        }
        Jet2(c)
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.is_constant() {
            return o * self.0[0][0];
        }
        if o.is_constant() {
            return self * o.0[0][0];
        }
        let (f, g) = (self.0, o.0);
        Jet2([
            [
                f[0][0] * g[0][0],
                f[0][1] * g[0][0] + f[0][0] * g[0][1],
                f[0][2] * g[0][0] + 2.0 * f[0][1] * g[0][1] + f[0][0] * g[0][2],
            ],
            [
                f[1][0] * g[0][0] + f[0][0] * g[1][0],
                f[1][1] * g[0][0] + f[1][0] * g[0][1] + f[0][1] * g[1][0] + f[0][0] * g[1][1],
                f[1][2] * g[0][0]
                    + f[0][2] * g[1][0]
                    + 2.0 * (f[1][1] * g[0][1] + f[0][1] * g[1][1])
                    + f[1][0] * g[0][2]
                    + f[0][0] * g[1][2],
            ],
            [
                f[2][0] * g[0][0] + 2.0 * f[1][0] * g[1][0] + f[0][0] * g[2][0],
                f[2][1] * g[0][0]
                    + f[2][0] * g[0][1]
                    + 2.0 * (f[1][1] * g[1][0] + f[1][0] * g[1][1])
                    + f[0][1] * g[2][0]
                    + f[0][0] * g[2][1],
                f[0][0] * g[2][2]
                    + 2.0 * (f[0][1] * g[2][1] + f[1][0] * g[1][2] + f[1][2] * g[1][0] + f[2][1] * g[0][1])
                    + f[0][2] * g[2][0]
                    + 4.0 * f[1][1] * g[1][1]
                    + f[2][0] * g[0][2]
                    + f[2][2] * g[0][0],
            ],
        ])
    }
}

impl Div for Jet2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

impl Add<f64> for Jet2 {
    type Output = Self;
    fn add(mut self, v: f64) -> Self {
        self.0[0][0] += v;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Self;
    fn sub(mut self, v: f64) -> Self {
        self.0[0][0] -= v;
        self
    }
}

impl Mul<f64> for Jet2 {
    type Output = Self;
    fn mul(self, v: f64) -> Self {
        self.map(|c| c * v)
    }
}

impl Div<f64> for Jet2 {
    type Output = Self;
    fn div(self, v: f64) -> Self {
        self.map(|c| c / v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_jets_match_plain_arithmetic() {
        let a = Jet1::constant(1.7);
        let b = Jet1::constant(-0.4);
        let r = ((a * b + a) / b).sin().exp() - a.atan();
        let p = ((1.7f64 * -0.4 + 1.7) / -0.4).sin().exp() - 1.7f64.atan();
        assert_eq!(r.0[0], p);
        assert!(r.0[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ln_derivatives_at_one() {
        let j = Jet1::variable(1.0).ln();
        assert_eq!(j.0, [0.0, 1.0, -1.0, 2.0, -6.0]);
    }

    #[test]
    fn geometric_series_derivatives() {
        // 1/(1-x) at 0: n!
        let x = Jet1::variable(0.0);
        let g = Jet1::constant(1.0) / (Jet1::constant(1.0) - x);
        for n in 0..5 {
            assert_relative_eq!(g.0[n], FACT[n], epsilon = 1e-14);
        }
    }

    #[test]
    fn tan_and_tanh_stacks() {
        let x = 0.37;
        let t = Jet1::variable(x).tan();
        let alt = Jet1::variable(x).sin() / Jet1::variable(x).cos();
        for n in 0..5 {
            assert_relative_eq!(t.0[n], alt.0[n], max_relative = 1e-13);
        }
        let th = Jet1::variable(x).tanh();
        let alt = Jet1::variable(x).sinh() / Jet1::variable(x).cosh();
        for n in 0..5 {
            assert_relative_eq!(th.0[n], alt.0[n], max_relative = 1e-12, epsilon = 1e-15);
        }
    }

    #[test]
    fn atan_matches_integral_identity() {
        // d/dx atan(x) = 1/(1+x^2)
        let x = Jet1::variable(0.8);
        let a = x.atan().shift();
        let w = (x * x + 1.0).recip();
        for n in 0..4 {
            assert_relative_eq!(a.0[n], w.0[n], max_relative = 1e-13);
        }
    }

    #[test]
    fn division_by_tiny_value_is_non_finite() {
        let z = Jet1::variable(0.0);
        assert!(!(Jet1::constant(1.0) / z).is_finite());
        assert!(Scalar::recip(1e-301f64).is_nan());
    }

    #[test]
    fn jet2_mixed_partial_of_product() {
        // f = x^2 y^2 along s -> x, t -> y at (1.5, -0.5)
        let x = Jet2::linear(1.5, 1.0, 0.0);
        let y = Jet2::linear(-0.5, 0.0, 1.0);
        let f = x * x * y * y;
        assert_relative_eq!(f.d(2, 2), 4.0, epsilon = 1e-14);
        assert_relative_eq!(f.d(1, 1), 4.0 * 1.5 * -0.5, epsilon = 1e-14);
        assert_relative_eq!(f.d(2, 0), 2.0 * 0.25, epsilon = 1e-14);
    }

    #[test]
    fn jet2_degrades_to_jet1_when_one_direction_is_zero() {
        let x0 = 0.9;
        let j2 = Jet2::linear(x0, 1.0, 0.0);
        let j1 = Jet1::variable(x0);
        let f2 = (j2.sin() * j2.exp()).ln() + j2.sqrt();
        let f1 = (j1.sin() * j1.exp()).ln() + j1.sqrt();
        for i in 0..3 {
            assert_relative_eq!(f2.d(i, 0), f1.0[i], max_relative = 1e-13);
        }
        for i in 0..3 {
            for j in 1..3 {
                assert_eq!(f2.d(i, j), 0.0);
            }
        }
    }

    #[test]
    fn powi_handles_negative_base() {
        let j = Jet1::variable(-2.0).powi(3);
        assert_eq!(j.0, [-8.0, 12.0, -12.0, 6.0, 0.0]);
        let k = Jet1::variable(-2.0).powf(2.0);
        assert_eq!(k.0, [4.0, -4.0, 2.0, 0.0, 0.0]);
    }
}
