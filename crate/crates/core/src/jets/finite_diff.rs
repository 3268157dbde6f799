//! Richardson-extrapolated central differences.
//!
//! Independent of the jet engine; used as an oracle for derivatives and for
//! checking numerically integrated solutions.

const CON: f64 = 1.4;
const CON2: f64 = CON * CON;
const TABLE: usize = 10;

fn central(f: &dyn Fn(f64) -> f64, x: f64, n: usize, h: f64) -> f64 {
    match n {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h.powi(3)),
        4 => {
            (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2.0 * h))
                / h.powi(4)
        }
        _ => panic!("finite difference order {n} unsupported"),
    }
}

/// n-th derivative (1..=4) of `f` at `x` by Ridders' extrapolation starting
/// from step `h`. Returns `(estimate, error_estimate)`.
pub fn derivative(f: impl Fn(f64) -> f64, x: f64, n: usize, h: f64) -> (f64, f64) {
    let f: &dyn Fn(f64) -> f64 = &f;
    let mut a = [[0.0f64; TABLE]; TABLE];
    let mut hh = h;
    a[0][0] = central(f, x, n, hh);
    let mut best = a[0][0];
    let mut err = f64::INFINITY;
    for i in 1..TABLE {
        hh /= CON;
        a[0][i] = central(f, x, n, hh);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let e = (a[j][i] - a[j - 1][i])
                .abs()
                .max((a[j][i] - a[j - 1][i - 1]).abs());
            if e <= err {
                err = e;
                best = a[j][i];
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= 2.0 * err {
            break;
        }
    }
    (best, err)
}

/// Laplacian on `R^n` by Richardson differences along each axis.
pub fn laplacian(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    (0..x.len())
        .map(|axis| {
            derivative(
                |t| {
                    let mut y = x.to_vec();
                    y[axis] = t;
                    f(&y)
                },
                x[axis],
                2,
                h,
            )
            .0
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sin_derivatives() {
        let x = 0.7f64;
        let expect = [x.cos(), -x.sin(), -x.cos(), x.sin()];
        for n in 1..=4 {
            let (d, _) = derivative(f64::sin, x, n, 0.2);
            assert!((d - expect[n - 1]).abs() < 1e-8, "n={n}: {d}");
        }
    }
}
