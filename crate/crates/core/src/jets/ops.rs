use super::{Jet1, Jet2, Scalar, ScalarField};
use crate::error::{Error, Result};

fn check_dim(field: &ScalarField, x: &[f64]) -> Result<()> {
    if field.dim() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: field.dim(),
            got: x.len(),
        });
    }
    Ok(())
}

fn non_finite(context: &str, x: &[f64]) -> Error {
    Error::NumericEvaluation {
        context: context.to_string(),
        at: x.to_vec(),
    }
}

/// `[f(x), D_v f, ..., D_v^order f]` along direction `v`.
pub fn directional_derivatives(
    field: &ScalarField,
    x: &[f64],
    v: &[f64],
    order: usize,
) -> Result<Vec<f64>> {
    check_dim(field, x)?;
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: v.len(),
        });
    }
    if !(1..=4).contains(&order) {
        return Err(Error::InvalidArgument(format!(
            "derivative order {order} not in 1..=4"
        )));
    }
    let args: Vec<Jet1> = x
        .iter()
        .zip(v)
        .map(|(&xi, &vi)| Jet1([xi, vi, 0.0, 0.0, 0.0]))
        .collect();
    let out = field.eval_jet1(&args);
    if !out.is_finite() {
        return Err(non_finite("directional derivatives", x));
    }
    Ok(out.0[..=order].to_vec())
}

fn axis_jet1(field: &ScalarField, x: &[f64], axis: usize) -> Jet1 {
    let args: Vec<Jet1> = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            if i == axis {
                Jet1::variable(xi)
            } else {
                Jet1::constant(xi)
            }
        })
        .collect();
    field.eval_jet1(&args)
}

/// Sum of pure second partials, one `Jet1` sweep per axis.
pub fn euclidean_laplacian(field: &ScalarField, x: &[f64]) -> Result<f64> {
    check_dim(field, x)?;
    let mut acc = 0.0;
    for axis in 0..x.len() {
        let j = axis_jet1(field, x, axis);
        if !j.is_finite() {
            return Err(non_finite("euclidean laplacian", x));
        }
        acc += j.0[2];
    }
    Ok(acc)
}

/// `Σ_{i,j} ∂⁴f/∂x_i²∂x_j²`: diagonal terms from fourth-order `Jet1`
/// sweeps, off-diagonal terms from one `Jet2` per unordered axis pair.
pub fn euclidean_bilaplacian(field: &ScalarField, x: &[f64]) -> Result<f64> {
    check_dim(field, x)?;
    let n = x.len();
    let mut acc = 0.0;
    for axis in 0..n {
        let j = axis_jet1(field, x, axis);
        if !j.is_finite() {
            return Err(non_finite("euclidean bilaplacian", x));
        }
        acc += j.0[4];
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let c = mixed_partials(field, x, a, b);
            if !c.is_finite() {
                return Err(non_finite("euclidean bilaplacian", x));
            }
            acc += 2.0 * c.0[2][2];
        }
    }
    Ok(acc)
}

/// Mixed partials of `field` at `x` with `s` along axis `a` and `t` along axis `b`.
pub(crate) fn mixed_partials(field: &ScalarField, x: &[f64], a: usize, b: usize) -> Jet2 {
    let args: Vec<Jet2> = x
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let u = if i == a { 1.0 } else { 0.0 };
            let w = if i == b { 1.0 } else { 0.0 };
            Jet2::linear(xi, u, w)
        })
        .collect();
    field.eval_jet2(&args)
}
