//! Adaptive Dormand–Prince 5(4) integration of two-dimensional first-order
//! systems, in either direction.

use crate::error::{Error, Result};

pub type State = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-13,
            max_steps: 100_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const BLOW_UP: f64 = 1e150;

/// Accepted steps `(x, y)` of one integration, starting with the initial
/// point.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub points: Vec<(f64, State)>,
}

impl Trajectory {
    pub fn last(&self) -> (f64, State) {
        *self.points.last().expect("trajectory has its initial point")
    }
}

/// Integrates `y' = f(x, y)` from `(x0, y0)` to `x1`. On blow-up or step
/// collapse the error carries the last good abscissa.
pub fn integrate(
    f: &dyn Fn(f64, &State) -> State,
    x0: f64,
    y0: State,
    x1: f64,
    cfg: &OdeConfig,
) -> Result<Trajectory> {
    let mut points = vec![(x0, y0)];
    if x0 == x1 {
        return Ok(Trajectory { points });
    }
    let dir = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut h = span.min(0.01 * (1.0 + x0.abs()));
    let mut k = [[0.0; 2]; 7];
    k[0] = f(x, &y);
    let blow_up = |at: f64, lo: f64, hi: f64| Error::IntegrationBlowUp {
        at,
        valid_lo: lo.min(hi),
        valid_hi: lo.max(hi),
    };
    for _ in 0..cfg.max_steps {
        let remaining = (x1 - x).abs();
        if remaining <= 1e-15 * span {
            return Ok(Trajectory { points });
        }
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        let hs = dir * h;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += hs * A[s][j] * kj[0];
                ys[1] += hs * A[s][j] * kj[1];
            }
            k[s] = f(x + C[s] * hs, &ys);
        }
        let mut y5 = y;
        let mut err: f64 = 0.0;
        for i in 0..2 {
            let mut d5 = 0.0;
            let mut d4 = 0.0;
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] += hs * d5;
            let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y5[i].abs());
            err = err.max((hs * (d5 - d4)).abs() / sc);
        }
        if !err.is_finite() || y5.iter().any(|v| !v.is_finite() || v.abs() > BLOW_UP) {
            if h < 1e-14 * (1.0 + x.abs()) {
                return Err(blow_up(x, x0, x));
            }
            h *= 0.25;
            continue;
        }
        if err <= 1.0 {
            x = if last { x1 } else { x + hs };
            y = y5;
            k[0] = k[6];
            points.push((x, y));
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < 1e-14 * (1.0 + x.abs()) {
                return Err(blow_up(x, x0, x));
            }
        }
    }
    Err(blow_up(x, x0, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_oscillator_both_directions() {
        let f = |_: f64, y: &State| [y[1], -y[0]];
        let cfg = OdeConfig::default();
        for end in [4.0, -3.0] {
            let t = integrate(&f, 0.5, [0.5f64.sin(), 0.5f64.cos()], end, &cfg).unwrap();
            let (x, y) = t.last();
            assert_eq!(x, end);
            assert_relative_eq!(y[0], end.sin(), epsilon = 1e-10);
            assert_relative_eq!(y[1], end.cos(), epsilon = 1e-10);
        }
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y² from y(0)=1 explodes at x = 1
        let f = |_: f64, y: &State| [y[0] * y[0], 0.0];
        match integrate(&f, 0.0, [1.0, 0.0], 2.0, &OdeConfig::default()) {
            Err(Error::IntegrationBlowUp { at, .. }) => assert!((at - 1.0).abs() < 1e-3),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }
}
