//! Dormand–Prince 5(4) for a complex two-component first-order system.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type State = [Complex64; 2];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-10,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy(y: &State, h: f64, ks: &[State], coeffs: &[f64]) -> State {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coeffs) {
        if c != 0.0 {
            out[0] += k[0] * (h * c);
            out[1] += k[1] * (h * c);
        }
    }
    out
}

/// Integrate y' = f(x, y) from (x0, y0) and return the state at each target.
///
/// Targets must be nondecreasing and not below `x0`.
pub fn integrate<F>(f: F, x0: f64, y0: State, targets: &[f64], tol: Tolerance) -> Result<Vec<State>>
where
    F: Fn(f64, &State) -> State,
{
    let mut x = x0;
    let mut y = y0;
    let mut h = (x0.abs() * 0.1).max(1e-6);
    let mut out = Vec::with_capacity(targets.len());
    for &target in targets {
        if target < x {
            return Err(Error::Integration {
                x: target,
                reason: format!("target lies before current position {x}"),
            });
        }
        while x < target {
            let last = x + h >= target;
            let step = if last { target - x } else { h };
            let mut ks: [State; 7] = [[Complex64::default(); 2]; 7];
            ks[0] = f(x, &y);
            for s in 1..7 {
                let ys = axpy(&y, step, &ks[..s], &A[s][..s]);
                ks[s] = f(x + C[s] * step, &ys);
            }
            let y5 = axpy(&y, step, &ks, &B5);
            let y4 = axpy(&y, step, &ks, &B4);
            let err = (0..2)
                .map(|i| {
                    let scale = tol.atol + tol.rtol * y[i].norm().max(y5[i].norm());
                    (y5[i] - y4[i]).norm() / scale
                })
                .fold(0.0, f64::max);
            if err <= 1.0 {
                x = if last { target } else { x + step };
                y = y5;
            }
            if !y.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Integration {
                    x,
                    reason: "non-finite state".into(),
                });
            }
            let factor = if err == 0.0 {
                5.0
            } else if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                0.2
            };
            if err <= 1.0 {
                if !last {
                    h = step * factor;
                }
            } else {
                h = step * factor;
            }
            if h < 1e-13 * x.abs().max(1e-300) {
                return Err(Error::Integration {
                    x,
                    reason: format!("step size underflow (h = {h:e})"),
                });
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        // y'' = -y, y(0)=1, y'(0)=0
        let f = |_x: f64, y: &State| [y[1], -y[0]];
        let one = Complex64::from(1.0);
        let zero = Complex64::default();
        let ts = [1.0, 5.0, 10.0];
        let ys = integrate(f, 0.0, [one, zero], &ts, Tolerance::default()).unwrap();
        for (t, y) in ts.iter().zip(&ys) {
            assert!((y[0].re - t.cos()).abs() < 1e-8);
        }
    }
}
