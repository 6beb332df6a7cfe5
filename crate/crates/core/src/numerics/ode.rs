//! Adaptive Dormand–Prince 5(4) integration of small real systems.
//!
//! Complex-valued problems are integrated by splitting each complex unknown
//! into its real and imaginary parts, so the state is always `[f64; N]`.
//! Integration proceeds through an ordered list of output nodes; the step is
//! forced to land on every node, which also makes piecewise-smooth
//! coefficients (linearly interpolated between nodes) safe to integrate.

use crate::error::{Error, Result};

/// Step-size control parameters.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-9,
            max_steps: 1_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        let hc = h * c;
        for i in 0..N {
            out[i] += hc * k[i];
        }
    }
    out
}

/// Integrates `y' = f(x, y)` from `nodes[0]` (where `y = y0`) through every
/// subsequent node, returning the state at each node (the first entry is `y0`).
///
/// Nodes must be strictly monotone, in either direction.
pub fn integrate<const N: usize, F>(
    f: F,
    y0: [f64; N],
    nodes: &[f64],
    tol: &Tolerance,
) -> Result<Vec<[f64; N]>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(nodes.len());
    out.push(y0);
    if nodes.len() < 2 {
        return Ok(out);
    }
    let dir = (nodes[1] - nodes[0]).signum();
    if dir == 0.0 {
        return Err(Error::validation(
            "ODE output nodes must be strictly monotone",
        ));
    }

    let mut x = nodes[0];
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut h = (nodes[1] - nodes[0]).abs();
    let mut steps = 0usize;

    for &target in &nodes[1..] {
        if (target - x) * dir <= 0.0 {
            return Err(Error::validation(
                "ODE output nodes must be strictly monotone",
            ));
        }
        loop {
            let remaining = (target - x).abs();
            let last = h >= remaining * (1.0 - 1e-12);
            let hs = if last { remaining } else { h } * dir;

            let k2 = f(x + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
            let k3 = f(x + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(
                x + C4 * hs,
                &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
            );
            let k5 = f(
                x + C5 * hs,
                &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                x + hs,
                &axpy(
                    &y,
                    hs,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                ),
            );
            let y_new = axpy(
                &y,
                hs,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let x_new = if last { target } else { x + hs };
            let k7 = f(x_new, &y_new);

            let mut err = 0.0f64;
            for i in 0..N {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / sc).abs());
            }
            if !err.is_finite() {
                return Err(Error::numerical(format!(
                    "ODE state became non-finite near x = {x}"
                )));
            }

            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::numerical(format!(
                    "ODE integration exceeded {} steps near x = {x}",
                    tol.max_steps
                )));
            }

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                x = x_new;
                y = y_new;
                k1 = k7;
                if !last {
                    h = hs.abs() * factor;
                } else {
                    // Keep the proposed size for the next interval unless it
                    // was artificially shortened to hit the node.
                    h = h.max(hs.abs() * factor.min(1.0));
                }
                if last {
                    break;
                }
            } else {
                h = hs.abs() * factor;
                if h < 1e-14 * (1.0 + x.abs()) {
                    return Err(Error::numerical(format!(
                        "ODE step size underflow near x = {x}"
                    )));
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}
