//! Composite quadrature on uniform grids and the sine integral.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Trapezoid rule for samples `y` with uniform spacing `h`.
pub fn trapezoid(y: &[f64], h: f64) -> f64 {
    match y.len() {
        0 | 1 => 0.0,
        n => h * (0.5 * (y[0] + y[n - 1]) + y[1..n - 1].iter().sum::<f64>()),
    }
}

/// Running trapezoid integral: `out[i] = ∫ y` from the first sample to sample `i`.
pub fn cumulative_trapezoid(y: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(y.len());
    let mut acc = 0.0;
    for (i, v) in y.iter().enumerate() {
        if i > 0 {
            acc += 0.5 * h * (y[i - 1] + v);
        }
        out.push(acc);
    }
    out
}

/// Sine integral `Si(x) = ∫₀ˣ sin(t)/t dt`.
///
/// Power series for `|x| ≤ 2`, modified Lentz evaluation of the continued
/// fraction for `E₁(ix)` beyond that.
pub fn sine_integral(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax == 0.0 {
        0.0
    } else if ax <= 2.0 {
        let x2 = ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut n = 0usize;
        loop {
            n += 1;
            let k = (2 * n + 1) as f64;
            term *= -x2 / ((2 * n) as f64 * k);
            let add = term / k;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() || n > 100 {
                break;
            }
        }
        sum
    } else {
        let tiny = 1e-300;
        let mut b = Complex64::new(1.0, ax);
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = Complex64::new(1.0, 0.0) / b;
        let mut h = d;
        for i in 1..1000 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = Complex64::new(1.0, 0.0) / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
                break;
            }
        }
        h *= Complex64::new(ax.cos(), -ax.sin());
        FRAC_PI_2 + h.im
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `∫_K^∞ cos(k s)/k² dk` for `K > 0`.
pub fn cosine_tail_inverse_square(kmax: f64, s: f64) -> f64 {
    let s = s.abs();
    if s == 0.0 {
        return 1.0 / kmax;
    }
    (kmax * s).cos() / kmax - s * (FRAC_PI_2 - sine_integral(kmax * s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let y: Vec<f64> = (0..11).map(|i| 2.0 * i as f64 * 0.1 + 1.0).collect();
        assert!((trapezoid(&y, 0.1) - 2.0).abs() < 1e-14);
        let c = cumulative_trapezoid(&y, 0.1);
        assert_eq!(c[0], 0.0);
        assert!((c[10] - 2.0).abs() < 1e-14);
        assert!((c[5] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn sine_integral_reference_values() {
        assert!((sine_integral(1.0) - 0.946083070367183).abs() < 1e-14);
        assert!((sine_integral(std::f64::consts::PI) - 1.851937051982466).abs() < 1e-13);
        assert!((sine_integral(10.0) - 1.658347594218874).abs() < 1e-13);
        assert!((sine_integral(-2.5) + sine_integral(2.5)).abs() < 1e-15);
        assert!((sine_integral(1e4) - FRAC_PI_2).abs() < 1e-4);
        // continuity across the branch switch
        assert!((sine_integral(2.0 - 1e-12) - sine_integral(2.0 + 1e-12)).abs() < 1e-11);
    }

    #[test]
    fn cosine_tail_reference_values() {
        // oscillatory quadrature at 30 digits
        assert!((cosine_tail_inverse_square(3.0, 1.7) - 0.0587692733649695).abs() < 1e-14);
        assert!((cosine_tail_inverse_square(3.0, -1.7) - 0.0587692733649695).abs() < 1e-14);
        assert_eq!(cosine_tail_inverse_square(4.0, 0.0), 0.25);
    }
}
