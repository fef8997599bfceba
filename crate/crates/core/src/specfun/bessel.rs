//! Modified Bessel function of the second kind, order zero.

use super::gamma::EULER_GAMMA;
use crate::error::{domain, Result};

/// K₀(x) for real x > 0.
///
/// Power series below x = 2; above, the integral representation
/// K₀(x) = e^{-x} ∫₀^∞ exp(-2x sinh²(t/2)) dt evaluated with the trapezoidal
/// rule, which converges geometrically for this entire integrand. Underflows
/// to zero for x beyond ~745.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain("bessel_k0", format!("x = {x}, need finite x > 0")));
    }
    Ok(if x <= 2.0 { k0_series(x) } else { k0_integral(x) })
}

fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

fn k0_integral(x: f64) -> f64 {
    let scale = (-x).exp();
    if scale == 0.0 {
        return 0.0;
    }
    let h = (0.5 / x.sqrt()).min(0.25);
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let s = (0.5 * k as f64 * h).sinh();
        let term = (-2.0 * x * s * s).exp();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    scale * h * sum
}
