//! Gamma-family kernels: complex log-gamma for the Mellin–Barnes integrands,
//! real gamma and digamma for the hypergeometric connection formulas.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln(2π)/2
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Lanczos sum for Re z >= 1/2, argument already shifted by one.
fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let zm1 = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (zm1 + k as f64);
    }
    let t = zm1 + LANCZOS_G + 0.5;
    HALF_LN_2PI + (zm1 + 0.5) * t.ln() - t + sum.ln()
}

/// Complex log-gamma. Only `exp(ln_gamma(z))` is meaningful: the imaginary
/// part is not reduced to the principal branch.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        lanczos_ln_gamma(z)
    } else if z.re > 0.0 {
        // one upward step keeps the Lanczos sum in its accurate half-plane
        lanczos_ln_gamma(z + 1.0) - z.ln()
    } else {
        let s = (z * PI).sin();
        Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z)
    }
}

/// Real gamma function; returns `inf` at the poles.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        lanczos_ln_gamma(Complex64::new(x, 0.0)).re.exp()
    }
}

/// Reciprocal gamma, exactly zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// Digamma ψ(x) for real x away from the poles.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.floor() {
            return f64::NAN;
        }
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    // asymptotic tail: B_2k / (2k y^2k)
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2
                        * (1.0 / 240.0
                            - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32_760.0))))));
    acc + y.ln() - 0.5 / y - tail
}
