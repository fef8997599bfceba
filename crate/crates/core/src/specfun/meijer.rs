//! Meijer-G functions G^{q,p}_{p,q} by numerical Mellin–Barnes integration.
//!
//! For the instances used here every gamma factor sits in the numerator, so
//!
//! ```text
//! G(w) = 1/(2πi) ∫_{c-i∞}^{c+i∞} Π_j Γ(b_j - s) Π_k Γ(1 - a_k + s) w^s ds
//!      = 1/π ∫_0^∞ Re[ Φ(c + it) w^{c+it} ] dt
//! ```
//!
//! The abscissa c must separate the "right" poles (s = b_j + n) from the
//! "left" poles (s = a_k - 1 - n). By default it is placed at the real-axis
//! saddle point of |Φ(c) w^c|, clamped away from the nearest pole. The
//! saddle keeps the integrand envelope at the size of the result, which
//! avoids cancellation when G is exponentially small (large w for the
//! pure-b instances). The t-integral is done with the trapezoidal rule,
//! exponentially convergent for this analytic integrand.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use super::gamma::{digamma, ln_gamma};
use crate::error::{convergence, domain, Result};

/// Integration settings for the vertical Mellin–Barnes contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinBarnesConfig {
    /// Real part of the contour. `None` selects the saddle point.
    pub contour_abscissa: Option<f64>,
    /// Cut-off for |Im s|.
    pub truncation_height: f64,
    /// Trapezoid nodes over [0, truncation_height].
    pub node_count: usize,
}

impl Default for MellinBarnesConfig {
    fn default() -> Self {
        Self {
            contour_abscissa: None,
            truncation_height: 40.0,
            node_count: 2000,
        }
    }
}

impl MellinBarnesConfig {
    fn validate(&self) -> Result<()> {
        if self.node_count < 64 {
            return Err(domain("mellin_barnes", format!("node_count = {} < 64", self.node_count)));
        }
        if !(self.truncation_height > 0.0 && self.truncation_height.is_finite()) {
            return Err(domain("mellin_barnes", "truncation_height must be positive"));
        }
        Ok(())
    }
}

/// Distance kept between the contour and the nearest pole.
const POLE_MARGIN: f64 = 0.15;
/// Envelope ratio below which the remaining tail is dropped.
const TAIL_CUTOFF: f64 = 1e-19;
/// Envelope ratio at the truncation height above which the tail is an error.
const TAIL_LIMIT: f64 = 1e-15;

/// A Meijer-G instance with all m = q, n = p gamma factors in the numerator.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MellinBarnes<'a> {
    pub name: &'static str,
    /// upper parameters a_k, each contributing Γ(1 - a_k + s)
    pub a: &'a [f64],
    /// lower parameters b_j, each contributing Γ(b_j - s)
    pub b: &'a [f64],
}

impl MellinBarnes<'_> {
    /// Open strip (left, right) free of poles.
    fn strip(&self) -> (f64, f64) {
        let left = self
            .a
            .iter()
            .map(|&a| a - 1.0)
            .fold(f64::NEG_INFINITY, f64::max);
        let right = self.b.iter().copied().fold(f64::INFINITY, f64::min);
        (left, right)
    }

    fn ln_phi(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        // repeated parameters share one log-gamma evaluation
        for (i, &b) in self.b.iter().enumerate() {
            if self.b[..i].contains(&b) {
                continue;
            }
            let mult = self.b.iter().filter(|&&x| x == b).count() as f64;
            acc += mult * ln_gamma(b - s);
        }
        for (i, &a) in self.a.iter().enumerate() {
            if self.a[..i].contains(&a) {
                continue;
            }
            let mult = self.a.iter().filter(|&&x| x == a).count() as f64;
            acc += mult * ln_gamma(1.0 - a + s);
        }
        acc
    }

    /// d/dc of ln|Φ(c) w^c| on the real axis.
    fn slope(&self, c: f64, ln_w: f64) -> f64 {
        let mut d = ln_w;
        for &b in self.b {
            d -= digamma(b - c);
        }
        for &a in self.a {
            d += digamma(1.0 - a + c);
        }
        d
    }

    fn saddle(&self, ln_w: f64, lo: f64, hi: f64) -> f64 {
        // the slope is increasing (log-convexity of Γ), so bisect
        if self.slope(hi, ln_w) <= 0.0 {
            return hi;
        }
        let mut lo = lo;
        if lo == f64::NEG_INFINITY {
            lo = hi - 1.0;
            while self.slope(lo, ln_w) > 0.0 {
                lo = hi - 2.0 * (hi - lo);
            }
        } else if self.slope(lo, ln_w) >= 0.0 {
            return lo;
        }
        let mut hi = hi;
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.slope(mid, ln_w) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn eval(&self, w: f64, cfg: &MellinBarnesConfig) -> Result<f64> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(domain(self.name, format!("w = {w}, need finite w > 0")));
        }
        cfg.validate()?;
        let (left, right) = self.strip();
        let ln_w = w.ln();
        let c = match cfg.contour_abscissa {
            Some(c) => {
                if !(c > left && c < right) {
                    return Err(domain(
                        self.name,
                        format!("contour abscissa {c} outside pole-free strip ({left}, {right})"),
                    ));
                }
                c
            }
            None => self.saddle(ln_w, left + POLE_MARGIN, right - POLE_MARGIN),
        };
        self.integrate(c, ln_w, cfg)
    }

    fn integrate(&self, c: f64, ln_w: f64, cfg: &MellinBarnesConfig) -> Result<f64> {
        let h = cfg.truncation_height / cfg.node_count as f64;
        let log_at = |t: f64| self.ln_phi(Complex64::new(c, t)) + Complex64::new(c, t) * ln_w;
        let l0 = log_at(0.0);
        let peak = l0.re;
        // work relative to the envelope at t = 0 to stay in range
        let mut sum = 0.5 * (l0 - peak).exp().re;
        let mut last_ratio = 1.0;
        for k in 1..=cfg.node_count {
            let l = log_at(k as f64 * h);
            last_ratio = (l.re - peak).exp();
            sum += (l - peak).exp().re;
            if last_ratio < TAIL_CUTOFF {
                break;
            }
        }
        if last_ratio > TAIL_LIMIT {
            return Err(convergence(
                self.name,
                format!(
                    "contour tail {last_ratio:.3e} at |Im s| = {} exceeds tolerance",
                    cfg.truncation_height
                ),
            ));
        }
        let value = sum * h / PI * peak.exp();
        if !value.is_finite() {
            return Err(convergence(self.name, "non-finite contour integral"));
        }
        Ok(value)
    }

    /// Integral along an explicit abscissa inside an arbitrary pole-free
    /// strip (may lie left of the principal one; residues crossed are then
    /// the caller's responsibility).
    pub fn integrate_at(&self, c: f64, w: f64, cfg: &MellinBarnesConfig) -> Result<f64> {
        cfg.validate()?;
        self.integrate(c, w.ln(), cfg)
    }
}

/// Trapezoid nodes of Φ(c + it) for a fixed abscissa, independent of w.
/// Evaluating G then costs one complex rotation per node.
#[derive(Debug)]
pub(crate) struct ContourTable {
    c: f64,
    h: f64,
    /// Φ(c + ikh), first entry already halved
    phi: Vec<Complex64>,
}

impl ContourTable {
    fn build(inst: &MellinBarnes<'_>, c: f64, h: f64) -> Self {
        let l0 = inst.ln_phi(Complex64::new(c, 0.0)).re;
        let mut phi = Vec::new();
        for k in 0.. {
            let t = k as f64 * h;
            let v = inst.ln_phi(Complex64::new(c, t)).exp();
            phi.push(if k == 0 { 0.5 * v } else { v });
            if v.norm().ln() - l0 < TAIL_CUTOFF.ln() {
                break;
            }
        }
        Self { c, h, phi }
    }

    fn eval(&self, w: f64) -> f64 {
        let ln_w = w.ln();
        let step = Complex64::from_polar(1.0, self.h * ln_w);
        let mut rot = Complex64::new(1.0, 0.0);
        let mut sum = 0.0;
        for (k, p) in self.phi.iter().enumerate() {
            if k % 64 == 0 {
                // re-anchor the rotation to bound drift
                rot = Complex64::from_polar(1.0, k as f64 * self.h * ln_w);
            }
            sum += (p * rot).re;
            rot *= step;
        }
        sum * self.h / PI * (self.c * ln_w).exp()
    }
}

/// Fixed abscissae a quarter unit from every pole: trapezoid error is
/// ~exp(-2π·0.25/h), about 1e-17 at h = 0.04.
const TABLE_STEP: f64 = 0.04;

fn table_principal() -> &'static ContourTable {
    static T: OnceLock<ContourTable> = OnceLock::new();
    T.get_or_init(|| ContourTable::build(&G2332, 0.25, TABLE_STEP))
}

fn table_reduced() -> &'static ContourTable {
    static T: OnceLock<ContourTable> = OnceLock::new();
    T.get_or_init(|| ContourTable::build(&G2332, -0.75, TABLE_STEP))
}

/// G^{3,2}_{2,3}(w) on the fixed contour Re s = 1/4. Meant for w ≲ 2, where
/// the integrand envelope w^{1/4} does not exceed the result by much.
pub(crate) fn g2332_tabulated(w: f64) -> f64 {
    table_principal().eval(w)
}

/// G^{3,2}_{2,3}(w) − √π w^{-1/2} on the fixed contour Re s = −3/4.
pub(crate) fn g2332_reduced_tabulated(w: f64) -> f64 {
    table_reduced().eval(w)
}

pub(crate) const G0220: MellinBarnes<'static> = MellinBarnes {
    name: "meijer_g_0220",
    a: &[],
    b: &[0.5, 0.5],
};

pub(crate) const G0330: MellinBarnes<'static> = MellinBarnes {
    name: "meijer_g_0330",
    a: &[],
    b: &[0.5, 0.5, 0.5],
};

pub(crate) const G2332: MellinBarnes<'static> = MellinBarnes {
    name: "meijer_g_2332",
    a: &[0.0, 0.5],
    b: &[0.5, 0.5, 0.5],
};

/// G^{2,0}_{0,2}(w | ; 1/2, 1/2) = 2√w K₀(2√w).
pub fn meijer_g_0220(w: f64) -> Result<f64> {
    G0220.eval(w, &MellinBarnesConfig::default())
}

/// G^{3,0}_{0,3}(w | ; 1/2, 1/2, 1/2).
pub fn meijer_g_0330(w: f64) -> Result<f64> {
    G0330.eval(w, &MellinBarnesConfig::default())
}

/// G^{3,2}_{2,3}(w | 0, 1/2; 1/2, 1/2, 1/2).
pub fn meijer_g_2332(w: f64) -> Result<f64> {
    G2332.eval(w, &MellinBarnesConfig::default())
}

/// G^{3,2}_{2,3}(w) − √π w^{-1/2}: the contour moved across the leading left
/// pole at s = -1/2 into the strip (-1, -1/2). Accurate in relative terms
/// for large w, where the subtracted residue dominates.
pub fn meijer_g_2332_reduced(w: f64) -> Result<f64> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(domain("meijer_g_2332_reduced", format!("w = {w}")));
    }
    let cfg = MellinBarnesConfig::default();
    let c = G2332.saddle(w.ln(), -1.0 + POLE_MARGIN, -0.5 - POLE_MARGIN);
    G2332.integrate_at(c, w, &cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k0;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn g0220_reference_values() {
        // mpmath meijerg, 40 digits
        let cases = [
            (0.25, 0.421_024_438_240_708_33),
            (1.0, 0.227_787_745_499_066_87),
            (1e-6, 0.012_661_093_889_244_352),
            (100.0, 1.148_247_563_067_304_9e-8),
            (625.0, 1.705_083_874_894_747_8e-21),
        ];
        for (w, want) in cases {
            let got = meijer_g_0220(w).unwrap();
            assert!(rel(got, want) < 1e-10, "w = {w}: {got} vs {want}");
        }
    }

    #[test]
    fn g0220_is_scaled_k0() {
        let mut g = 1e-3f64;
        while g < 50.0 {
            let lhs = meijer_g_0220(0.25 * g * g).unwrap();
            let rhs = g * bessel_k0(g).unwrap();
            assert!(rel(lhs, rhs) < 1e-8, "g = {g}");
            g *= 1.37;
        }
    }

    #[test]
    fn g0330_reference_values() {
        let cases = [
            (0.125, 0.481_790_779_083_877_55),
            (1e-4, 0.304_269_416_201_487_7),
            (1.0, 0.164_041_606_748_376_07),
            (10.0, 0.007_915_360_269_308_907),
            (100.0, 6.846_405_092_429_212e-6),
        ];
        for (w, want) in cases {
            let got = meijer_g_0330(w).unwrap();
            assert!(rel(got, want) < 1e-10, "w = {w}: {got} vs {want}");
        }
    }

    #[test]
    fn g2332_reference_values() {
        let cases = [
            (0.5, 0.820_652_542_287_451_5),
            (50.0, 0.209_546_442_752_346_45),
            (5e7, 2.506_134_894_653_875_8e-4),
            (5e-7, 0.057_927_074_762_005_4),
        ];
        for (w, want) in cases {
            let got = meijer_g_2332(w).unwrap();
            assert!(rel(got, want) < 1e-10, "w = {w}: {got} vs {want}");
        }
    }

    #[test]
    fn reduced_g2332_adds_back_the_residue() {
        for &w in &[2.0, 50.0, 5e3, 5e7] {
            let full = meijer_g_2332(w).unwrap();
            let reduced = meijer_g_2332_reduced(w).unwrap();
            let residue = PI.sqrt() / w.sqrt();
            assert!(rel(reduced + residue, full) < 1e-11, "w = {w}");
        }
    }

    #[test]
    fn tabulated_contours_match_saddle() {
        for &w in &[1e-9, 5e-7, 0.01, 0.5, 2.0] {
            let a = g2332_tabulated(w);
            let b = meijer_g_2332(w).unwrap();
            assert!(rel(a, b) < 1e-12, "w = {w}: {a} vs {b}");
        }
        for &w in &[2.0, 40.0, 5e5, 1e8] {
            let a = g2332_reduced_tabulated(w);
            let b = meijer_g_2332_reduced(w).unwrap();
            assert!(rel(a, b) < 1e-10, "w = {w}: {a} vs {b}");
        }
    }

    #[test]
    fn stable_under_refinement() {
        let base = MellinBarnesConfig::default();
        let fine = MellinBarnesConfig {
            truncation_height: 2.0 * base.truncation_height,
            node_count: 4 * base.node_count,
            ..base
        };
        for inst in [G0220, G0330, G2332] {
            for &w in &[1e-5, 0.1, 3.0, 80.0] {
                let a = inst.eval(w, &base).unwrap();
                let b = inst.eval(w, &fine).unwrap();
                assert!(rel(a, b) < 1e-9, "{} w = {w}", inst.name);
            }
        }
    }

    #[test]
    fn fixed_abscissa_agrees_with_saddle() {
        let fixed = MellinBarnesConfig {
            contour_abscissa: Some(-0.25),
            ..Default::default()
        };
        let a = G0220.eval(1.0, &fixed).unwrap();
        assert!(rel(a, meijer_g_0220(1.0).unwrap()) < 1e-12);
        let fixed = MellinBarnesConfig {
            contour_abscissa: Some(0.0),
            ..Default::default()
        };
        let a = G2332.eval(0.5, &fixed).unwrap();
        assert!(rel(a, meijer_g_2332(0.5).unwrap()) < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(meijer_g_0220(0.0).is_err());
        assert!(meijer_g_0330(-1.0).is_err());
        let bad = MellinBarnesConfig {
            contour_abscissa: Some(0.7),
            ..Default::default()
        };
        assert!(G2332.eval(1.0, &bad).is_err());
        let short = MellinBarnesConfig {
            node_count: 10,
            ..Default::default()
        };
        assert!(G0220.eval(1.0, &short).is_err());
        // contour cut far too early
        let truncated = MellinBarnesConfig {
            truncation_height: 0.5,
            node_count: 64,
            contour_abscissa: None,
        };
        assert!(matches!(
            G0220.eval(1.0, &truncated),
            Err(crate::Error::Convergence { .. })
        ));
    }
}
