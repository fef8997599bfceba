//! Ergodic capacity and average secrecy capacity from the SNR MGFs.
//!
//! With ln(1+γ) = ∫₀^∞ (1 − e^{-γz}) e^{-z}/z dz, the average capacity of a
//! link is (1/ln 2) ∫₀^∞ (1 − M(z)) e^{-z}/z dz. The exponential weight makes
//! Gauss–Laguerre the natural rule on [1, ∞); below z = 1 the integrand varies
//! on the scale 1/SNR, so that piece uses Gauss–Legendre in ln z. An adaptive
//! double-exponential rule is available as an independent cross-check.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{Link, SystemParams};
use crate::error::{convergence, Error, Result};
use crate::mgf::MgfEvaluator;
use crate::quadrature::{gauss_laguerre, gauss_legendre, integrate_semi_infinite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureMethod {
    /// n Laguerre nodes on [1, ∞) plus n Legendre nodes in ln z on (0, 1].
    GaussLaguerre,
    AdaptiveSemiInfinite,
}

/// How the capacity integrals are discretized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    /// Nodes per piece of the Gauss–Laguerre rule; unused by the adaptive rule.
    pub node_count: usize,
    pub rel_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadratureMethod::GaussLaguerre,
            node_count: 200,
            rel_tolerance: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn adaptive() -> Self {
        Self {
            method: QuadratureMethod::AdaptiveSemiInfinite,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance <= 1e-6) {
            return Err(Error::Config(format!(
                "quadrature tolerance must be in (0, 1e-6], got {}",
                self.rel_tolerance
            )));
        }
        if self.method == QuadratureMethod::GaussLaguerre && self.node_count < 64 {
            return Err(Error::Config(format!(
                "Gauss-Laguerre needs at least 64 nodes, got {}",
                self.node_count
            )));
        }
        Ok(())
    }
}

/// Average capacities of both links and the resulting secrecy measures,
/// all in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyResult {
    pub capacity_d: f64,
    pub capacity_e: f64,
    /// E[C_D] − E[C_E], evaluated as one integral over the difference of MGFs.
    pub secrecy_difference: f64,
    /// max(secrecy_difference, 0)
    pub secrecy_clamped: f64,
}

/// Node counts tried, as multiples of the requested count, before a failed
/// doubling check becomes an error.
const ESCALATION: [usize; 3] = [1, 2, 4];

/// Absolute floor for the node-doubling check, so that values that are
/// exactly zero (equal links, silent source) do not trip the relative test.
const ABS_FLOOR: f64 = 1e-14;

fn within(a: f64, b: f64, rel_tol: f64) -> bool {
    (a - b).abs() <= rel_tol * a.abs().max(b.abs()) + ABS_FLOOR
}

/// Nodes z_i and weights W_i with ∫₀^∞ (1 − M(z)) e^{-z}/z dz ≈ Σ W_i (1 − M(z_i)).
///
/// On (0, 1] the integrand is taken in s = ln z, where it becomes
/// (1 − M(e^s)) e^{-e^s}: a smooth step located near s = −ln(mean SNR),
/// which Gauss–Legendre resolves at any SNR. Below s_lo the remainder is at
/// most slope·e^{s_lo}, about 1e-15 of the result. On [1, ∞) the Laguerre
/// weight absorbs e^{-z}.
struct CapacityRule {
    z: Vec<f64>,
    w: Vec<f64>,
}

impl CapacityRule {
    fn new(n: usize, slope: f64) -> Result<Self> {
        let s_lo = (1e-15f64).ln() - slope.max(1.0).ln();
        let half = -0.5 * s_lo;
        let legendre = gauss_legendre(n)?;
        let laguerre = gauss_laguerre(n)?;
        let mut z = Vec::with_capacity(2 * n);
        let mut w = Vec::with_capacity(2 * n);
        for (x, wx) in legendre.nodes.iter().zip(&legendre.weights) {
            let zi = (half * (x - 1.0)).exp();
            z.push(zi);
            w.push(wx * half * (-zi).exp());
        }
        let e1 = (-1.0f64).exp();
        for (u, wu) in laguerre.nodes.iter().zip(&laguerre.weights) {
            z.push(1.0 + u);
            w.push(wu * e1 / (1.0 + u));
        }
        Ok(Self { z, w })
    }

    /// Per-node terms W_i (1 − M(z_i)), in a fixed order.
    fn terms(&self, eval: &MgfEvaluator) -> Result<Vec<f64>> {
        self.z
            .iter()
            .zip(&self.w)
            .map(|(&z, &w)| Ok(w * eval.complement(z)?))
            .collect()
    }
}

/// Runs `totals` at n and 2n nodes, escalating n while the two disagree.
/// Returns the n-node values of the first agreeing pair.
fn laguerre_checked(
    quad: &QuadratureSpec,
    mut totals: impl FnMut(usize) -> Result<Vec<f64>>,
) -> Result<Vec<f64>> {
    let mut worst = String::new();
    let mut coarse = totals(quad.node_count * ESCALATION[0])?;
    for &mult in &ESCALATION {
        let n = quad.node_count * mult;
        let fine = totals(2 * n)?;
        match coarse
            .iter()
            .zip(&fine)
            .find(|(c, f)| !within(**c, **f, quad.rel_tolerance))
        {
            None => return Ok(coarse),
            Some((c, f)) => worst = format!("{n} vs {} nodes: {c} vs {f}", 2 * n),
        }
        coarse = fine;
    }
    Err(convergence("capacity quadrature", worst))
}

fn adaptive_integral(
    integrand: impl Fn(f64) -> Result<f64>,
    rel_tol: f64,
) -> Result<f64> {
    let mut failure = None;
    let value = integrate_semi_infinite(
        |z| match integrand(z) {
            Ok(v) => v * (-z).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        // tighter than the contract so that the reported value honours it
        0.01 * rel_tol,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// E[log₂(1 + γ)] for the destination or eavesdropper link.
pub fn avg_capacity(params: &SystemParams, link: Link, quad: &QuadratureSpec) -> Result<f64> {
    quad.validate()?;
    let eval = MgfEvaluator::for_link(params, link)?;
    if eval.scale == 0.0 {
        return Ok(0.0);
    }
    let value = match quad.method {
        QuadratureMethod::GaussLaguerre => laguerre_checked(quad, |n| {
            let rule = CapacityRule::new(n, eval.slope_at_zero())?;
            Ok(vec![rule.terms(&eval)?.iter().sum()])
        })?[0],
        QuadratureMethod::AdaptiveSemiInfinite => {
            adaptive_integral(|z| Ok(eval.complement(z)? / z), quad.rel_tolerance)?
        }
    };
    Ok(value / LN_2)
}

/// Average capacities of both links and the average secrecy capacity.
pub fn avg_secrecy_capacity(params: &SystemParams, quad: &QuadratureSpec) -> Result<SecrecyResult> {
    quad.validate()?;
    let d = MgfEvaluator::for_link(params, Link::Destination)?;
    let e = MgfEvaluator::for_link(params, Link::Eavesdropper)?;
    let (capacity_d, capacity_e, diff) = match quad.method {
        QuadratureMethod::GaussLaguerre => {
            // one rule for both links keeps the difference exactly antisymmetric
            let slope = d.slope_at_zero().max(e.slope_at_zero());
            let totals = |n| -> Result<[f64; 3]> {
                let rule = CapacityRule::new(n, slope)?;
                let td = rule.terms(&d)?;
                let te = rule.terms(&e)?;
                let cd: f64 = td.iter().sum();
                let ce: f64 = te.iter().sum();
                let diff: f64 = td.iter().zip(&te).map(|(a, b)| a - b).sum();
                Ok([cd, ce, diff])
            };
            let v = laguerre_checked(quad, |n| Ok(totals(n)?.to_vec()))?;
            (v[0], v[1], v[2])
        }
        QuadratureMethod::AdaptiveSemiInfinite => {
            let tol = quad.rel_tolerance;
            let cd = adaptive_integral(|z| Ok(d.complement(z)? / z), tol)?;
            let ce = adaptive_integral(|z| Ok(e.complement(z)? / z), tol)?;
            let diff = adaptive_integral(|z| Ok((d.complement(z)? - e.complement(z)?) / z), tol)?;
            (cd, ce, diff)
        }
    };
    let secrecy_difference = diff / LN_2;
    Ok(SecrecyResult {
        capacity_d: capacity_d / LN_2,
        capacity_e: capacity_e / LN_2,
        secrecy_difference,
        secrecy_clamped: secrecy_difference.max(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Model;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn unit_access_point() -> SystemParams {
        // μ = Ps r^{-β}/N0 = 1 with r = 1
        SystemParams {
            source_power: 1.0,
            noise_psd: 1.0,
            pathloss_exponent: 2.7,
            r_d: 1.0,
            r_e: 2.0,
            r_s: 10.0,
            cell_count: 1,
            model: Model::AccessPoint,
        }
    }

    #[test]
    fn unit_scale_capacity_reference() {
        // E[log₂(1+G)] for unit double-Rayleigh G by direct quadrature of
        // log₂(1+g) g K₀(g), 30-digit mpmath
        let want = 1.220_279_340_039_575_3;
        for quad in [QuadratureSpec::default(), QuadratureSpec::adaptive()] {
            let got = avg_capacity(&unit_access_point(), Link::Destination, &quad).unwrap();
            assert!(rel(got, want) < 1e-7, "{quad:?}: {got}");
        }
    }

    #[test]
    fn access_point_defaults_reference() {
        // mpmath quadrature of the same identity, 30 digits
        let cases = [
            (1, 0.427_669_348_058_975, 0.079_055_654_640_111_2),
            (2, 0.765_135_175_621_88, 0.154_117_930_830_778),
            (4, 1.276_626_777_342_54, 0.293_712_336_807_88),
            (16, 2.776_996_088_188_88, 0.931_774_257_226_375),
        ];
        for (n, cd, ce) in cases {
            let p = SystemParams {
                cell_count: n,
                ..SystemParams::defaults(Model::AccessPoint)
            };
            let r = avg_secrecy_capacity(&p, &QuadratureSpec::default()).unwrap();
            assert!(rel(r.capacity_d, cd) < 1e-7, "N = {n}: {}", r.capacity_d);
            assert!(rel(r.capacity_e, ce) < 1e-7, "N = {n}: {}", r.capacity_e);
            assert!(rel(r.secrecy_difference, cd - ce) < 1e-7);
            assert!((r.secrecy_difference - (r.capacity_d - r.capacity_e)).abs() < 1e-13);
            assert_eq!(r.secrecy_clamped, r.secrecy_difference);
        }
    }

    #[test]
    fn silent_source_has_zero_capacity() {
        let p = SystemParams {
            source_power: 0.0,
            ..SystemParams::defaults(Model::Relay)
        };
        assert_eq!(avg_capacity(&p, Link::Destination, &QuadratureSpec::default()).unwrap(), 0.0);
        let r = avg_secrecy_capacity(&p, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.secrecy_difference, 0.0);
    }

    #[test]
    fn equal_distances_cancel_exactly() {
        for model in [Model::AccessPoint, Model::Relay] {
            let p = SystemParams {
                r_e: 4.0,
                ..SystemParams::defaults(model)
            };
            let r = avg_secrecy_capacity(&p, &QuadratureSpec::default()).unwrap();
            assert_eq!(r.secrecy_difference, 0.0);
            assert_eq!(r.secrecy_clamped, 0.0);
        }
    }

    #[test]
    fn quadrature_methods_agree() {
        for model in [Model::AccessPoint, Model::Relay] {
            let p = SystemParams::defaults(model);
            let a = avg_secrecy_capacity(&p, &QuadratureSpec::default()).unwrap();
            let b = avg_secrecy_capacity(&p, &QuadratureSpec::adaptive()).unwrap();
            assert!(rel(a.capacity_d, b.capacity_d) < 1e-6, "{model:?}");
            assert!(rel(a.capacity_e, b.capacity_e) < 1e-6, "{model:?}");
            assert!(rel(a.secrecy_difference, b.secrecy_difference) < 1e-6, "{model:?}");
        }
    }

    #[test]
    fn rejects_bad_quadrature() {
        let p = SystemParams::defaults(Model::AccessPoint);
        let q = QuadratureSpec {
            node_count: 10,
            ..Default::default()
        };
        assert!(avg_secrecy_capacity(&p, &q).is_err());
        let q = QuadratureSpec {
            rel_tolerance: 1e-3,
            ..Default::default()
        };
        assert!(avg_capacity(&p, Link::Destination, &q).is_err());
    }
}
