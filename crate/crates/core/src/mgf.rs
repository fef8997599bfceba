//! Moment generating functions E[e^{-zγ}] of the received SNR.
//!
//! Per RIS cell the SNR is μ·G with G a unit cascade gain, and cells are
//! i.i.d., so the N-cell MGF is the per-cell MGF to the N-th power. The
//! capacity integrand needs 1 − M^N for small arguments, so every closed form
//! also has a complement evaluated without cancellation.

use std::f64::consts::PI;

use crate::channel::{pdf_cascade, CascadeOrder, Link, SystemParams};
use crate::error::{domain, Result};
use crate::quadrature::integrate_semi_infinite;
use crate::specfun::{
    g2332_reduced_tabulated, g2332_tabulated, gamma, gauss_2f1, gauss_2f1_one_minus,
};

/// Below this α the double-Rayleigh complement uses its moment series.
const DOUBLE_SERIES_LIMIT: f64 = 0.1;
/// Below this ζ the triple-cascade MGF uses the residue-reduced contour.
const TRIPLE_REDUCED_LIMIT: f64 = 0.5;
/// Below this ζ it uses the moment series instead.
const TRIPLE_SERIES_LIMIT: f64 = 5e-5;

fn check_arg(name: &'static str, x: f64) -> Result<()> {
    if x >= 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(domain(name, format!("argument {x}, need >= 0")))
    }
}

/// E[e^{-αG}] for unit double-Rayleigh G:
/// (4/3)(1+α)^{-2} ₂F₁(2, 1/2; 5/2; (α−1)/(α+1)).
pub fn mgf_double_cell(alpha: f64) -> Result<f64> {
    check_arg("mgf_double_cell", alpha)?;
    if alpha == 0.0 {
        return Ok(1.0);
    }
    if alpha.is_infinite() {
        return Ok(0.0);
    }
    if alpha <= DOUBLE_SERIES_LIMIT {
        return Ok(1.0 - double_complement_series(alpha));
    }
    let prefactor = 4.0 / (3.0 * (1.0 + alpha).powi(2));
    let one_minus_x = 2.0 / (alpha + 1.0);
    let f = if one_minus_x <= 0.3 {
        gauss_2f1_one_minus(2.0, 0.5, 2.5, one_minus_x)?
    } else {
        gauss_2f1(2.0, 0.5, 2.5, (alpha - 1.0) / (alpha + 1.0))?
    };
    Ok(prefactor * f)
}

/// 1 − E[e^{-αG}] = Σ_{k≥1} (−1)^{k+1} α^k E[G^k]/k!, E[G^k] = 2^k Γ(1+k/2)².
fn double_complement_series(alpha: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0; // (2α)^k / k!
    for k in 1..60 {
        let kf = k as f64;
        pow *= 2.0 * alpha / kf;
        let g = gamma(1.0 + 0.5 * kf);
        let term = pow * g * g;
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// E[e^{-ζG}] for the unit triple cascade:
/// G^{3,2}_{2,3}(1/(2ζ²) | 0, 1/2; 1/2, 1/2, 1/2) / (ζ√(2π)), with the
/// ζ → 0 limit 1.
pub fn mgf_triple_cell(zeta: f64) -> Result<f64> {
    check_arg("mgf_triple_cell", zeta)?;
    if zeta == 0.0 {
        return Ok(1.0);
    }
    if zeta.is_infinite() {
        return Ok(0.0);
    }
    if zeta < TRIPLE_REDUCED_LIMIT {
        return Ok(1.0 - triple_complement_reduced(zeta)?);
    }
    let w = 0.5 / (zeta * zeta);
    Ok(g2332_tabulated(w) / (zeta * (2.0 * PI).sqrt()))
}

/// 1 − M₃(ζ) from the contour shifted past the s = −1/2 pole, whose residue
/// is exactly the constant 1 of the MGF.
fn triple_complement_reduced(zeta: f64) -> Result<f64> {
    if zeta < TRIPLE_SERIES_LIMIT {
        return Ok(triple_complement_series(zeta));
    }
    // aliasing on the fixed contour grows like w^{1/2}; w ≤ 2e8 here
    let w = 0.5 / (zeta * zeta);
    Ok(-g2332_reduced_tabulated(w) / (zeta * (2.0 * PI).sqrt()))
}

/// Σ_{k≥1} (−1)^{k+1} ζ^k E[G^k]/k! with E[G^k] = (2^{k/2} Γ(1+k/2))³.
/// Only asymptotic, but M₃ is completely monotone so the error is below the
/// first omitted term, and for ζ < 5e-5 the terms fall by > 1e3 per step.
fn triple_complement_series(zeta: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = 1.0; // (2^{3/2} ζ)^k / k!
    for k in 1..12 {
        let kf = k as f64;
        pow *= 2.0 * std::f64::consts::SQRT_2 * zeta / kf;
        let g = gamma(1.0 + 0.5 * kf);
        let term = pow * g * g * g;
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Per-cell closed-form MGF for a cascade order of 2 or 3.
pub fn cell_mgf(order: CascadeOrder, x: f64) -> Result<f64> {
    match order {
        CascadeOrder::DoubleRayleigh => mgf_double_cell(x),
        CascadeOrder::TripleCascade => mgf_triple_cell(x),
        CascadeOrder::Rayleigh => Err(domain("cell_mgf", "no closed form for a single Rayleigh leg")),
    }
}

/// 1 − per-cell MGF, accurate for small arguments.
pub fn cell_mgf_complement(order: CascadeOrder, x: f64) -> Result<f64> {
    match order {
        CascadeOrder::DoubleRayleigh => {
            check_arg("mgf_double_cell", x)?;
            if x > 0.0 && x <= DOUBLE_SERIES_LIMIT {
                Ok(double_complement_series(x))
            } else {
                Ok(1.0 - mgf_double_cell(x)?)
            }
        }
        CascadeOrder::TripleCascade => {
            check_arg("mgf_triple_cell", x)?;
            if x > 0.0 && x < TRIPLE_REDUCED_LIMIT {
                triple_complement_reduced(x)
            } else {
                Ok(1.0 - mgf_triple_cell(x)?)
            }
        }
        CascadeOrder::Rayleigh => Err(domain("cell_mgf", "no closed form for a single Rayleigh leg")),
    }
}

/// Numeric Laplace transform ∫₀^∞ e^{-xg} f_k(g) dg of the cascade density.
/// Independent of the closed forms; used as their oracle.
pub fn cell_mgf_numeric(order: CascadeOrder, x: f64, rel_tol: f64) -> Result<f64> {
    check_arg("cell_mgf_numeric", x)?;
    integrate_semi_infinite(
        |g| {
            let e = (-x * g).exp();
            if e == 0.0 {
                0.0
            } else {
                e * pdf_cascade(g, order).unwrap_or(0.0)
            }
        },
        rel_tol,
    )
}

/// The N-cell MGF z ↦ M_cell(zμ)^N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MgfEvaluator {
    pub order: CascadeOrder,
    pub cell_count: u32,
    pub scale: f64,
}

impl MgfEvaluator {
    pub fn new(order: CascadeOrder, cell_count: u32, scale: f64) -> Result<Self> {
        if order == CascadeOrder::Rayleigh {
            return Err(domain("MgfEvaluator", "cell order must be 2 or 3"));
        }
        if cell_count == 0 {
            return Err(domain("MgfEvaluator", "cell count must be positive"));
        }
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(domain("MgfEvaluator", format!("scale {scale}")));
        }
        Ok(Self {
            order,
            cell_count,
            scale,
        })
    }

    pub fn for_link(params: &SystemParams, link: Link) -> Result<Self> {
        params.validate()?;
        Self::new(params.model.cell_order(), params.cell_count, params.snr_scale(link)?)
    }

    pub fn per_cell(&self, z: f64) -> Result<f64> {
        check_arg("MgfEvaluator", z)?;
        cell_mgf(self.order, z * self.scale)
    }

    pub fn value(&self, z: f64) -> Result<f64> {
        Ok(self.per_cell(z)?.powi(self.cell_count as i32))
    }

    /// 1 − M(z)^N.
    pub fn complement(&self, z: f64) -> Result<f64> {
        check_arg("MgfEvaluator", z)?;
        let c = cell_mgf_complement(self.order, z * self.scale)?;
        Ok(-(self.cell_count as f64 * (-c).ln_1p()).exp_m1())
    }

    /// lim_{z→0} (1 − M(z)^N)/z = N μ E[G].
    pub fn slope_at_zero(&self) -> f64 {
        self.cell_count as f64 * self.scale * self.order.mean()
    }
}

/// MGF of the SNR at the destination or eavesdropper.
pub fn mgf_snr(params: &SystemParams, link: Link, z: f64) -> Result<f64> {
    MgfEvaluator::for_link(params, link)?.value(z)
}
