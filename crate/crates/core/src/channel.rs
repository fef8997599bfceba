//! Scenario parameters, path loss, and the cascaded-Rayleigh fading laws
//! (densities and samplers) of both system models.
//!
//! All Rayleigh legs use unit scale (σ = 1): the amplitude product of k
//! independent legs has mean (π/2)^{k/2}, and every physical scaling is
//! carried by the SNR scale μ.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::integrate_finite;
use crate::specfun::{bessel_k0, meijer_g_0220, meijer_g_0330};

/// Where the RIS sits in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// V2V link, the source vehicle transmits through a RIS access point.
    /// RIS→receiver legs are double-Rayleigh.
    AccessPoint,
    /// VANET link through a building-mounted RIS: a Rayleigh source→RIS leg
    /// cascaded with a double-Rayleigh RIS→vehicle leg.
    Relay,
}

impl Model {
    /// Fading order of one RIS cell's end-to-end gain.
    pub fn cell_order(self) -> CascadeOrder {
        match self {
            Model::AccessPoint => CascadeOrder::DoubleRayleigh,
            Model::Relay => CascadeOrder::TripleCascade,
        }
    }
}

/// Legitimate destination or eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    Destination,
    Eavesdropper,
}

/// Physical constants of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Ps, watts
    pub source_power: f64,
    /// N0, watts
    pub noise_psd: f64,
    /// β
    pub pathloss_exponent: f64,
    /// RIS → destination, meters
    pub r_d: f64,
    /// RIS → eavesdropper, meters
    pub r_e: f64,
    /// source → RIS, meters; ignored by [`Model::AccessPoint`]
    pub r_s: f64,
    /// number of RIS cells N
    pub cell_count: u32,
    pub model: Model,
}

impl SystemParams {
    /// Operating point of the numerical study: Ps = 10 W, N0 = 1 W, β = 2.7,
    /// r_D = 4 m, r_E = 8 m, r_s = 10 m, and N = 16 cells.
    pub fn defaults(model: Model) -> Self {
        Self {
            source_power: 10.0,
            noise_psd: 1.0,
            pathloss_exponent: 2.7,
            r_d: 4.0,
            r_e: 8.0,
            r_s: 10.0,
            cell_count: 16,
            model,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        if !(self.source_power >= 0.0 && self.source_power.is_finite()) {
            return Err(Error::Config(format!(
                "source power must be nonnegative and finite, got {}",
                self.source_power
            )));
        }
        positive("noise power", self.noise_psd)?;
        positive("path-loss exponent", self.pathloss_exponent)?;
        positive("r_D", self.r_d)?;
        positive("r_E", self.r_e)?;
        if self.model == Model::Relay {
            positive("r_s", self.r_s)?;
        }
        if self.cell_count == 0 {
            return Err(Error::Config("cell count must be at least 1".into()));
        }
        Ok(())
    }

    pub fn distance(&self, link: Link) -> f64 {
        match link {
            Link::Destination => self.r_d,
            Link::Eavesdropper => self.r_e,
        }
    }

    /// SNR scale μ multiplying the per-cell cascade gain:
    /// Ps·r_i^{-β}/N0 for the access point, Ps·r_s^{-β}·r_i^{-β}/N0 for the relay.
    pub fn snr_scale(&self, link: Link) -> Result<f64> {
        let beta = self.pathloss_exponent;
        let mut gain = path_gain(self.distance(link), beta)?;
        if self.model == Model::Relay {
            gain *= path_gain(self.r_s, beta)?;
        }
        Ok(self.source_power * gain / self.noise_psd)
    }
}

/// Number of cascaded unit Rayleigh amplitudes in one gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CascadeOrder {
    Rayleigh = 1,
    DoubleRayleigh = 2,
    TripleCascade = 3,
}

impl CascadeOrder {
    pub const ALL: [CascadeOrder; 3] = [
        CascadeOrder::Rayleigh,
        CascadeOrder::DoubleRayleigh,
        CascadeOrder::TripleCascade,
    ];

    pub fn k(self) -> u32 {
        self as u32
    }

    /// E[G] = (π/2)^{k/2}.
    pub fn mean(self) -> f64 {
        FRAC_PI_2.powf(0.5 * self.k() as f64)
    }
}

impl TryFrom<u32> for CascadeOrder {
    type Error = Error;

    fn try_from(k: u32) -> Result<Self> {
        match k {
            1 => Ok(CascadeOrder::Rayleigh),
            2 => Ok(CascadeOrder::DoubleRayleigh),
            3 => Ok(CascadeOrder::TripleCascade),
            _ => Err(domain("CascadeOrder", format!("k = {k}, need 1..=3"))),
        }
    }
}

/// r^{-β}.
pub fn path_gain(r: f64, beta: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain("path_gain", format!("distance {r}")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain("path_gain", format!("exponent {beta}")));
    }
    Ok(r.powf(-beta))
}

/// How the cascade densities are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PdfRoute {
    /// Bessel form for k = 2, conditioning on the Rayleigh leg for k = 3.
    #[default]
    Conditional,
    /// The Meijer-G forms G^{2,0}_{0,2}(g²/4) and G^{3,0}_{0,3}(g²/8)/√2.
    MeijerG,
}

fn pdf_rayleigh(g: f64) -> f64 {
    g * (-0.5 * g * g).exp()
}

fn pdf_double(g: f64) -> Result<f64> {
    // K₀ underflows long before g·K₀(g) could overflow
    Ok(g * bessel_k0(g)?)
}

fn pdf_triple_conditional(g: f64) -> Result<f64> {
    // f₃(g) = ∫ f₁(x) f₂(g/x) / x dx, taken in s = ln x where the integrand
    // e^{-x²/2} g K₀(g/x) is bounded. Below ln g − 7 the K₀ factor is under
    // e^{-1000}; above s = 5 the Gaussian factor is.
    if g >= 1e5 {
        // f₃(g) ~ exp(-1.5 g^{2/3}) has long underflowed
        return Ok(0.0);
    }
    integrate_finite(
        |s| {
            let x = s.exp();
            let u = g / x;
            if !u.is_finite() {
                return 0.0;
            }
            (-0.5 * x * x).exp() * g * bessel_k0(u).unwrap_or(0.0)
        },
        g.ln() - 7.0,
        5.0,
        1e-12,
    )
}

/// Density of a k-fold unit-Rayleigh amplitude product.
pub fn pdf_cascade(g: f64, order: CascadeOrder) -> Result<f64> {
    pdf_cascade_with(g, order, PdfRoute::Conditional)
}

pub fn pdf_cascade_with(g: f64, order: CascadeOrder, route: PdfRoute) -> Result<f64> {
    if !(g > 0.0 && g.is_finite()) {
        return Err(domain("pdf_cascade", format!("g = {g}, need finite g > 0")));
    }
    match (order, route) {
        (CascadeOrder::Rayleigh, _) => Ok(pdf_rayleigh(g)),
        (CascadeOrder::DoubleRayleigh, PdfRoute::Conditional) => pdf_double(g),
        (CascadeOrder::DoubleRayleigh, PdfRoute::MeijerG) => meijer_g_0220(0.25 * g * g),
        (CascadeOrder::TripleCascade, PdfRoute::Conditional) => pdf_triple_conditional(g),
        (CascadeOrder::TripleCascade, PdfRoute::MeijerG) => {
            Ok(meijer_g_0330(0.125 * g * g)? / SQRT_2)
        }
    }
}

/// One unit Rayleigh amplitude by inversion, √(-2 ln U) with U ∈ (0, 1].
#[inline]
pub fn sample_rayleigh<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    (-2.0 * u.ln()).sqrt()
}

/// Product of `order.k()` independent unit Rayleigh amplitudes, taken as one
/// square root of the product of the -2 ln U factors.
#[inline]
pub fn sample_cascade<R: Rng + ?Sized>(rng: &mut R, order: CascadeOrder) -> f64 {
    let mut sq = 1.0;
    for _ in 0..order.k() {
        let u = 1.0 - rng.random::<f64>();
        sq *= -2.0 * u.ln();
    }
    sq.sqrt()
}

/// Per-cell gains of one RIS realization. Phases are identically zero: the
/// surface is assumed to co-phase every reflected path perfectly.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSample {
    pub gains: Vec<f64>,
    pub phases: Vec<f64>,
}

impl ChannelSample {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, order: CascadeOrder, cells: usize) -> Self {
        let gains = (0..cells).map(|_| sample_cascade(rng, order)).collect();
        Self {
            gains,
            phases: vec![0.0; cells],
        }
    }

    /// Σ g_n, the quantity that scales the received SNR.
    pub fn total_gain(&self) -> f64 {
        self.gains.iter().sum()
    }
}
