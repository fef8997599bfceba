//! Monte Carlo estimates of the SNR statistics, used to validate the closed
//! forms.
//!
//! Work is split into fixed-size chunks. Chunk `i` draws from a ChaCha8
//! stream seeded with `base_seed` and stream id `i`, and chunk summaries are
//! merged in index order, so estimates are bit-identical however the chunks
//! are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{sample_cascade, CascadeOrder, Link, SystemParams};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Smallest sample count accepted for a reported estimate.
pub const MIN_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub sample_count: u64,
    pub base_seed: u64,
    pub chunk_size: u64,
}

impl McConfig {
    pub const DEFAULT_CHUNK: u64 = 1 << 14;

    pub fn new(sample_count: u64, base_seed: u64) -> Self {
        Self {
            sample_count,
            base_seed,
            chunk_size: Self::DEFAULT_CHUNK,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_count < MIN_SAMPLES {
            return Err(Error::Config(format!(
                "Monte Carlo needs at least {MIN_SAMPLES} samples, got {}",
                self.sample_count
            )));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk size must be positive".into()));
        }
        Ok(())
    }

    fn chunk_count(&self) -> u64 {
        self.sample_count.div_ceil(self.chunk_size)
    }

    fn chunk_len(&self, index: u64) -> u64 {
        let start = index * self.chunk_size;
        self.chunk_size.min(self.sample_count - start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over √sample_count.
    pub std_error: f64,
    pub sample_count: u64,
}

/// Running mean and sum of squared deviations (Welford), mergeable with
/// Chan's pairwise update.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let wb = other.n as f64 / n as f64;
        self.mean += d * wb;
        self.m2 += other.m2 + d * d * self.n as f64 * wb;
        self.n = n;
    }

    fn estimate(&self) -> McEstimate {
        let var = if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            std_error: (var.max(0.0) / self.n as f64).sqrt(),
            sample_count: self.n,
        }
    }
}

/// Precomputed per-scenario constants for drawing SNR pairs.
#[derive(Debug, Clone, Copy)]
struct SnrSampler {
    order: CascadeOrder,
    cells: u32,
    mu_d: f64,
    mu_e: f64,
}

impl SnrSampler {
    fn new(params: &SystemParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            order: params.model.cell_order(),
            cells: params.cell_count,
            mu_d: params.snr_scale(Link::Destination)?,
            mu_e: params.snr_scale(Link::Eavesdropper)?,
        })
    }

    #[inline]
    fn link<R: Rng + ?Sized>(&self, rng: &mut R, mu: f64) -> f64 {
        let mut sum = 0.0;
        for _ in 0..self.cells {
            sum += sample_cascade(rng, self.order);
        }
        mu * sum
    }

    #[inline]
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let d = self.link(rng, self.mu_d);
        let e = self.link(rng, self.mu_e);
        (d, e)
    }
}

/// One realization of (γ_D, γ_E). Each link sums N independent per-cell
/// cascades: double Rayleigh for the access point, and a Rayleigh source leg
/// times a double-Rayleigh vehicle leg for the relay. The links are drawn
/// independently of each other.
pub fn simulate_snr_pair<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> Result<(f64, f64)> {
    Ok(SnrSampler::new(params)?.draw(rng))
}

fn chunk_rng(cfg: &McConfig, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.base_seed);
    rng.set_stream(index);
    rng
}

/// Estimates `K` statistics of (γ_D, γ_E) at once from the same draws.
pub fn estimate_statistics<const K: usize, F>(
    params: &SystemParams,
    cfg: &McConfig,
    exec: Execution,
    stat: F,
) -> Result<[McEstimate; K]>
where
    F: Fn(f64, f64) -> [f64; K] + Sync + Send,
{
    cfg.validate()?;
    let sampler = SnrSampler::new(params)?;
    let chunks = usize::try_from(cfg.chunk_count())
        .map_err(|_| Error::Config("too many Monte Carlo chunks".into()))?;
    let parts = exec.map(chunks, |i| {
        let i = i as u64;
        let mut rng = chunk_rng(cfg, i);
        let mut acc = [Moments::default(); K];
        for _ in 0..cfg.chunk_len(i) {
            let (d, e) = sampler.draw(&mut rng);
            for (a, x) in acc.iter_mut().zip(stat(d, e)) {
                a.push(x);
            }
        }
        acc
    });
    let mut total = [Moments::default(); K];
    for part in &parts {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    Ok(total.map(|m| m.estimate()))
}

/// Clamped and signed secrecy capacity, in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyEstimate {
    pub clamped: McEstimate,
    pub unclamped: McEstimate,
}

pub fn estimate_secrecy(params: &SystemParams, cfg: &McConfig) -> Result<SecrecyEstimate> {
    estimate_secrecy_with(params, cfg, Execution::default())
}

pub fn estimate_secrecy_with(
    params: &SystemParams,
    cfg: &McConfig,
    exec: Execution,
) -> Result<SecrecyEstimate> {
    let [clamped, unclamped] = estimate_statistics(params, cfg, exec, |d, e| {
        let diff = bits(d) - bits(e);
        [diff.max(0.0), diff]
    })?;
    Ok(SecrecyEstimate { clamped, unclamped })
}

/// E[log₂(1 + γ)] on one link.
pub fn estimate_capacity(params: &SystemParams, link: Link, cfg: &McConfig) -> Result<McEstimate> {
    let [c] = estimate_statistics(params, cfg, Execution::default(), move |d, e| {
        [bits(pick(link, d, e))]
    })?;
    Ok(c)
}

/// E[exp(−zγ)] on one link.
pub fn estimate_mgf(params: &SystemParams, link: Link, z: f64, cfg: &McConfig) -> Result<McEstimate> {
    if !(z >= 0.0 && z.is_finite()) {
        return Err(crate::error::domain("estimate_mgf", format!("z = {z}")));
    }
    let [m] = estimate_statistics(params, cfg, Execution::default(), move |d, e| {
        [(-z * pick(link, d, e)).exp()]
    })?;
    Ok(m)
}

#[inline]
fn pick(link: Link, d: f64, e: f64) -> f64 {
    match link {
        Link::Destination => d,
        Link::Eavesdropper => e,
    }
}

/// log₂(1 + γ).
#[inline]
fn bits(snr: f64) -> f64 {
    snr.ln_1p() * std::f64::consts::LOG2_E
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Model;

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.3).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert_eq!(a.n, whole.n);
        assert!((a.mean - whole.mean).abs() < 1e-12);
        assert!((a.m2 - whole.m2).abs() < 1e-8 * whole.m2);
    }

    #[test]
    fn chunking_covers_all_samples() {
        let cfg = McConfig {
            sample_count: 50_001,
            base_seed: 1,
            chunk_size: 10_000,
        };
        assert_eq!(cfg.chunk_count(), 6);
        let total: u64 = (0..6).map(|i| cfg.chunk_len(i)).sum();
        assert_eq!(total, 50_001);
    }

    #[test]
    fn small_sample_counts_are_rejected() {
        let p = SystemParams::defaults(Model::AccessPoint);
        assert!(matches!(
            estimate_secrecy(&p, &McConfig::new(999, 0)),
            Err(Error::Config(_))
        ));
        let mut cfg = McConfig::new(20_000, 0);
        cfg.chunk_size = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn silent_source_gives_zero() {
        let mut p = SystemParams::defaults(Model::Relay);
        p.source_power = 0.0;
        let s = estimate_secrecy(&p, &McConfig::new(10_000, 3)).unwrap();
        assert_eq!(s.clamped.mean, 0.0);
        assert_eq!(s.unclamped.mean, 0.0);
        assert_eq!(s.unclamped.std_error, 0.0);
    }
}
