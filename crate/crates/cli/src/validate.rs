//! Self-check of the analytic pipeline against its independent oracles and
//! against Monte Carlo, printing one line per check.

use std::time::Instant;

use riscap_core::capacity::{avg_capacity, avg_secrecy_capacity, QuadratureSpec};
use riscap_core::channel::{CascadeOrder, Link, Model, SystemParams};
use riscap_core::mgf::{cell_mgf, cell_mgf_numeric, mgf_snr};
use riscap_core::montecarlo::{estimate_capacity, estimate_mgf, estimate_secrecy_with, McConfig, McEstimate};
use riscap_core::sweep::{run_sweep, SweepSpec, Varied};
use riscap_core::{Error, Execution};

use crate::Failure;

pub const DEFAULT_SAMPLES: u64 = 1_000_000;

const MODELS: [Model; 2] = [Model::AccessPoint, Model::Relay];

struct Report {
    failed: usize,
}

impl Report {
    fn check(&mut self, name: &str, body: impl FnOnce() -> Result<(bool, String), Error>) {
        let start = Instant::now();
        let (ok, detail) = match body() {
            Ok(r) => r,
            Err(e) => (false, e.to_string()),
        };
        if !ok {
            self.failed += 1;
        }
        let tag = if ok { "ok  " } else { "FAIL" };
        println!("{tag} {name}: {detail} [{:.1?}]", start.elapsed());
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn agrees(analytic: f64, mc: &McEstimate) -> bool {
    (analytic - mc.mean).abs() < 3.0 * mc.std_error
}

fn sigmas(analytic: f64, mc: &McEstimate) -> f64 {
    (analytic - mc.mean).abs() / mc.std_error
}

fn with_cells(model: Model, n: u32) -> SystemParams {
    SystemParams {
        cell_count: n,
        ..SystemParams::defaults(model)
    }
}

/// Runs every check and returns how many failed.
pub fn run(samples: u64, seed: u64, exec: Execution) -> Result<usize, Failure> {
    let cfg = McConfig::new(samples, seed);
    cfg.validate()?;
    let quad = QuadratureSpec::default();
    let mut r = Report { failed: 0 };

    r.check("MGF normalization", || {
        let mut worst = 0.0f64;
        for model in MODELS {
            for n in [1, 2, 4, 16, 64] {
                for link in [Link::Destination, Link::Eavesdropper] {
                    worst = worst.max((mgf_snr(&with_cells(model, n), link, 0.0)? - 1.0).abs());
                }
            }
        }
        Ok((worst <= 1e-12, format!("max |M(0) - 1| = {worst:.1e}")))
    });

    r.check("closed-form MGF vs Laplace quadrature", || {
        let mut worst = 0.0f64;
        for order in [CascadeOrder::DoubleRayleigh, CascadeOrder::TripleCascade] {
            for i in 0..30 {
                let x = 1e-3 * 1e6f64.powf(i as f64 / 29.0);
                worst = worst.max(rel(cell_mgf(order, x)?, cell_mgf_numeric(order, x, 1e-10)?));
            }
        }
        Ok((worst < 1e-6, format!("max rel err {worst:.1e}")))
    });

    r.check("Gauss-Laguerre vs adaptive capacity", || {
        let mut worst = 0.0f64;
        for model in MODELS {
            let p = SystemParams::defaults(model);
            let a = avg_secrecy_capacity(&p, &quad)?;
            let b = avg_secrecy_capacity(&p, &QuadratureSpec::adaptive())?;
            for (x, y) in [(a.capacity_d, b.capacity_d), (a.capacity_e, b.capacity_e)] {
                worst = worst.max(rel(x, y));
            }
        }
        Ok((worst < 1e-6, format!("max rel diff {worst:.1e}")))
    });

    r.check("equal distances cancel, swapped distances negate", || {
        let mut ok = true;
        for model in MODELS {
            let mut p = SystemParams::defaults(model);
            let s = avg_secrecy_capacity(&p, &quad)?;
            std::mem::swap(&mut p.r_d, &mut p.r_e);
            let t = avg_secrecy_capacity(&p, &quad)?;
            p.r_e = p.r_d;
            let z = avg_secrecy_capacity(&p, &quad)?;
            ok &= s.secrecy_difference == -t.secrecy_difference;
            ok &= z.secrecy_difference.abs() < 1e-10 && z.secrecy_clamped.abs() < 1e-10;
        }
        Ok((ok, "both models".into()))
    });

    for model in MODELS {
        for n in [1, 2, 4] {
            r.check(&format!("{model:?} N={n} secrecy vs Monte Carlo"), || {
                let p = with_cells(model, n);
                let a = avg_secrecy_capacity(&p, &quad)?;
                let mc = estimate_secrecy_with(&p, &cfg, exec)?;
                let clamp_ok = mc.clamped.mean >= mc.unclamped.mean.max(0.0) - 3.0 * mc.clamped.std_error;
                Ok((
                    agrees(a.secrecy_difference, &mc.unclamped) && clamp_ok,
                    format!(
                        "analytic {:.6} MC {:.6} ± {:.1e} ({:.2}σ)",
                        a.secrecy_difference,
                        mc.unclamped.mean,
                        mc.unclamped.std_error,
                        sigmas(a.secrecy_difference, &mc.unclamped)
                    ),
                ))
            });
        }
    }

    r.check("AccessPoint MGF at z = 1 vs Monte Carlo", || {
        let p = SystemParams::defaults(Model::AccessPoint);
        let a = mgf_snr(&p, Link::Destination, 1.0)?;
        let mc = estimate_mgf(&p, Link::Destination, 1.0, &cfg)?;
        Ok((agrees(a, &mc), format!("{:.2}σ", sigmas(a, &mc))))
    });

    for model in MODELS {
        r.check(&format!("{model:?} capacity vs Monte Carlo"), || {
            let p = SystemParams::defaults(model);
            let a = avg_capacity(&p, Link::Destination, &quad)?;
            let mc = estimate_capacity(&p, Link::Destination, &cfg)?;
            Ok((agrees(a, &mc), format!("{:.2}σ", sigmas(a, &mc))))
        });
    }

    r.check("secrecy grows with Ps, r_E and N", || {
        let mut ok = true;
        for model in MODELS {
            let mut clamped = Vec::new();
            for (r_e, n) in [(8.0, 16), (12.0, 16), (8.0, 32)] {
                let base = SystemParams {
                    r_e,
                    ..with_cells(model, n)
                };
                let spec = SweepSpec::new(base, Varied::Ps, (1..=30).map(f64::from).collect());
                let col: Vec<f64> = run_sweep(&spec, exec)?.iter().map(|x| x.analytic_clamped).collect();
                ok &= col.windows(2).all(|w| w[0] < w[1]);
                clamped.push(col);
            }
            ok &= (0..30).all(|i| clamped[1][i] > clamped[0][i] && clamped[2][i] > clamped[0][i]);
        }
        Ok((ok, "Ps 1..30 W, r_E 8 -> 12 m, N 16 -> 32".into()))
    });

    r.check("relay secrecy below access point, falling with r_s", || {
        let ap = avg_secrecy_capacity(&SystemParams::defaults(Model::AccessPoint), &quad)?;
        let relay = avg_secrecy_capacity(&SystemParams::defaults(Model::Relay), &quad)?;
        let base = SystemParams {
            r_e: 12.0,
            ..SystemParams::defaults(Model::Relay)
        };
        let spec = SweepSpec::new(base, Varied::Rs, (5..=25).map(f64::from).collect());
        let col: Vec<f64> = run_sweep(&spec, exec)?.iter().map(|x| x.analytic_clamped).collect();
        let ok = relay.secrecy_clamped < ap.secrecy_clamped && col.windows(2).all(|w| w[0] > w[1]);
        Ok((
            ok,
            format!("relay {:.4} vs AP {:.4}", relay.secrecy_clamped, ap.secrecy_clamped),
        ))
    });

    Ok(r.failed)
}
