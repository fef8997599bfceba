//! One-parameter sweeps pairing the analytic secrecy capacity with optional
//! Monte Carlo estimates, and the built-in figure presets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::capacity::{avg_secrecy_capacity, QuadratureSpec};
use crate::channel::{Model, SystemParams};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::montecarlo::{estimate_secrecy_with, McConfig};

/// The scenario field a sweep steps through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Varied {
    /// source power Ps
    Ps,
    /// RIS → eavesdropper distance r_E
    Re,
    /// source → RIS distance r_s (relay only)
    Rs,
    /// cell count N
    N,
}

impl FromStr for Varied {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ps" => Ok(Varied::Ps),
            "re" => Ok(Varied::Re),
            "rs" => Ok(Varied::Rs),
            "n" => Ok(Varied::N),
            _ => Err(Error::Config(format!(
                "unknown sweep variable {s:?} (expected ps, re, rs or n)"
            ))),
        }
    }
}

impl fmt::Display for Varied {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Varied::Ps => "ps",
            Varied::Re => "re",
            Varied::Rs => "rs",
            Varied::N => "n",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McSpec {
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub vary: Varied,
    pub grid: Vec<f64>,
    pub mc: Option<McSpec>,
    pub quadrature: QuadratureSpec,
}

impl SweepSpec {
    pub fn new(base: SystemParams, vary: Varied, grid: Vec<f64>) -> Self {
        Self {
            base,
            vary,
            grid,
            mc: None,
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn with_mc(mut self, samples: u64, seed: u64) -> Self {
        self.mc = Some(McSpec { samples, seed });
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        self.quadrature.validate()?;
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if self.vary == Varied::Rs && self.base.model != Model::Relay {
            return Err(Error::Config(
                "r_s can only be swept for the relay model".into(),
            ));
        }
        if let Some(w) = self.grid.windows(2).find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::Config(format!(
                "sweep grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        for &v in &self.grid {
            self.params_at(v)?;
        }
        if let Some(mc) = self.mc {
            self.mc_config(mc).validate()?;
        }
        Ok(())
    }

    /// The base scenario with the varied field set to `value`.
    pub fn params_at(&self, value: f64) -> Result<SystemParams> {
        let mut p = self.base;
        match self.vary {
            Varied::Ps => p.source_power = value,
            Varied::Re => p.r_e = value,
            Varied::Rs => p.r_s = value,
            Varied::N => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(Error::Config(format!(
                        "cell count must be a positive integer, got {value}"
                    )));
                }
                p.cell_count = value as u32;
            }
        }
        p.validate()?;
        Ok(p)
    }

    fn mc_config(&self, mc: McSpec) -> McConfig {
        McConfig::new(mc.samples, mc.seed)
    }
}

/// One grid point of a sweep. The MC fields are the signed (unclamped)
/// secrecy estimate and are present iff the sweep requested Monte Carlo.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub varied: f64,
    pub analytic_diff: f64,
    pub analytic_clamped: f64,
    pub mc_mean: Option<f64>,
    pub mc_stderr: Option<f64>,
}

fn evaluate_point(spec: &SweepSpec, value: f64, exec: Execution) -> Result<ResultRecord> {
    let params = spec.params_at(value)?;
    let analytic = avg_secrecy_capacity(&params, &spec.quadrature)?;
    let (mc_mean, mc_stderr) = match spec.mc {
        Some(mc) => {
            let est = estimate_secrecy_with(&params, &spec.mc_config(mc), exec)?;
            (Some(est.unclamped.mean), Some(est.unclamped.std_error))
        }
        None => (None, None),
    };
    Ok(ResultRecord {
        varied: value,
        analytic_diff: analytic.secrecy_difference,
        analytic_clamped: analytic.secrecy_clamped,
        mc_mean,
        mc_stderr,
    })
}

/// Evaluates every grid point. Records come back in grid order; any failing
/// point fails the whole sweep.
pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<Vec<ResultRecord>> {
    spec.validate()?;
    exec.map(spec.grid.len(), |i| evaluate_point(spec, spec.grid[i], exec))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig4,
    Fig5,
    Fig6,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            "fig6" => Ok(Figure::Fig6),
            _ => Err(Error::Config(format!(
                "unknown figure {s:?} (expected fig4, fig5 or fig6)"
            ))),
        }
    }
}

/// A labelled curve of a figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub spec: SweepSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigurePreset {
    pub figure: Figure,
    pub series: Vec<Series>,
}

pub const DEFAULT_FIGURE_CELLS: u32 = 16;

fn integer_grid(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(f64::from).collect()
}

/// Figures 4 and 5 sweep Ps over 1..=30 W for r_E ∈ {8, 12} m and
/// N ∈ {N₀, 2N₀}, on the access point and relay respectively. Figure 6
/// sweeps the relay's r_s over 5..=25 m at r_E = 12 m for Ps ∈ {10, 20} W
/// and N ∈ {N₀, 2N₀}.
pub fn figure_preset(figure: Figure, n0: u32) -> Result<FigurePreset> {
    if n0 == 0 || n0 > u32::MAX / 2 {
        return Err(Error::Config(format!("base cell count {n0} out of range")));
    }
    let cells = [n0, 2 * n0];
    let mut series = Vec::new();
    match figure {
        Figure::Fig4 | Figure::Fig5 => {
            let model = if figure == Figure::Fig4 {
                Model::AccessPoint
            } else {
                Model::Relay
            };
            for r_e in [8.0, 12.0] {
                for n in cells {
                    let mut base = SystemParams::defaults(model);
                    base.r_e = r_e;
                    base.cell_count = n;
                    series.push(Series {
                        label: format!("re={r_e};n={n}"),
                        spec: SweepSpec::new(base, Varied::Ps, integer_grid(1, 30)),
                    });
                }
            }
        }
        Figure::Fig6 => {
            for ps in [10.0, 20.0] {
                for n in cells {
                    let mut base = SystemParams::defaults(Model::Relay);
                    base.r_e = 12.0;
                    base.source_power = ps;
                    base.cell_count = n;
                    series.push(Series {
                        label: format!("ps={ps};n={n}"),
                        spec: SweepSpec::new(base, Varied::Rs, integer_grid(5, 25)),
                    });
                }
            }
        }
    }
    Ok(FigurePreset { figure, series })
}

impl FigurePreset {
    pub fn with_mc(mut self, samples: u64, seed: u64) -> Self {
        for s in &mut self.series {
            s.spec.mc = Some(McSpec { samples, seed });
        }
        self
    }
}

/// A record tagged with the series it belongs to, if any.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub series: Option<String>,
    #[serde(flatten)]
    pub record: ResultRecord,
}

/// Evaluates all series, load-balancing across every (series, point) pair.
pub fn run_figure(preset: &FigurePreset, exec: Execution) -> Result<Vec<Row>> {
    for s in &preset.series {
        s.spec.validate()?;
    }
    let jobs: Vec<(&Series, f64)> = preset
        .series
        .iter()
        .flat_map(|s| s.spec.grid.iter().map(move |&v| (s, v)))
        .collect();
    exec.map(jobs.len(), |i| {
        let (s, v) = jobs[i];
        evaluate_point(&s.spec, v, exec).map(|record| Row {
            series: Some(s.label.clone()),
            record,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("PS".parse::<Varied>().unwrap(), Varied::Ps);
        assert_eq!("fig6".parse::<Figure>().unwrap(), Figure::Fig6);
        assert!("fig7".parse::<Figure>().is_err());
        assert!("rd".parse::<Varied>().is_err());
    }

    #[test]
    fn rejects_bad_grids() {
        let base = SystemParams::defaults(Model::AccessPoint);
        let bad = [
            SweepSpec::new(base, Varied::Ps, vec![]),
            SweepSpec::new(base, Varied::Ps, vec![1.0, 1.0]),
            SweepSpec::new(base, Varied::Ps, vec![2.0, 1.0]),
            SweepSpec::new(base, Varied::Re, vec![-1.0, 1.0]),
            SweepSpec::new(base, Varied::N, vec![1.5]),
            SweepSpec::new(base, Varied::N, vec![0.0, 1.0]),
            SweepSpec::new(base, Varied::Rs, vec![5.0]),
            SweepSpec::new(base, Varied::Ps, vec![1.0]).with_mc(100, 0),
        ];
        for spec in bad {
            assert!(matches!(spec.validate(), Err(Error::Config(_))), "{spec:?}");
        }
    }

    #[test]
    fn presets() {
        let f4 = figure_preset(Figure::Fig4, 16).unwrap();
        assert_eq!(f4.series.len(), 4);
        let b = f4.series[0].spec.base;
        assert_eq!((b.r_d, b.pathloss_exponent, b.model), (4.0, 2.7, Model::AccessPoint));
        assert_eq!(f4.series[3].spec.base.cell_count, 32);
        assert_eq!(f4.series[0].spec.grid.len(), 30);

        let f5 = figure_preset(Figure::Fig5, 16).unwrap();
        assert!(f5.series.iter().all(|s| s.spec.base.model == Model::Relay));
        assert_eq!(f5.series[0].spec.base.r_s, 10.0);

        let f6 = figure_preset(Figure::Fig6, 8).unwrap();
        assert!(f6.series.iter().all(|s| s.spec.base.r_e == 12.0));
        assert_eq!(f6.series[0].spec.grid, integer_grid(5, 25));
        assert_eq!(f6.series[1].spec.base.cell_count, 16);
        assert!(figure_preset(Figure::Fig4, 0).is_err());
    }
}
