use riscap_core::channel::{Model, SystemParams};
use riscap_core::output::{parse_csv, rows_to_csv};
use riscap_core::sweep::{figure_preset, run_figure, run_sweep, Figure, Row, SweepSpec, Varied};
use riscap_core::{Error, Execution};

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

#[test]
fn secrecy_grows_with_source_power() {
    let spec = SweepSpec::new(
        SystemParams::defaults(Model::AccessPoint),
        Varied::Ps,
        (1..=30).map(f64::from).collect(),
    );
    let out = run_sweep(&spec, Execution::default()).unwrap();
    assert_eq!(out.len(), 30);
    assert!(out.iter().zip(&spec.grid).all(|(r, &g)| r.varied == g));
    let clamped: Vec<f64> = out.iter().map(|r| r.analytic_clamped).collect();
    assert!(strictly_increasing(&clamped));
    assert!(out.iter().all(|r| r.mc_mean.is_none() && r.mc_stderr.is_none()));
}

#[test]
fn relay_secrecy_falls_with_source_distance() {
    let mut base = SystemParams::defaults(Model::Relay);
    base.r_e = 12.0;
    let spec = SweepSpec::new(base, Varied::Rs, (5..=25).map(f64::from).collect());
    let out = run_sweep(&spec, Execution::default()).unwrap();
    let clamped: Vec<f64> = out.iter().map(|r| -r.analytic_clamped).collect();
    assert!(strictly_increasing(&clamped));
}

#[test]
fn empty_grid_is_a_configuration_error() {
    let spec = SweepSpec::new(SystemParams::defaults(Model::Relay), Varied::N, vec![]);
    assert!(matches!(run_sweep(&spec, Execution::default()), Err(Error::Config(_))));
}

#[test]
fn monte_carlo_columns_are_deterministic() {
    let spec = SweepSpec::new(
        SystemParams::defaults(Model::AccessPoint),
        Varied::N,
        vec![1.0, 2.0, 4.0],
    )
    .with_mc(20_000, 3);
    let a = run_sweep(&spec, Execution::Parallel).unwrap();
    let b = run_sweep(&spec, Execution::Sequential).unwrap();
    assert_eq!(a, b);
    for r in &a {
        let (m, s) = (r.mc_mean.unwrap(), r.mc_stderr.unwrap());
        assert!(s > 0.0);
        assert!((m - r.analytic_diff).abs() < 4.0 * s);
    }
}

#[test]
fn figure_rows_round_trip_through_csv() {
    let preset = figure_preset(Figure::Fig4, 2).unwrap();
    let rows = run_figure(&preset, Execution::default()).unwrap();
    assert_eq!(rows.len(), 4 * 30);
    let csv = rows_to_csv(&rows).unwrap();
    assert!(csv.starts_with("series,varied,"));
    let parsed: Vec<Row> = parse_csv(&csv).unwrap();
    assert_eq!(rows_to_csv(&parsed).unwrap(), csv);
    for (a, b) in rows.iter().zip(&parsed) {
        assert_eq!(a.series, b.series);
        assert!((a.record.analytic_diff - b.record.analytic_diff).abs() <= 1e-8 * a.record.analytic_diff.abs());
    }
}
