use std::f64::consts::FRAC_PI_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use riscap_core::capacity::{avg_capacity, avg_secrecy_capacity, QuadratureSpec};
use riscap_core::channel::{Link, Model, SystemParams};
use riscap_core::mgf::mgf_snr;
use riscap_core::montecarlo::{
    estimate_capacity, estimate_mgf, estimate_secrecy, estimate_secrecy_with, estimate_statistics,
    simulate_snr_pair, McConfig, McEstimate,
};
use riscap_core::Execution;

fn within_3_sigma(analytic: f64, mc: &McEstimate) -> bool {
    (analytic - mc.mean).abs() < 3.0 * mc.std_error
}

#[test]
fn snr_pairs_are_reproducible() {
    let p = SystemParams::defaults(Model::Relay);
    let draw = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..50)
            .map(|_| simulate_snr_pair(&p, &mut rng).unwrap())
            .collect::<Vec<_>>()
    };
    let a = draw(11);
    assert_eq!(a, draw(11));
    assert_ne!(a, draw(12));
    assert!(a.iter().all(|&(d, e)| d >= 0.0 && e >= 0.0));
}

#[test]
fn scheduling_does_not_change_estimates() {
    let p = SystemParams::defaults(Model::AccessPoint);
    let cfg = McConfig {
        sample_count: 100_003,
        base_seed: 99,
        chunk_size: 4096,
    };
    let seq = estimate_secrecy_with(&p, &cfg, Execution::Sequential).unwrap();
    let par = estimate_secrecy_with(&p, &cfg, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq.unclamped.sample_count, 100_003);
}

#[test]
fn mean_snr_matches_cascade_means() {
    let cfg = McConfig::new(1_000_000, 5);
    for (model, k, tol) in [(Model::AccessPoint, 2, 0.01), (Model::Relay, 3, 0.015)] {
        let p = SystemParams::defaults(model);
        let [d, e] = estimate_statistics(&p, &cfg, Execution::default(), |d, e| [d, e]).unwrap();
        let cascade_mean = FRAC_PI_2.powf(k as f64 / 2.0) * p.cell_count as f64;
        for (est, link) in [(d, Link::Destination), (e, Link::Eavesdropper)] {
            let want = p.snr_scale(link).unwrap() * cascade_mean;
            assert!(((est.mean - want) / want).abs() < tol, "{model:?} {link:?}");
        }
    }
}

#[test]
fn equal_distances_have_zero_mean_difference() {
    for model in [Model::AccessPoint, Model::Relay] {
        let mut p = SystemParams::defaults(model);
        p.r_e = p.r_d;
        p.cell_count = 4;
        let s = estimate_secrecy(&p, &McConfig::new(200_000, 8)).unwrap();
        assert!(s.unclamped.mean.abs() < 3.0 * s.unclamped.std_error, "{model:?}");
        assert!(s.clamped.mean > 0.0);
    }
}

#[test]
fn clamped_dominates_unclamped() {
    let p = SystemParams::defaults(Model::AccessPoint);
    let s = estimate_secrecy(&p, &McConfig::new(50_000, 1)).unwrap();
    assert!(s.clamped.mean >= s.unclamped.mean.max(0.0) - 3.0 * s.clamped.std_error);
}

#[test]
fn standard_error_scales_as_inverse_root_n() {
    let mut p = SystemParams::defaults(Model::AccessPoint);
    p.cell_count = 4;
    let small = estimate_secrecy(&p, &McConfig::new(50_000, 21)).unwrap();
    let large = estimate_secrecy(&p, &McConfig::new(200_000, 21)).unwrap();
    let ratio = small.unclamped.std_error / large.unclamped.std_error;
    assert!((ratio / 2.0 - 1.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn mgf_at_unit_z_matches_simulation() {
    let p = SystemParams::defaults(Model::AccessPoint);
    let mc = estimate_mgf(&p, Link::Destination, 1.0, &McConfig::new(1_000_000, 2)).unwrap();
    let analytic = mgf_snr(&p, Link::Destination, 1.0).unwrap();
    assert!(within_3_sigma(analytic, &mc), "{analytic} vs {mc:?}");
}

#[test]
fn unit_scale_capacity_matches_simulation() {
    // μ = 1 with a single cell: Ps = N0 and r = 1
    let mut p = SystemParams::defaults(Model::AccessPoint);
    p.cell_count = 1;
    p.r_d = 1.0;
    p.source_power = 1.0;
    let mc = estimate_capacity(&p, Link::Destination, &McConfig::new(1_000_000, 4)).unwrap();
    let analytic = avg_capacity(&p, Link::Destination, &QuadratureSpec::default()).unwrap();
    assert!((analytic - 1.220_279_340_039_575_3).abs() < 1e-7);
    assert!(within_3_sigma(analytic, &mc), "{analytic} vs {mc:?}");
}

#[test]
fn capacities_and_secrecy_match_simulation() {
    let quad = QuadratureSpec::default();
    for model in [Model::AccessPoint, Model::Relay] {
        let mut p = SystemParams::defaults(model);
        p.cell_count = 2;
        let cfg = McConfig::new(400_000, 17);
        let analytic = avg_secrecy_capacity(&p, &quad).unwrap();
        let cd = estimate_capacity(&p, Link::Destination, &cfg).unwrap();
        let ce = estimate_capacity(&p, Link::Eavesdropper, &cfg).unwrap();
        let s = estimate_secrecy(&p, &cfg).unwrap();
        assert!(within_3_sigma(analytic.capacity_d, &cd), "{model:?} C_D");
        assert!(within_3_sigma(analytic.capacity_e, &ce), "{model:?} C_E");
        assert!(within_3_sigma(analytic.secrecy_difference, &s.unclamped), "{model:?}");
    }
}
