mod common;

use pntshort::arith_chars::{build_group, characters};
use pntshort::bound_envelopes::{DensityEstimate, GFamily};
use pntshort::chebyshev_delta::delta;
use pntshort::experiments::{run, ExperimentConfig};
use pntshort::explicit_formula::{lemma_allints_bound, lemma_l2_bound, residual_scan, zero_sum};
use pntshort::lfunc_zeros::{
    condition2_ratio, count_zeros, data_dir, density_sum, find_zeros, load_for_character, vertical_prediction,
};
use pntshort::prime_sieve::{Kernel, Weight};

use common::{hardy_z, sign_change_roots};

#[test]
fn bundled_sets_match_recomputation() {
    let dir = data_dir();
    for q in [3u64, 4, 5] {
        for chi in characters(&build_group(q).unwrap()).into_iter().filter(|c| c.is_primitive()) {
            let bundled = load_for_character(&chi, &dir).unwrap();
            let fresh = find_zeros(&chi, 100.0).unwrap();
            assert_eq!(bundled.zeros().len(), fresh.zeros().len(), "q={q} label={}", chi.label());
            for (a, b) in bundled.zeros().iter().zip(fresh.zeros()) {
                assert!((a.gamma - b.gamma).abs() < 1e-6);
            }
        }
    }
    let zeta = load_for_character(&build_group(1).unwrap().principal(), &dir).unwrap();
    let fresh = find_zeros(&build_group(1).unwrap().principal(), 150.0).unwrap();
    let mut bundled = zeta.by_height(150.0).unwrap();
    bundled.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    assert_eq!(bundled.len(), fresh.zeros().len());
    for (a, b) in bundled.iter().zip(fresh.zeros()) {
        assert!((a.gamma - b.gamma).abs() < 1e-6, "{} vs {}", a.gamma, b.gamma);
    }
}

#[test]
fn bundled_zeta_against_hardy_z() {
    let zeta = load_for_character(&build_group(1).unwrap().principal(), &data_dir()).unwrap();
    let oracle = sign_change_roots(hardy_z, 10.0, 60.0, 1e-3, 1e-11);
    let positive: Vec<f64> = zeta.zeros().iter().map(|z| z.gamma).filter(|&g| g > 0.0).collect();
    assert!((positive[0] - 14.134725).abs() < 1e-6);
    for (a, b) in oracle.iter().zip(&positive) {
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
    assert_eq!(count_zeros(&zeta, 0.0, 100.0).unwrap(), 58);
    assert_eq!(count_zeros(&zeta, 0.0, 500.0).unwrap(), 538);
    assert_eq!(count_zeros(&zeta, 0.6, 1000.0).unwrap(), 0);
    for t in [50.0, 100.0, 200.0, 400.0, 800.0, 1000.0] {
        let n = count_zeros(&zeta, 0.0, t).unwrap() as f64;
        assert!((n - vertical_prediction(1, t).unwrap()).abs() <= 5.0 * f64::ln(t));
    }
}

#[test]
fn explicit_formula_examples() {
    let chi = build_group(1).unwrap().principal();
    let zeta = load_for_character(&chi, &data_dir()).unwrap();
    let (x, y) = (1e6f64, 1e4f64);
    let truth = delta(x, y, &Kernel::Character(&chi), Weight::Psi).unwrap().value;
    let zs = zero_sum(x, y, &zeta, 500.0).unwrap();
    assert!((truth - zs).norm() <= x / 500.0 * x.ln().powi(2));
    assert!(zs.im.abs() < 1e-8 * (1.0 + zs.norm()));

    let scan = residual_scan(x, y, &chi, &zeta, &[10.0, 500.0]).unwrap();
    assert_eq!(scan[0].zero_sum.norm(), 0.0);
    assert_eq!(scan[0].residual, truth);
    let signed = residual_scan(x, -x / 2.0, &chi, &zeta, &[50.0, 800.0]).unwrap();
    assert!(signed.iter().all(|e| e.residual.norm() <= 2.0 * e.envelope));

    let b = lemma_allints_bound(x, y, 1, &zeta, 500.0).unwrap();
    let first = b - x / 500.0 * x.ln().powi(2);
    assert!((first - 1e-2 * 1e3 * 538.0).abs() < 1e-6);

    let (big_x, theta) = (1e4f64, 1e-2f64);
    let direct: f64 = zeta
        .zeros()
        .iter()
        .filter(|z| z.gamma.abs() <= 100.0)
        .map(|z| big_x * big_x * (theta * theta).min(z.gamma.powi(-2)) * (z.gamma.abs() + 2.0).ln())
        .sum();
    let tail = big_x.powi(3) / 1e4 * big_x.ln().powi(4);
    let b = lemma_l2_bound(big_x, theta, 1, &zeta, 100.0).unwrap();
    assert!((b - direct - tail).abs() <= 1e-9 * b);
}

#[test]
fn density_examples() {
    let zeta = load_for_character(&build_group(1).unwrap().principal(), &data_dir()).unwrap();
    let sum = density_sum(std::slice::from_ref(&zeta), 1, 0.0, 100.0).unwrap();
    let est = DensityEstimate::new(2.0, GFamily::LogPower { b: 1.0 }).unwrap();
    let r = condition2_ratio(sum, 1, 0.0, 100.0, &est);
    assert!((r - 58.0 / (1e4 * 100f64.ln())).abs() < 1e-9);

    let sets: Vec<_> =
        characters(&build_group(5).unwrap()).iter().map(|c| load_for_character(c, &data_dir()).unwrap()).collect();
    let total = density_sum(&sets, 5, 0.0, 50.0).unwrap() as f64;
    let avg = vertical_prediction(5, 50.0).unwrap();
    assert!((total - 3.0 * avg - vertical_prediction(1, 50.0).unwrap()).abs() <= 4.0 * 5.0 * 250f64.ln());
    assert_eq!(density_sum(&sets, 5, 0.75, 50.0).unwrap(), 0);
}

#[test]
fn density_fit_flags_exceptional_zero() {
    let base = "[experiment]\nkind = density-fit\n[grid]\nq = 1\nT = 50, 100, 200, 400, 800, 1000\nsigma = 0, 0.6\n";
    let rep = run(&base.parse::<ExperimentConfig>().unwrap()).unwrap();
    assert!(rep.passed(), "{:?}", rep.checks);
    assert!(rep.records.iter().filter(|r| r.params[1] == 0.6).all(|r| r.empirical == 0.0));

    let injected = format!("{base}[zeros]\nexceptional = 0.9\n[envelope]\nprofile = constant:0.2\n");
    let rep = run(&injected.parse::<ExperimentConfig>().unwrap()).unwrap();
    assert!(rep.checks.iter().any(|c| c.name.starts_with("condition 1") && !c.passed));
    let mild = format!("{base}[zeros]\nexceptional = 0.9\n[envelope]\nprofile = constant:0.05\n");
    let rep = run(&mild.parse::<ExperimentConfig>().unwrap()).unwrap();
    assert!(rep.checks.iter().filter(|c| c.name.starts_with("condition 1")).all(|c| c.passed));
}
