mod common;

use num_complex::Complex64;
use proptest::prelude::*;

use pntshort::arith_chars::{build_group, characters, euler_phi, gcd};
use pntshort::bound_envelopes::EtaProfile;
use pntshort::chebyshev_delta::{delta, Interval};
use pntshort::explicit_formula::{l2_integral_exact, Window};
use pntshort::lfunc_zeros::{count_zeros, Zero, ZeroSet, ZeroSource};
use pntshort::prime_sieve::{lambda_points, primes_in, twisted_sum, Kernel, Weight};

use common::{lambda_table, prefix, rel};

fn trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sieve_windows_match_trial_division(lo in 0u64..9_999_000) {
        let seg = primes_in(lo, 1000).unwrap();
        let expected: Vec<u64> = (lo + 1..=lo + 1000).filter(|&n| trial_division(n)).collect();
        prop_assert_eq!(seg.primes(), &expected[..]);
    }

    #[test]
    fn multiplicativity(q in 1u64..60, m in 0i64..10_000, n in 0i64..10_000, pick in 0usize..1000) {
        let chars = characters(&build_group(q).unwrap());
        let chi = &chars[pick % chars.len()];
        let lhs: Complex64 = chi.eval(m * n);
        let rhs: Complex64 = chi.eval::<f64>(m) * chi.eval::<f64>(n);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn concatenation(x in 0u64..1_000_000, y1 in 1i64..5000, y2 in 1i64..5000, psi in any::<bool>()) {
        let w = if psi { Weight::Psi } else { Weight::Theta };
        let a = lambda_points(x, y1).unwrap().points(w).unwrap();
        let b = lambda_points(x + y1 as u64, y2).unwrap().points(w).unwrap();
        let ab = lambda_points(x, y1 + y2).unwrap().points(w).unwrap();
        let joined: Vec<u64> = a.iter().chain(&b).map(|p| p.n).collect();
        prop_assert_eq!(joined, ab.iter().map(|p| p.n).collect::<Vec<_>>());
        let k = Kernel::Residue { a: 1, q: 1 };
        let s = |x: u64, y: i64| twisted_sum::<f64>(&lambda_points(x, y).unwrap(), &k, w).unwrap().re;
        let (sa, sb, sab) = (s(x, y1), s(x + y1 as u64, y2), s(x, y1 + y2));
        prop_assert!((sa + sb - sab).abs() <= 1e-12 * sab.max(1.0));
    }

    #[test]
    fn conjugation_and_orientation(q in 1u64..40, x in 100.0f64..1e5, y in 1.0f64..1e4, pick in 0usize..1000) {
        let chars = characters(&build_group(q).unwrap());
        let chi = &chars[pick % chars.len()];
        let conj = chi.conj();
        let d = delta(x, y, &Kernel::Character(chi), Weight::Psi).unwrap().value;
        let dc = delta(x, y, &Kernel::Character(&conj), Weight::Psi).unwrap().value;
        prop_assert_eq!(dc, d.conj());
        prop_assume!(x - y > 0.0);
        let neg = delta(x, -y, &Kernel::Character(chi), Weight::Theta).unwrap().value;
        let pos = delta(x - y, y, &Kernel::Character(chi), Weight::Theta).unwrap().value;
        prop_assert_eq!(neg, -pos);
    }

    #[test]
    fn count_matches_filter(gammas in prop::collection::vec(0.5f64..100.0, 0..40), sigma in 0.0f64..1.0, t in 0.0f64..100.0, betas in prop::collection::vec(0.01f64..0.99, 40)) {
        let mut gs = gammas.clone();
        gs.sort_by(f64::total_cmp);
        gs.dedup();
        let zeros: Vec<Zero> = gs.iter().zip(&betas).map(|(&gamma, &beta)| Zero { beta, gamma }).collect();
        let set = ZeroSet::new(7, 2, zeros.clone(), 100.0, ZeroSource::Computed, false).unwrap();
        let brute = zeros.iter().filter(|z| z.beta > sigma && z.gamma.abs() <= t).count();
        prop_assert_eq!(count_zeros(&set, sigma, t).unwrap(), brute);
        prop_assert!(count_zeros(&set, (sigma + 0.1).min(0.999), t).unwrap() <= brute);
    }

    #[test]
    fn sweep_matches_midpoint_rule(x in 50usize..3000, h in 1usize..200, q in 1u64..13, a_pick in 0u64..13, psi in any::<bool>()) {
        prop_assume!(h <= x);
        let Some(a) = (0..q).cycle().skip(a_pick as usize).take(q as usize).find(|&a| gcd(a, q) == 1) else {
            return Ok(());
        };
        let table = lambda_table(2 * x + h + 2, psi);
        let c: Vec<f64> = table.iter().enumerate().map(|(n, &v)| if n as u64 % q == a % q { v } else { 0.0 }).collect();
        let p = prefix(c.iter().copied());
        let m = 1.0 / euler_phi(q) as f64;
        let oracle: f64 = (x..2 * x).map(|n| (p[n + h] - p[n] - m * h as f64).powi(2)).sum();
        let w = if psi { Weight::Psi } else { Weight::Theta };
        let got = l2_integral_exact(x as f64, Window::Fixed(h as f64), &Kernel::Residue { a, q }, w).unwrap();
        prop_assert!(rel(got, oracle) < 1e-9, "{} vs {}", got, oracle);
    }

    #[test]
    fn omega_grows(c in 0.01f64..0.5, lx in 5.0f64..60.0) {
        for p in [EtaProfile::classical(c).unwrap(), EtaProfile::vinogradov_korobov(c).unwrap()] {
            let a = p.omega_log(lx).unwrap();
            let b = p.omega_log(lx * 1.5).unwrap();
            prop_assert!(a > 0.0 && b >= a * (1.0 - 1e-9));
        }
    }
}

#[test]
fn orthogonality() {
    for q in 1..=50u64 {
        let chars = characters(&build_group(q).unwrap());
        let phi = euler_phi(q) as f64;
        assert_eq!(chars.len() as u64, euler_phi(q));
        let tables: Vec<Vec<Complex64>> = chars.iter().map(|c| c.value_table()).collect();
        for i in 0..tables.len() {
            for j in 0..i {
                assert!(tables[i].iter().zip(&tables[j]).any(|(u, v)| (u - v).norm() > 1e-9));
            }
        }
        for a in (0..q).filter(|&a| gcd(a, q) == 1) {
            for b in (0..q).filter(|&b| gcd(b, q) == 1) {
                let s: Complex64 = chars.iter().map(|c| c.eval_u64::<f64>(b) * c.eval_u64::<f64>(a).conj()).sum();
                let expected = if a == b { phi } else { 0.0 };
                assert!((s - expected).norm() < 1e-9 * phi);
            }
        }
    }
}

#[test]
fn psi_theta_telescoping() {
    let table = lambda_table(1_000_000, true);
    let k = Kernel::Residue { a: 0, q: 1 };
    for n in [10u64, 1000, 65_536, 999_999, 1_000_000] {
        let psi = twisted_sum::<f64>(&lambda_points(0, n as i64).unwrap(), &k, Weight::Psi).unwrap().re;
        let theta = twisted_sum::<f64>(&lambda_points(0, n as i64).unwrap(), &k, Weight::Theta).unwrap().re;
        let oracle: f64 = table[..=n as usize].iter().sum();
        assert!(rel(psi, oracle) < 1e-12);
        let nf = n as f64;
        assert!(psi - theta <= 3.0 * nf.sqrt() * nf.ln());
    }
}

#[test]
fn interval_reuse_matches_fresh_sieve() {
    let iv = Interval::new(5e5, 3e3, Weight::Psi).unwrap();
    for q in [1u64, 4, 7] {
        for chi in characters(&build_group(q).unwrap()) {
            let k = Kernel::Character(&chi);
            assert_eq!(iv.delta(&k, Weight::Psi).unwrap().value, delta(5e5, 3e3, &k, Weight::Psi).unwrap().value);
        }
    }
}
