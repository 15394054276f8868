//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

/// `ζ(s)` through Borwein's alternating-series algorithm for `η(s)`.
pub fn zeta_borwein(s: Complex64, n: usize) -> Complex64 {
    // d_k = n Σ_{i ≤ k} (n+i−1)! 4^i / ((n−i)! (2i)!)
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0 / nf;
    let mut acc = 0.0;
    for i in 0..=n {
        if i > 0 {
            let fi = i as f64;
            term *= (nf + fi - 1.0) * (nf - fi + 1.0) * 4.0 / ((2.0 * fi - 1.0) * (2.0 * fi));
        }
        acc += term;
        d.push(nf * acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * (d[k] - dn);
        sum += w * (-s * ((k + 1) as f64).ln()).exp();
    }
    let eta = -sum / dn;
    eta / (Complex64::new(1.0, 0.0) - (Complex64::new(1.0 - s.re, -s.im) * 2f64.ln()).exp())
}

/// Riemann–Siegel theta from its asymptotic series.
pub fn rs_theta(t: f64) -> f64 {
    let pi = std::f64::consts::PI;
    t / 2.0 * (t / (2.0 * pi)).ln() - t / 2.0 - pi / 8.0 + 1.0 / (48.0 * t) + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// Hardy's `Z(t) = e^{iθ(t)} ζ(1/2 + it)`.
pub fn hardy_z(t: f64) -> f64 {
    let z = zeta_borwein(Complex64::new(0.5, t), 90);
    (Complex64::from_polar(1.0, rs_theta(t)) * z).re
}

/// Sign changes of `f` on a uniform grid over `[a, b]`, refined by bisection.
pub fn sign_change_roots<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, step: f64, tol: f64) -> Vec<f64> {
    let n = ((b - a) / step).ceil() as usize;
    let mut roots = Vec::new();
    let mut t0 = a;
    let mut f0 = f(t0);
    for i in 1..=n {
        let t1 = (a + i as f64 * step).min(b);
        let f1 = f(t1);
        if f0 == 0.0 {
            roots.push(t0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (t0, t1, f0);
            while hi - lo > tol {
                let m = 0.5 * (lo + hi);
                let fm = f(m);
                if fm * flo <= 0.0 {
                    hi = m;
                } else {
                    lo = m;
                    flo = fm;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        t0 = t1;
        f0 = f1;
    }
    roots
}

/// Trial-division-free sieve of Eratosthenes returning `Λ(n)` (ψ) or `log p` on primes (ϑ) for `n ≤ n_max`.
pub fn lambda_table(n_max: usize, psi: bool) -> Vec<f64> {
    let mut composite = vec![false; n_max + 1];
    let mut lam = vec![0.0; n_max + 1];
    for p in 2..=n_max {
        if composite[p] {
            continue;
        }
        let mut m = p * p;
        while m <= n_max {
            composite[m] = true;
            m += p;
        }
        let lp = (p as f64).ln();
        lam[p] = lp;
        if psi {
            let mut pk = p.saturating_mul(p);
            while pk <= n_max {
                lam[pk] = lp;
                pk = pk.saturating_mul(p);
            }
        }
    }
    lam
}

/// Prefix sums `P[n] = Σ_{m ≤ n} c(m)`.
pub fn prefix(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out = Vec::new();
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let y = v - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        out.push(acc);
    }
    out
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
