//! Complex log-gamma and the Hurwitz zeta function, in double precision.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

/// `B_{2k}/(2k)!` for `k = 1..=MAX_BERNOULLI`.
const MAX_BERNOULLI: usize = 30;

fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}.
        (1..=MAX_BERNOULLI)
            .map(|k| {
                let s = 2 * k as i32;
                let zeta = if k == 1 {
                    PI * PI / 6.0
                } else {
                    let n = 2000.0f64;
                    let head: f64 = (1..2000).rev().map(|m| (m as f64).powi(-s)).sum();
                    head + n.powi(1 - s) / (s - 1) as f64 + 0.5 * n.powi(-s)
                };
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta / TAU.powi(s)
            })
            .collect()
    })
}

/// Stirling coefficients `B_{2k} / (2k(2k−1))`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// `log Γ(z)` on the branch continuous in `z` away from the negative real axis.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re <= 0.0 {
        // Reflection: log Γ(z) = log π − log sin(πz) − log Γ(1−z).
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 20.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * TAU.ln() + series - shift
}

/// `ζ(s, a)` with its Euler–Maclaurin remainder estimate.
#[derive(Clone, Copy, Debug)]
pub struct HurwitzValue {
    pub value: Complex64,
    pub error: f64,
}

pub const TARGET_ERROR: f64 = 1e-10;

/// Euler–Maclaurin summation of `Σ_{k≥0} (k+a)^{-s}` for `0 < a ≤ 1`, `s ≠ 1`.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> HurwitzValue {
    let m = 20usize;
    let mut n = ((s.norm() + 40.0) / PI).ceil() as usize;
    loop {
        let v = hurwitz_em(s, a, n, m);
        if v.error < TARGET_ERROR || n > 1 << 20 {
            return v;
        }
        n *= 2;
    }
}

fn hurwitz_em(s: Complex64, a: f64, n: usize, m: usize) -> HurwitzValue {
    let b = bernoulli_over_factorial();
    let mut head = Complex64::new(0.0, 0.0);
    for k in 0..n {
        head += (-s * (k as f64 + a).ln()).exp();
    }
    let na = n as f64 + a;
    let ln_na = na.ln();
    let pow = (-s * ln_na).exp();
    let mut total = head + pow * na / (s - 1.0) + pow * 0.5;
    // Term j: B_{2j}/(2j)! · s(s+1)…(s+2j−2) · (N+a)^{−s−2j+1}.
    let mut rising = s;
    let mut p = pow / na;
    let inv_na2 = 1.0 / (na * na);
    let mut last = Complex64::new(0.0, 0.0);
    for j in 1..=m {
        last = rising * p * b[j - 1];
        total += last;
        let k = (2 * j) as f64;
        rising *= (s + (k - 1.0)) * (s + k);
        p *= inv_na2;
    }
    let next = rising * p * b[m];
    let factor = (s + (2 * m + 1) as f64).norm() / (s.re + (2 * m + 1) as f64);
    let error = next.norm() * factor + f64::EPSILON * (n as f64) * last.norm().max(pow.norm());
    HurwitzValue { value: total, error }
}
