//! Exact `∫ |Δ(u, w(u))|² du` for step-function sums.
//!
//! `Δ(u) = s·Σ_{n ∈ I(u)} c_n − m·w(u)` where `I(u)` is the oriented window
//! and `w(u)` is `h` or `θu`. The sum is constant between the points where `u`
//! or the far end of the window crosses some `n`, so the integrand is a
//! quadratic polynomial in `u` on each such segment.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::summation::{ComplexNeumaier, Neumaier};

/// Length of the window `I(u)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Window<S> {
    /// `(u, u+h]`, or `(u+h, u]` for `h < 0`.
    Fixed(S),
    /// `(u, u+θu]` with `0 < θ ≤ 1`.
    Proportional(S),
}

impl<S: Real> Window<S> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Window::Fixed(h) if !(h != S::zero() && h.is_finite()) => {
                Err(Error::InvalidArgument(format!("window length h={h} must be finite and nonzero")))
            }
            Window::Proportional(t) if !(t > S::zero() && t <= S::one()) => {
                Err(Error::InvalidArgument(format!("θ={t} must lie in (0, 1]")))
            }
            _ => Ok(()),
        }
    }

    /// `w(u)`.
    pub fn length(&self, u: S) -> S {
        match *self {
            Window::Fixed(h) => h,
            Window::Proportional(t) => t * u,
        }
    }

    /// `[u_in, u_out)`: the `u` for which `n ∈ I(u)`.
    pub fn support(&self, n: S) -> (S, S) {
        match *self {
            Window::Fixed(h) if h > S::zero() => (n - h, n),
            Window::Fixed(h) => (n, n - h),
            Window::Proportional(t) => (n / (S::one() + t), n),
        }
    }

    /// Range of `n` that meets some `I(u)` with `u ∈ [lo, hi]`, as `(a, b]`.
    pub fn reach(&self, lo: S, hi: S) -> (S, S) {
        match *self {
            Window::Fixed(h) if h > S::zero() => (lo, hi + h),
            Window::Fixed(h) => (lo + h, hi),
            Window::Proportional(t) => (lo, hi * (S::one() + t)),
        }
    }

    fn sign(&self) -> S {
        match *self {
            Window::Fixed(h) if h < S::zero() => -S::one(),
            _ => S::one(),
        }
    }

    /// `w(u) = α + βu`.
    fn affine(&self) -> (S, S) {
        match *self {
            Window::Fixed(h) => (h, S::zero()),
            Window::Proportional(t) => (S::zero(), t),
        }
    }
}

/// Default ceiling on the number of jump events held at once.
pub const DEFAULT_EVENT_BUDGET: usize = 1 << 27;

/// `∫_lo^hi |s·Σ_{n∈I(u)} c_n − m·w(u)|² du` by event sweep.
///
/// `points` must be sorted by position.
pub fn sweep_integral<S: Real>(
    points: &[(S, Complex<S>)],
    main_density: S,
    window: Window<S>,
    lo: S,
    hi: S,
    budget: usize,
) -> Result<S> {
    window.validate()?;
    if !(hi >= lo) {
        return Err(Error::InvalidArgument(format!("empty integration range [{lo}, {hi}]")));
    }
    let events_needed = 2 * points.len();
    if events_needed > budget {
        return Err(Error::TooManyEvents { events: events_needed, budget });
    }
    let mut current = ComplexNeumaier::new();
    let mut events: Vec<(S, Complex<S>)> = Vec::with_capacity(events_needed);
    for &(n, c) in points {
        let (enter, leave) = window.support(n);
        if leave <= lo || enter >= hi {
            continue;
        }
        if enter <= lo {
            current.add(c);
        } else {
            events.push((enter, c));
        }
        if leave < hi {
            events.push((leave, -c));
        }
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite event positions"));

    let sign = window.sign();
    let (alpha, beta) = window.affine();
    let (alpha, beta) = (main_density * alpha, main_density * beta);
    let two = S::of(2.0);
    let three = S::of(3.0);
    let mut acc = Neumaier::new();
    let mut u0 = lo;
    let mut segment = |u0: S, u1: S, s: Complex<S>| {
        let du = u1 - u0;
        if du <= S::zero() {
            return;
        }
        let s = s * sign;
        let sq = u1 * u1 - u0 * u0;
        let cube = (u1 * u1 + u1 * u0 + u0 * u0) * du;
        let cross = alpha * du + beta * sq / two;
        let main_sq = alpha * alpha * du + alpha * beta * sq + beta * beta * cube / three;
        acc.add(s.norm_sqr() * du - two * s.re * cross + main_sq);
    };
    let mut i = 0;
    while i < events.len() {
        let u1 = events[i].0;
        segment(u0, u1, current.value());
        while i < events.len() && events[i].0 == u1 {
            current.add(events[i].1);
            i += 1;
        }
        u0 = u1;
    }
    segment(u0, hi, current.value());
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_term_only() {
        let v = sweep_integral::<f64>(&[], 0.25, Window::Fixed(10.0), 100.0, 200.0, 10).unwrap();
        assert!((v - 100.0 * (2.5f64).powi(2)).abs() < 1e-12);
        // ∫_1^2 (m θ u)² du = m²θ² · 7/3.
        let v = sweep_integral::<f64>(&[], 1.0, Window::Proportional(0.5), 1.0, 2.0, 10).unwrap();
        assert!((v - 0.25 * 7.0 / 3.0).abs() < 1e-14);
        let v = sweep_integral::<f64>(&[], 0.0, Window::Fixed(3.0), 0.0, 50.0, 10).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn single_point() {
        // n = 10 lies in (u, u+4] for u ∈ [6, 10).
        let pts = [(10.0f64, Complex::new(2.0, 0.0))];
        let v = sweep_integral(&pts, 0.0, Window::Fixed(4.0), 0.0, 20.0, 10).unwrap();
        assert!((v - 16.0).abs() < 1e-12);
        let v = sweep_integral(&pts, 0.0, Window::Fixed(4.0), 8.0, 20.0, 10).unwrap();
        assert!((v - 8.0).abs() < 1e-12);
        // For h < 0 the window is (u−4, u], so u ∈ [10, 14), and the sign flips.
        let v = sweep_integral(&pts, 1.0, Window::Fixed(-4.0), 0.0, 20.0, 10).unwrap();
        let expected = 4.0 * (-2.0f64 + 4.0).powi(2) + 16.0 * 16.0;
        assert!((v - expected).abs() < 1e-12);
        assert!(matches!(
            sweep_integral(&pts, 1.0, Window::Fixed(1.0), 0.0, 1.0, 1),
            Err(Error::TooManyEvents { .. })
        ));
    }
}
