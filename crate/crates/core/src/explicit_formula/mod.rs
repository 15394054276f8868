//! Truncated explicit formula for `Δ_ψ(x, y, χ)`, the zero-sum bounds built
//! on it, and exact square integrals of the error terms.

mod sweep;

use num_complex::Complex;
use rayon::prelude::*;

pub use sweep::{sweep_integral, Window, DEFAULT_EVENT_BUDGET};

use crate::arith_chars::DirichletCharacter;
use crate::chebyshev_delta::{delta, main_density};
use crate::error::{Error, Result};
use crate::lfunc_zeros::ZeroSet;
use crate::prime_sieve::{real_interval_bounds, twisted_sum_points, Kernel, LambdaPoint, Sieve, Weight};
use crate::scalar::{expm1_complex, Real};
use crate::summation::{ComplexNeumaier, Neumaier};

fn check_xy<S: Real>(x: S, y: S) -> Result<()> {
    if !(x > S::zero() && y > -x && x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("need x > 0 and x + y > 0, got x={x}, y={y}")));
    }
    Ok(())
}

/// `−Σ_{|γ|≤T} ((x+y)^ρ − x^ρ)/ρ`, summed by increasing `|γ|`.
pub fn zero_sum<S: Real>(x: S, y: S, zeros: &ZeroSet, t: S) -> Result<Complex<S>> {
    check_xy(x, y)?;
    let log_x = x.ln();
    let log_ratio = (y / x).ln_1p();
    let mut acc = ComplexNeumaier::new();
    for z in zeros.by_height(t.to_f64_lossy())? {
        let rho = Complex::new(S::of(z.beta), S::of(z.gamma));
        let x_rho = (rho * log_x).exp();
        acc.sub(x_rho * expm1_complex(rho * log_ratio) / rho);
    }
    Ok(acc.value())
}

/// One evaluation of the truncated explicit formula against the sieve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormulaEvaluation<S> {
    pub x: S,
    pub y: S,
    pub q: u64,
    pub label: u64,
    pub t: S,
    pub zero_sum: Complex<S>,
    /// Sieved `Δ_ψ(x, y, χ)`.
    pub truth: Complex<S>,
    /// `truth − zero_sum`.
    pub residual: Complex<S>,
    /// `(x/T) log²(qx)`.
    pub envelope: S,
}

pub fn truncation_envelope<S: Real>(q: u64, x: S, t: S) -> S {
    let l = (S::of_u64(q) * x).ln();
    x / t * l * l
}

/// Explicit-formula residuals at each truncation height in `heights`.
pub fn residual_scan<S: Real>(
    x: S,
    y: S,
    chi: &DirichletCharacter,
    zeros: &ZeroSet,
    heights: &[S],
) -> Result<Vec<FormulaEvaluation<S>>> {
    check_xy(x, y)?;
    let truth = delta(x, y, &Kernel::Character(chi), Weight::Psi)?.value;
    heights
        .iter()
        .map(|&t| {
            let zs = zero_sum(x, y, zeros, t)?;
            Ok(FormulaEvaluation {
                x,
                y,
                q: chi.modulus(),
                label: chi.label(),
                t,
                zero_sum: zs,
                truth,
                residual: truth - zs,
                envelope: truncation_envelope(chi.modulus(), x, t),
            })
        })
        .collect()
}

/// `(|y|/x) Σ_{|γ|≤T} x^β + (x/T) log²(qx)`.
pub fn lemma_allints_bound<S: Real>(x: S, y: S, q: u64, zeros: &ZeroSet, t: S) -> Result<S> {
    check_xy(x, y)?;
    let log_x = x.ln();
    let s: S = zeros
        .by_height(t.to_f64_lossy())?
        .iter()
        .map(|z| (S::of(z.beta) * log_x).exp())
        .collect::<Neumaier<S>>()
        .value();
    Ok(y.abs() / x * s + truncation_envelope(q, x, t))
}

/// `Σ_{|γ|≤T} X^{1+2β} min(θ², γ⁻²) log(q(|γ|+2)) + (X³/T²) log⁴(qX)`.
pub fn lemma_l2_bound<S: Real>(x: S, theta: S, q: u64, zeros: &ZeroSet, t: S) -> Result<S> {
    if !(theta > S::zero() && theta <= S::one()) {
        return Err(Error::InvalidArgument(format!("θ={theta} must lie in (0, 1]")));
    }
    if !(t >= S::of(4.0) && t <= x) {
        return Err(Error::InvalidArgument(format!("need 4 ≤ T ≤ X, got T={t}, X={x}")));
    }
    let log_x = x.ln();
    let qf = S::of_u64(q);
    let s: S = zeros
        .by_height(t.to_f64_lossy())?
        .iter()
        .map(|z| {
            let g = S::of(z.gamma).abs();
            let w = if g == S::zero() { theta * theta } else { (theta * theta).min(S::one() / (g * g)) };
            ((S::one() + S::of(2.0) * S::of(z.beta)) * log_x).exp() * w * (qf * (g + S::of(2.0))).ln()
        })
        .collect::<Neumaier<S>>()
        .value();
    let l = (qf * x).ln();
    Ok(s + x * x * x / (t * t) * l.powi(4))
}

/// `(n, w(n)k(n))` for the points where the kernel does not vanish.
pub fn weighted_points<S: Real>(points: &[LambdaPoint], kernel: &Kernel<'_>) -> Vec<(S, Complex<S>)> {
    points
        .par_iter()
        .filter_map(|p| {
            let c: Complex<S> = twisted_sum_points(std::slice::from_ref(p), kernel);
            (c.re != S::zero() || c.im != S::zero()).then(|| (S::of_u64(p.n), c))
        })
        .collect()
}

/// Sieved prime powers that can meet a window over `[lo, hi]`.
pub fn window_points<S: Real>(
    sieve: &Sieve,
    weight: Weight,
    window: Window<S>,
    lo: S,
    hi: S,
) -> Result<Vec<LambdaPoint>> {
    let (a, b) = window.reach(lo, hi);
    let a = a.max(S::zero());
    let (nlo, nhi) = real_interval_bounds(a, b - a)?;
    sieve.segment(nlo, nhi, weight == Weight::Psi)?.points(weight)
}

/// `∫_lo^hi |Δ_κ(u, w(u), k)|² du`.
pub fn l2_integral_range<S: Real>(
    lo: S,
    hi: S,
    window: Window<S>,
    kernel: &Kernel<'_>,
    weight: Weight,
) -> Result<S> {
    window.validate()?;
    kernel.validate()?;
    let pts = weighted_points(&window_points(&Sieve::default(), weight, window, lo, hi)?, kernel);
    sweep_integral(&pts, main_density(kernel), window, lo, hi, DEFAULT_EVENT_BUDGET)
}

/// `∫_X^{2X} |Δ_κ(u, w(u), k)|² du`.
pub fn l2_integral_exact<S: Real>(x: S, window: Window<S>, kernel: &Kernel<'_>, weight: Weight) -> Result<S> {
    if let Window::Fixed(h) = window {
        if !(h.abs() <= x) {
            return Err(Error::InvalidArgument(format!("need 0 < |h| ≤ X, got h={h}, X={x}")));
        }
    }
    l2_integral_range(x, x + x, window, kernel, weight)
}
