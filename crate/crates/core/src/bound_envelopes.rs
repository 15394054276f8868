//! Zero-free-region profiles, zero-density estimates and the right-hand sides
//! of the short-interval bounds built from them.
//!
//! Every implied constant is 1. Formulas are assembled in log space and
//! exponentiated once.

use crate::arith_chars::euler_phi;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EtaFamily<S> {
    /// `c / log T`.
    Classical { c: S },
    /// `c (log T)^{-2/3} (log log T)^{-1/3}`.
    VinogradovKorobov { c: S },
    Constant { eta0: S },
    /// `η ≡ 1/2`.
    Grh,
}

/// Width `η(T)` of a zero-free region, capped at 1/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaProfile<S> {
    pub family: EtaFamily<S>,
    pub t0: S,
}

pub const DEFAULT_T0: f64 = 4.0;
pub const VK_DEFAULT_C: f64 = 0.05;
pub const VK_DEFAULT_T0: f64 = 100.0;

impl<S: Real> EtaProfile<S> {
    pub fn new(family: EtaFamily<S>, t0: S) -> Result<Self> {
        let p = Self { family, t0 };
        p.validate()?;
        Ok(p)
    }

    pub fn classical(c: S) -> Result<Self> {
        Self::new(EtaFamily::Classical { c }, S::of(DEFAULT_T0))
    }

    pub fn vinogradov_korobov(c: S) -> Result<Self> {
        Self::new(EtaFamily::VinogradovKorobov { c }, S::of(VK_DEFAULT_T0))
    }

    pub fn constant(eta0: S) -> Result<Self> {
        Self::new(EtaFamily::Constant { eta0 }, S::of(DEFAULT_T0))
    }

    pub fn grh() -> Self {
        Self { family: EtaFamily::Grh, t0: S::of(DEFAULT_T0) }
    }

    pub fn validate(&self) -> Result<()> {
        let half = S::of(0.5);
        let min_t0 = match self.family {
            EtaFamily::Classical { c } | EtaFamily::VinogradovKorobov { c } if !(c > S::zero()) => {
                return Err(Error::InvalidArgument(format!("profile constant c={c} must be positive")));
            }
            EtaFamily::Constant { eta0 } if !(eta0 > S::zero() && eta0 <= half) => {
                return Err(Error::InvalidArgument(format!("eta0={eta0} must lie in (0, 1/2]")));
            }
            EtaFamily::Classical { .. } => S::one(),
            EtaFamily::VinogradovKorobov { .. } => S::E(),
            _ => S::zero(),
        };
        if !(self.t0 > min_t0) || !self.t0.is_finite() {
            return Err(Error::InvalidArgument(format!("T0={} must exceed {min_t0}", self.t0)));
        }
        Ok(())
    }

    /// `lim η(T)` as `T → ∞`.
    pub fn eta0(&self) -> S {
        match self.family {
            EtaFamily::Classical { .. } | EtaFamily::VinogradovKorobov { .. } => S::zero(),
            EtaFamily::Constant { eta0 } => eta0,
            EtaFamily::Grh => S::of(0.5),
        }
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        matches!(self.family, EtaFamily::Classical { .. } | EtaFamily::VinogradovKorobov { .. })
    }

    /// `η` as a function of `L = log T`, with no domain check.
    pub fn eta_at_log(&self, l: S) -> S {
        let half = S::of(0.5);
        match self.family {
            EtaFamily::Classical { c } => (c / l).min(half),
            EtaFamily::VinogradovKorobov { c } => {
                (c * l.powf(S::of(-2.0 / 3.0)) * l.ln().powf(S::of(-1.0 / 3.0))).min(half)
            }
            EtaFamily::Constant { eta0 } => eta0,
            EtaFamily::Grh => half,
        }
    }

    pub fn eta_log(&self, l: S) -> Result<S> {
        if !(l >= self.t0.ln()) {
            return Err(Error::OutOfRange { value: l.exp().to_f64_lossy() });
        }
        Ok(self.eta_at_log(l))
    }

    pub fn eta(&self, t: S) -> Result<S> {
        if !(t >= self.t0) {
            return Err(Error::OutOfRange { value: t.to_f64_lossy() });
        }
        Ok(self.eta_at_log(t.ln()))
    }

    /// `log T` with `η(T) = v`.
    pub fn eta_inv_log(&self, v: S) -> Result<S> {
        let l0 = self.t0.ln();
        let top = self.eta_at_log(l0);
        if !self.is_strictly_decreasing() {
            return if v == top {
                Ok(l0)
            } else {
                Err(Error::OutOfRange { value: v.to_f64_lossy() })
            };
        }
        if !(v > S::zero() && v <= top) {
            return Err(Error::OutOfRange { value: v.to_f64_lossy() });
        }
        let mut lo = l0;
        let mut hi = l0.max(S::one());
        while self.eta_at_log(hi) > v {
            lo = hi;
            hi = hi * S::of(2.0);
            if !hi.is_finite() {
                return Err(Error::OutOfRange { value: v.to_f64_lossy() });
            }
        }
        for _ in 0..200 {
            let mid = (lo + hi) / S::of(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.eta_at_log(mid) > v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }

    /// The `T ≥ T₀` with `η(T) = v`; constant profiles answer `T₀` for `v = η₀`.
    pub fn eta_inv(&self, v: S) -> Result<S> {
        let l = self.eta_inv_log(v)?;
        let t = l.exp();
        if !t.is_finite() {
            return Err(Error::OutOfRange { value: v.to_f64_lossy() });
        }
        Ok(t)
    }

    /// `ω` at `log x`.
    pub fn omega_log(&self, log_x: S) -> Result<S> {
        let l0 = self.t0.ln();
        if !(log_x > l0) {
            return Err(Error::OutOfRange { value: log_x.exp().to_f64_lossy() });
        }
        if !self.is_strictly_decreasing() {
            return Ok(log_x * self.eta0());
        }
        let f = |l: S| log_x * self.eta_at_log(l) + l;
        const GRID: usize = 2048;
        let step = (log_x - l0) / S::of((GRID - 1) as f64);
        let at = |i: usize| if i == GRID - 1 { log_x } else { l0 + step * S::of(i as f64) };
        let mut best = 0;
        let mut best_v = f(l0);
        for i in 1..GRID {
            let v = f(at(i));
            if v < best_v {
                best = i;
                best_v = v;
            }
        }
        let mut a = at(best.saturating_sub(1));
        let mut b = at((best + 1).min(GRID - 1));
        let inv_phi = S::of((5f64.sqrt() - 1.0) / 2.0);
        let mut c = b - (b - a) * inv_phi;
        let mut d = a + (b - a) * inv_phi;
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..200 {
            if b - a <= S::epsilon() * b.abs().max(S::one()) {
                break;
            }
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - (b - a) * inv_phi;
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + (b - a) * inv_phi;
                fd = f(d);
            }
        }
        let mut arg = (a + b) / S::of(2.0);
        if best_v <= f(arg) {
            arg = at(best);
        }
        Ok(log_x * self.eta_at_log(arg))
    }

    /// `ω(x) = log x · η(argmin_{T₀≤T≤x} (log x · η(T) + log T))`.
    pub fn omega(&self, x: S) -> Result<S> {
        self.omega_log(x.ln())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GFamily<S> {
    Constant { c: S },
    /// `log^B(qT)`, floored at 1.
    LogPower { b: S },
    /// `exp(log^{2/3}(qT))`.
    Subexp,
}

/// `Σ_χ N(σ,T,χ) ≪ (qT)^{A(1−σ)} g(q,T)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityEstimate<S> {
    pub a: S,
    pub g: GFamily<S>,
    pub t0: S,
}

impl<S: Real> DensityEstimate<S> {
    pub fn new(a: S, g: GFamily<S>) -> Result<Self> {
        let d = Self { a, g, t0: S::of(DEFAULT_T0) };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a >= S::of(2.0)) || !self.a.is_finite() {
            return Err(Error::InvalidArgument(format!("density exponent A={} must be ≥ 2", self.a)));
        }
        match self.g {
            GFamily::Constant { c } if !(c >= S::one()) => {
                Err(Error::InvalidArgument(format!("g constant {c} must be ≥ 1")))
            }
            GFamily::LogPower { b } if !(b >= S::zero()) => {
                Err(Error::InvalidArgument(format!("g exponent B={b} must be ≥ 0")))
            }
            _ => Ok(()),
        }
    }

    /// `log g(q, T)` given `log(qT)`.
    pub fn log_g_at(&self, log_qt: S) -> S {
        match self.g {
            GFamily::Constant { c } => c.ln(),
            GFamily::LogPower { b } => b * log_qt.max(S::one()).ln(),
            GFamily::Subexp => log_qt.max(S::zero()).powf(S::of(2.0 / 3.0)),
        }
    }

    pub fn g(&self, q: u64, t: S) -> S {
        self.log_g_at(S::of_u64(q).ln() + t.ln()).exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Injected,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExceptionalZero<S> {
    pub q: u64,
    pub beta0: S,
    pub provenance: Provenance,
}

impl<S: Real> ExceptionalZero<S> {
    pub fn injected(q: u64, beta0: S) -> Result<Self> {
        if !(beta0 > S::zero() && beta0 < S::one()) {
            return Err(Error::InvalidArgument(format!("beta0={beta0} must lie in (0, 1)")));
        }
        Ok(Self { q, beta0, provenance: Provenance::Injected })
    }
}

fn log_phi<S: Real>(q: u64) -> S {
    S::of_u64(euler_phi(q)).ln()
}

fn check_q(q: u64) -> Result<()> {
    if q == 0 {
        Err(Error::ZeroModulus)
    } else {
        Ok(())
    }
}

fn check_x<S: Real>(x: S) -> Result<S> {
    if !(x > S::one()) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("x={x} must be a finite number > 1")));
    }
    Ok(x.ln())
}

/// `log B` at `log x`; `None` without an exceptional zero.
fn log_exceptional<S: Real>(log_x: S, q: u64, ez: Option<&ExceptionalZero<S>>) -> Option<S> {
    ez.filter(|e| e.provenance == Provenance::Injected).map(|e| e.beta0 * log_x - log_phi::<S>(q))
}

/// `B(x, q) = x^{β₀}/φ(q)`, or 0.
pub fn exceptional_term<S: Real>(x: S, q: u64, ez: Option<&ExceptionalZero<S>>) -> S {
    log_exceptional(x.ln(), q, ez).map_or(S::zero(), |l| l.exp())
}

/// `1 − c₀/q^{ε₀}`.
pub fn siegel_upper<S: Real>(q: u64, eps0: S, c0: S) -> Result<S> {
    check_q(q)?;
    if !(eps0 > S::zero() && c0 > S::zero()) {
        return Err(Error::InvalidArgument("Siegel parameters must be positive".into()));
    }
    Ok(S::one() - c0 / S::of_u64(q).powf(eps0))
}

/// `τ = 1/(1 + Aη(x^{1/A}))`, requiring `Aη(x^{1/A}) < 1`.
pub fn tau<S: Real>(a: S, profile: &EtaProfile<S>, x: S) -> Result<S> {
    let log_x = check_x(x)?;
    let eta = profile.eta_log(log_x / a)?;
    if !(a * eta < S::one()) {
        return Err(Error::Hypothesis(format!("A·η(x^(1/A)) = {} is not below 1", a * eta)));
    }
    Ok(S::one() / (S::one() + a * eta))
}

#[derive(Clone, Copy, Debug)]
pub enum Mode<'a, S> {
    Ingham,
    Density(&'a DensityEstimate<S>),
}

fn check_eta0<S: Real>(profile: &EtaProfile<S>, d: &DensityEstimate<S>) -> Result<()> {
    if !(profile.eta0() * d.a < S::one()) {
        return Err(Error::Hypothesis(format!(
            "η₀ = {} is not below 1/A = {}",
            profile.eta0(),
            S::one() / d.a
        )));
    }
    Ok(())
}

/// Lower end of the admissible `|y|` range for the all-intervals bounds.
pub fn y_threshold<S: Real>(
    mode: Mode<'_, S>,
    profile: &EtaProfile<S>,
    q: u64,
    x: S,
    eps: S,
) -> Result<S> {
    check_q(q)?;
    let log_x = check_x(x)?;
    let log_q = S::of_u64(q).ln();
    let log_qx = log_q + log_x;
    let polylog = (S::of(2.0) + eps) * log_qx.ln();
    let l = match mode {
        Mode::Ingham => log_q + log_x - profile.omega_log(log_x)? + polylog,
        Mode::Density(d) => {
            let eta = profile.eta_log(log_x / d.a)?;
            if !(d.a * eta < S::one()) {
                return Err(Error::Hypothesis(format!("A·η(x^(1/A)) = {} is not below 1", d.a * eta)));
            }
            let inner = log_qx.ln() + d.log_g_at(log_qx);
            S::of(2.0) * log_q + (S::one() - S::one() / d.a) * log_x + inner / (d.a * eta) + polylog
        }
    };
    Ok(l.exp())
}

/// Right-hand side of the all-intervals bound.
pub fn envelope_all<S: Real>(
    mode: Mode<'_, S>,
    profile: &EtaProfile<S>,
    q: u64,
    x: S,
    y: S,
    ez: Option<&ExceptionalZero<S>>,
) -> Result<S> {
    check_q(q)?;
    let log_x = check_x(x)?;
    let log_qx = S::of_u64(q).ln() + log_x;
    let ay = y.abs();
    if ay > x {
        log::warn!("|y| = {ay} exceeds x = {x}");
    }
    let (b, main) = match mode {
        Mode::Ingham => {
            let b = log_exceptional(log_x, q, ez).map_or(S::zero(), |l| l.exp());
            let main = (log_x + S::of(2.0) * log_qx.ln() - profile.omega_log(log_x)?).exp();
            (b, main)
        }
        Mode::Density(d) => {
            let t = tau(d.a, profile, x)?;
            let b = log_exceptional(log_x, q, ez).map_or(S::zero(), |l| (ay.ln() - log_x + l).exp());
            if ay == S::zero() {
                return Ok(b);
            }
            let log_q = S::of_u64(q).ln();
            let l = t * ay.ln()
                + (S::one() - t) * (S::one() - S::one() / d.a) * log_x
                + log_q
                + S::of(2.0) * log_qx.ln()
                + t * (d.log_g_at(log_qx) - S::of(2.0) * log_q - log_qx.ln());
            (b, l.exp())
        }
    };
    if let Ok(th) = y_threshold(mode, profile, q, x, S::of(1e-3)) {
        if ay < th {
            log::warn!("|y| = {ay} is below the admissible threshold {th}");
        }
    }
    Ok(b + main)
}

/// Lower end of the admissible `|h|` range for the almost-all bounds.
pub fn h_threshold<S: Real>(
    mode: Mode<'_, S>,
    profile: &EtaProfile<S>,
    q: u64,
    x: S,
    eps: S,
) -> Result<S> {
    check_q(q)?;
    let log_x = check_x(x)?;
    let log_q = S::of_u64(q).ln();
    let log_qx = log_q + log_x;
    let eta = profile.eta_log(log_x)?;
    let polylog = (S::of(2.0) + eps) * log_qx.ln();
    let l = match mode {
        Mode::Ingham => log_q + (S::one() - S::of(2.0) * eta) * log_x + polylog,
        Mode::Density(d) => {
            check_eta0(profile, d)?;
            log_q + (S::one() - S::of(2.0) / d.a) * log_x + (d.log_g_at(log_qx) + polylog) / eta
        }
    };
    Ok(l.exp())
}

/// Right-hand side of the almost-all bound on `Σ*_a ∫_X^{2X} |Δ(u,h,q,a)|² du`.
pub fn envelope_almost_all<S: Real>(
    mode: Mode<'_, S>,
    profile: &EtaProfile<S>,
    q: u64,
    x: S,
    h: S,
    ez: Option<&ExceptionalZero<S>>,
) -> Result<S> {
    check_q(q)?;
    let log_x = check_x(x)?;
    let ah = h.abs();
    if !(ah > S::zero()) {
        return Err(Error::InvalidArgument("h must be nonzero".into()));
    }
    let log_h = ah.ln();
    let log_q = S::of_u64(q).ln();
    let log_qx = log_q + log_x;
    let eta = profile.eta_log(log_x)?;
    let b2 = log_exceptional(S::of(2.0) * log_x, q, ez);
    let two = S::of(2.0);
    let value = match mode {
        Mode::Ingham => {
            let b = b2.map_or(S::zero(), |l| (two * log_h - log_x + l).exp() * log_q);
            let lg = (two.ln() + log_qx - log_h).max(S::zero());
            let main = (log_h + (two - two * eta) * log_x).exp() * lg * lg;
            b + main
        }
        Mode::Density(d) => {
            check_eta0(profile, d)?;
            let b = b2.map_or(S::zero(), |l| (two * log_h - log_x + l).exp());
            let ratio = log_h - log_q - (S::one() - two / d.a) * log_x;
            let l = two * log_h + log_x - d.a * eta * ratio + d.log_g_at(log_qx)
                + two * log_qx.ln()
                - log_phi::<S>(q);
            b + l.exp()
        }
    };
    if let Ok(th) = h_threshold(mode, profile, q, x, S::of(1e-3)) {
        if ah < th {
            log::warn!("|h| = {ah} is below the admissible threshold {th}");
        }
    }
    Ok(value)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation<S> {
    pub t: S,
    /// `x^{1/A}/q`.
    pub limit: S,
}

impl<S: Real> Truncation<S> {
    pub fn within_limit(&self) -> bool {
        self.t < self.limit
    }
}

/// `T = (q^{1−Aη} x^{1+η}/|y| · log(qx)/g(q,x))^{1/(1+Aη)}` with `η = η(x^{1/A})`.
pub fn optimal_truncation<S: Real>(
    density: &DensityEstimate<S>,
    profile: &EtaProfile<S>,
    q: u64,
    x: S,
    y: S,
) -> Result<Truncation<S>> {
    check_q(q)?;
    let log_x = check_x(x)?;
    let a = density.a;
    let t = tau(a, profile, x)?;
    let eta = profile.eta_log(log_x / a)?;
    let log_q = S::of_u64(q).ln();
    let log_qx = log_q + log_x;
    let l = (S::one() - a * eta) * log_q + (S::one() + eta) * log_x - y.abs().ln() + log_qx.ln()
        - density.log_g_at(log_qx);
    let tr = Truncation { t: (l * t).exp(), limit: (log_x / a - log_q).exp() };
    if !tr.within_limit() {
        log::warn!("truncation height {} is not below x^(1/A)/q = {}", tr.t, tr.limit);
    }
    Ok(tr)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CorollaryKind<S> {
    /// `y ∈ [x^{1−1/A} exp(log^α x), x]`, `α > 2/3`.
    AllIntervalsKorobov { a: S, alpha: S },
    /// `y ∈ [q² x^{1−1/A} log^C qx, x]`, `C > 2 + (1+B)/(Aη₀)`.
    AllIntervalsLogPower { a: S, b: S, c: S, eta0: S },
    /// `h ∈ [X^{1−2/A} exp(log^α X), X]`.
    AlmostAllKorobov { a: S, alpha: S },
    /// `h ∈ [q^{1+1/(Aη₀)} X^{1−2/A} log^C qX, X]`, `C > (B+2)/(Aη₀)`.
    AlmostAllLogPower { a: S, b: S, c: S, eta0: S },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorollaryWindow<S> {
    pub lower: S,
    pub upper: S,
    /// Bound on the number of exceptional `n ∈ [X, 2X]`, for the almost-all kinds.
    pub exceptions: Option<S>,
}

impl<S: Real> CorollaryWindow<S> {
    pub fn is_empty(&self) -> bool {
        !(self.lower <= self.upper)
    }
}

fn check_a<S: Real>(a: S) -> Result<()> {
    if !(a >= S::of(2.0)) {
        return Err(Error::InvalidArgument(format!("A={a} must be ≥ 2")));
    }
    Ok(())
}

fn check_alpha<S: Real>(alpha: S) -> Result<()> {
    if !(alpha > S::of(2.0 / 3.0)) {
        return Err(Error::Hypothesis(format!("α={alpha} must exceed 2/3")));
    }
    Ok(())
}

fn check_log_power<S: Real>(a: S, b: S, eta0: S) -> Result<()> {
    check_a(a)?;
    if !(b >= S::zero()) {
        return Err(Error::InvalidArgument(format!("B={b} must be ≥ 0")));
    }
    if !(eta0 > S::zero() && a * eta0 < S::one()) {
        return Err(Error::Hypothesis(format!("need 0 < η₀ < 1/A, got η₀={eta0}")));
    }
    Ok(())
}

/// Admissible window of a corollary at `x` and, for almost-all kinds, the
/// exception count at interval length `h`.
pub fn corollary_window<S: Real>(kind: CorollaryKind<S>, q: u64, x: S, h: Option<S>) -> Result<CorollaryWindow<S>> {
    check_q(q)?;
    let log_x = check_x(x)?;
    let log_q = S::of_u64(q).ln();
    let log_qx = log_q + log_x;
    let one = S::one();
    let two = S::of(2.0);
    let win = |l: S, exceptions: Option<S>| CorollaryWindow { lower: l.exp(), upper: x, exceptions };
    match kind {
        CorollaryKind::AllIntervalsKorobov { a, alpha } => {
            check_a(a)?;
            check_alpha(alpha)?;
            Ok(win((one - one / a) * log_x + log_x.powf(alpha), None))
        }
        CorollaryKind::AllIntervalsLogPower { a, b, c, eta0 } => {
            check_log_power(a, b, eta0)?;
            let c_min = two + (one + b) / (a * eta0);
            if !(c > c_min) {
                return Err(Error::Hypothesis(format!("C={c} must exceed {c_min}")));
            }
            Ok(win(two * log_q + (one - one / a) * log_x + c * log_qx.ln(), None))
        }
        CorollaryKind::AlmostAllKorobov { a, alpha } => {
            check_a(a)?;
            check_alpha(alpha)?;
            let base = log_q + (one - two / a) * log_x;
            let exceptions = h.map(|h| (log_x - (h.ln() - base) / log_x.powf(alpha)).exp());
            Ok(win((one - two / a) * log_x + log_x.powf(alpha), exceptions))
        }
        CorollaryKind::AlmostAllLogPower { a, b, c, eta0 } => {
            check_log_power(a, b, eta0)?;
            let c_min = (b + two) / (a * eta0);
            if !(c > c_min) {
                return Err(Error::Hypothesis(format!("C={c} must exceed {c_min}")));
            }
            let base = log_q + (one - two / a) * log_x;
            let exceptions =
                h.map(|h| (log_q + log_x - a * eta0 * (h.ln() - base) + c * log_qx.ln()).exp());
            Ok(win((one + one / (a * eta0)) * log_q + (one - two / a) * log_x + c * log_qx.ln(), exceptions))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn eta_examples() {
        let c = EtaProfile::constant(0.2).unwrap();
        assert_eq!(c.eta(1e9).unwrap(), 0.2);
        assert_eq!(EtaProfile::<f64>::grh().eta(1e3).unwrap(), 0.5);
        let vk = EtaProfile::vinogradov_korobov(0.05).unwrap();
        let l = 1e6f64.ln();
        let expected = 0.05 * l.powf(-2.0 / 3.0) * l.ln().powf(-1.0 / 3.0);
        assert!(close(vk.eta(1e6).unwrap(), expected, 1e-14));
        assert!(vk.eta(50.0).is_err());
        assert!(EtaProfile::constant(0.6).is_err());
        assert!(EtaProfile::classical(-1.0).is_err());
    }

    #[test]
    fn eta_inverse() {
        let c = EtaProfile::constant(0.2).unwrap();
        assert_eq!(c.eta_inv(0.2).unwrap(), 4.0);
        assert!(c.eta_inv(0.1).is_err());
        for p in [EtaProfile::vinogradov_korobov(0.05).unwrap(), EtaProfile::classical(1.0).unwrap()] {
            for t in [200.0, 1e4, 1e9, 1e15] {
                let v = p.eta(t).unwrap();
                assert!(close(p.eta_inv(v).unwrap(), t, 1e-6), "{p:?} {t}");
            }
            assert!(p.eta_inv(0.0).is_err());
        }
    }

    #[test]
    fn omega_values() {
        let c = EtaProfile::constant(0.3).unwrap();
        assert!(close(c.omega(1e8).unwrap(), 0.3 * 1e8f64.ln(), 1e-12));
        let g = EtaProfile::<f64>::grh();
        assert!((g.omega(1e6).unwrap() - 6.9078).abs() < 1e-4);
        let vk = EtaProfile::vinogradov_korobov(0.05).unwrap();
        let mut prev = 0.0;
        for k in 3..=24 {
            let w = vk.omega(10f64.powi(k)).unwrap();
            assert!(w >= prev);
            prev = w;
        }
        assert!(c.omega(3.0).is_err());
    }

    #[test]
    fn omega_argmin_matches_brute_force() {
        let p = EtaProfile::classical(2.0).unwrap();
        let log_x = 1e7f64.ln();
        let mut best = f64::INFINITY;
        let mut arg = 0.0;
        let l0 = 4f64.ln();
        for i in 0..=200_000 {
            let l = l0 + (log_x - l0) * i as f64 / 200_000.0;
            let v = log_x * p.eta_at_log(l) + l;
            if v < best {
                best = v;
                arg = l;
            }
        }
        assert!(close(p.omega_log(log_x).unwrap(), log_x * p.eta_at_log(arg), 1e-6));
    }

    #[test]
    fn tau_values() {
        let c = EtaProfile::constant(0.2).unwrap();
        assert!((tau(7.0f64 / 3.0, &c, 1e9).unwrap() - 0.681818).abs() < 1e-6);
        let vk = EtaProfile::vinogradov_korobov(0.05).unwrap();
        let t = tau(7.0 / 3.0, &vk, 1e9).unwrap();
        assert!(t > 0.5 && t < 1.0);
        let boundary = EtaProfile::constant(0.5).unwrap();
        assert!(matches!(tau(2.0, &boundary, 1e9), Err(Error::Hypothesis(_))));
        let tiny = EtaProfile::constant(1e-12).unwrap();
        assert!(tau(7.0 / 3.0, &tiny, 1e9).unwrap() > 1.0 - 1e-11);
    }

    #[test]
    fn exceptional_and_siegel() {
        assert_eq!(exceptional_term::<f64>(1e6, 3, None), 0.0);
        let ez = ExceptionalZero::injected(3, 0.5).unwrap();
        assert!(close(exceptional_term(1e6, 3, Some(&ez)), 500.0, 1e-12));
        let ez = ExceptionalZero::injected(5, 0.99).unwrap();
        assert!(close(exceptional_term(1e6, 5, Some(&ez)), 10f64.powf(5.94) / 4.0, 1e-12));
        assert!(ExceptionalZero::injected(5, 1.0).is_err());
        assert!(close(siegel_upper(1, 0.5, 0.1).unwrap(), 0.9, 1e-15));
        assert!(close(siegel_upper(10_000, 0.5, 0.1).unwrap(), 0.999, 1e-15));
        assert!(siegel_upper(7, 0.5, 0.2).unwrap() < siegel_upper(7, 0.5, 0.1).unwrap());
    }

    #[test]
    fn thresholds() {
        let g = EtaProfile::<f64>::grh();
        let th = y_threshold(Mode::Ingham, &g, 1, 1e6, 0.1).unwrap();
        assert!(close(th, 1e3 * 1e6f64.ln().powf(2.1), 1e-12));
        assert!((th / 2.48e5 - 1.0).abs() < 0.01);
        let th = h_threshold(Mode::Ingham, &g, 1, 1e6, 0.1).unwrap();
        assert!((th - 248.0).abs() < 1.0);

        let c = EtaProfile::constant(0.2).unwrap();
        let d = DensityEstimate::new(7.0 / 3.0, GFamily::Constant { c: 1.0 }).unwrap();
        let th = y_threshold(Mode::Density(&d), &c, 1, 1e9, 0.1).unwrap();
        let l = 1e9f64.ln();
        let expected = 1e9f64.powf(4.0 / 7.0) * l.powf(1.0 / (7.0 / 3.0 * 0.2)) * l.powf(2.1);
        assert!(close(th, expected, 1e-12));
        let too_wide = EtaProfile::constant(0.45).unwrap();
        assert!(y_threshold(Mode::Density(&d), &too_wide, 1, 1e9, 0.1).is_err());
        assert!(h_threshold(Mode::Density(&d), &too_wide, 1, 1e9, 0.1).is_err());
    }

    #[test]
    fn envelopes() {
        let g = EtaProfile::<f64>::grh();
        let e = envelope_all(Mode::Ingham, &g, 1, 1e6, 1e5, None).unwrap();
        assert!((e / 1.9087e5 - 1.0).abs() < 1e-4);
        let e2 = envelope_all(Mode::Ingham, &g, 1, 1e6, 5e5, None).unwrap();
        assert_eq!(e, e2);

        let c = EtaProfile::constant(0.2).unwrap();
        let d = DensityEstimate::new(7.0 / 3.0, GFamily::Constant { c: 1.0 }).unwrap();
        let x: f64 = 1e9;
        let y: f64 = 1e6;
        let t = 1.0 / (1.0 + 7.0 / 15.0);
        let l = x.ln();
        let expected = y.powf(t) * x.powf(4.0 / 7.0).powf(1.0 - t) * l * l * (1.0 / l).powf(t);
        assert!(close(envelope_all(Mode::Density(&d), &c, 1, x, y, None).unwrap(), expected, 1e-12));
        let mut prev = 0.0;
        for k in 1..=9 {
            let v = envelope_all(Mode::Density(&d), &c, 1, x, 10f64.powi(k), None).unwrap();
            assert!(v > prev);
            prev = v;
        }
        let ez = ExceptionalZero::injected(1, 0.9).unwrap();
        let with = envelope_all(Mode::Density(&d), &c, 1, x, y, Some(&ez)).unwrap();
        assert!(close(with - expected, y / x * x.powf(0.9), 1e-9));

        let x: f64 = 1e6;
        let h: f64 = 1e3;
        let v = envelope_almost_all(Mode::Density(&d), &c, 5, x, h, None).unwrap();
        let a = 7.0 / 3.0;
        let lq = (5.0 * x).ln();
        let expected = h * h * x * (h / (5.0 * x.powf(1.0 - 2.0 / a))).powf(-a * 0.2) * lq * lq / 4.0;
        assert!(close(v, expected, 1e-12));
        let v = envelope_almost_all(Mode::Ingham, &g, 1, x, h, None).unwrap();
        let lg = (2.0 * x / h).ln();
        assert!(close(v, h * x * lg * lg, 1e-12));
    }

    #[test]
    fn truncation() {
        let c = EtaProfile::constant(0.2).unwrap();
        let d = DensityEstimate::new(7.0 / 3.0, GFamily::Constant { c: 1.0 }).unwrap();
        let tr = optimal_truncation(&d, &c, 1, 1e9, 1e6).unwrap();
        let t = 1.0 / (1.0 + 7.0 / 15.0);
        let expected = (1e9f64.powf(1.2) / 1e6 * 1e9f64.ln()).powf(t);
        assert!(close(tr.t, expected, 1e-12));
        assert!(close(tr.limit, 1e9f64.powf(3.0 / 7.0), 1e-12));
    }

    #[test]
    fn corollaries() {
        let a = 7.0 / 3.0;
        let x: f64 = 1e9;
        let w = corollary_window(CorollaryKind::AllIntervalsKorobov { a, alpha: 0.7 }, 1, x, None).unwrap();
        assert!(close(w.lower, x.powf(4.0 / 7.0) * x.ln().powf(0.7).exp(), 1e-12));
        assert!(corollary_window(CorollaryKind::AllIntervalsKorobov { a, alpha: 2.0 / 3.0 }, 1, x, None).is_err());

        let (b, eta0) = (1.0, 0.2);
        let c = 2.0 + (1.0 + b) / (a * eta0);
        let k = CorollaryKind::AllIntervalsLogPower { a, b, c, eta0 };
        assert!(matches!(corollary_window(k, 1, x, None), Err(Error::Hypothesis(_))));
        let k = CorollaryKind::AllIntervalsLogPower { a, b, c: c + 0.1, eta0 };
        assert!(corollary_window(k, 1, x, None).is_ok());

        let k = CorollaryKind::AlmostAllKorobov { a, alpha: 0.8 };
        let lower = corollary_window(k, 1, x, None).unwrap().lower;
        let w = corollary_window(k, 1, x, Some(lower)).unwrap();
        assert!(close(w.exceptions.unwrap(), x / std::f64::consts::E, 1e-9));

        let c = (b + 2.0) / (a * eta0);
        assert!(corollary_window(CorollaryKind::AlmostAllLogPower { a, b, c, eta0 }, 1, x, None).is_err());
        let w = corollary_window(CorollaryKind::AlmostAllLogPower { a, b, c: c + 1.0, eta0 }, 2, x, Some(1e8))
            .unwrap();
        assert!(w.exceptions.unwrap() > 0.0);
    }

    #[test]
    fn f32_profiles() {
        let c = EtaProfile::<f32>::constant(0.2).unwrap();
        assert!((tau(7.0f32 / 3.0, &c, 1e9).unwrap() - 0.681818).abs() < 1e-5);
        let vk = EtaProfile::<f32>::vinogradov_korobov(0.05).unwrap();
        assert!(vk.omega(1e9).unwrap() > 0.0);
    }
}
