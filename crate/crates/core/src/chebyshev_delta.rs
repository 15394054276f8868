//! Error terms of the twisted Chebyshev functions in short intervals.
//!
//! Three twists: a Dirichlet character `χ`, an additive character `e(na/q)`
//! and a residue class `n ≡ a mod q`. The main terms are `δ_χ·y`,
//! `μ(q)y/φ(q)` and `y/φ(q)` respectively.
//!
//! Negative `y` is oriented: `Δ(x, y) = −(Σ_{x+y<n≤x} …) − main·y`, so that
//! `Δ(x, −y) = −Δ(x−y, y)`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::arith_chars::{
    build_group, characters, euler_phi, gauss_sum, gcd, mobius, DirichletCharacter,
};
use crate::error::{Error, Result};
use crate::prime_sieve::{real_interval_bounds, twisted_sum_points, Kernel, LambdaPoint, Sieve, Weight};
use crate::scalar::Real;
use crate::summation::{ComplexNeumaier, Neumaier};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Character,
    Additive,
    ArithmeticProgression,
}

/// Owned description of the twist, kept in results.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    Character { q: u64, label: u64 },
    Additive { a: u64, q: u64 },
    Residue { a: u64, q: u64 },
}

impl Twist {
    pub fn variant(&self) -> Variant {
        match self {
            Twist::Character { .. } => Variant::Character,
            Twist::Additive { .. } => Variant::Additive,
            Twist::Residue { .. } => Variant::ArithmeticProgression,
        }
    }

    pub fn modulus(&self) -> u64 {
        match *self {
            Twist::Character { q, .. } | Twist::Additive { q, .. } | Twist::Residue { q, .. } => q,
        }
    }
}

impl From<&Kernel<'_>> for Twist {
    fn from(k: &Kernel<'_>) -> Self {
        match *k {
            Kernel::Character(chi) => Twist::Character { q: chi.modulus(), label: chi.label() },
            Kernel::Additive { a, q } => Twist::Additive { a, q },
            Kernel::Residue { a, q } => Twist::Residue { a, q },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaResult<S> {
    pub twist: Twist,
    pub weight: Weight,
    pub x: S,
    pub y: S,
    pub value: Complex<S>,
    pub main_term: S,
}

impl<S: Real> DeltaResult<S> {
    pub fn variant(&self) -> Variant {
        self.twist.variant()
    }

    /// Real part; exact for the progression variant.
    pub fn real(&self) -> S {
        self.value.re
    }
}

/// Main-term density: `δ_χ`, `μ(q)/φ(q)` or `1/φ(q)`.
pub fn main_density<S: Real>(kernel: &Kernel<'_>) -> S {
    match *kernel {
        Kernel::Character(chi) => {
            if chi.is_principal() {
                S::one()
            } else {
                S::zero()
            }
        }
        Kernel::Additive { q, .. } => S::of(mobius(q) as f64) / S::of_u64(euler_phi(q)),
        Kernel::Residue { q, .. } => S::one() / S::of_u64(euler_phi(q)),
    }
}

/// Weighted points in the oriented interval, with the orientation sign.
#[derive(Clone, Debug)]
pub struct Interval<S> {
    pub x: S,
    pub y: S,
    pub points: Vec<LambdaPoint>,
    pub sign: S,
}

impl<S: Real> Interval<S> {
    pub fn new(x: S, y: S, weight: Weight) -> Result<Self> {
        Self::with_sieve(&Sieve::default(), x, y, weight)
    }

    pub fn with_sieve(sieve: &Sieve, x: S, y: S, weight: Weight) -> Result<Self> {
        let (lo, hi) = real_interval_bounds(x, y)?;
        let seg = sieve.segment(lo, hi, weight == Weight::Psi)?;
        let sign = if y < S::zero() { -S::one() } else { S::one() };
        Ok(Self { x, y, points: seg.points(weight)?, sign })
    }

    /// `Δ` for one kernel over these points.
    pub fn delta(&self, kernel: &Kernel<'_>, weight: Weight) -> Result<DeltaResult<S>> {
        kernel.validate()?;
        let sum: Complex<S> = twisted_sum_points(&self.points, kernel);
        let main_term = main_density::<S>(kernel) * self.y;
        let mut value = sum * self.sign;
        value.re -= main_term;
        if matches!(kernel, Kernel::Residue { .. }) {
            value.im = S::zero();
        }
        Ok(DeltaResult { twist: kernel.into(), weight, x: self.x, y: self.y, value, main_term })
    }
}

pub fn delta<S: Real>(x: S, y: S, kernel: &Kernel<'_>, weight: Weight) -> Result<DeltaResult<S>> {
    kernel.validate()?;
    Interval::new(x, y, weight)?.delta(kernel, weight)
}

/// `|Δ_ψ(x,y,χ) − Δ_ϑ(x,y,χ)|`.
pub fn psi_theta_gap<S: Real>(x: S, y: S, chi: &DirichletCharacter) -> Result<S> {
    let k = Kernel::Character(chi);
    let psi = delta(x, y, &k, Weight::Psi)?;
    let theta = delta(x, y, &k, Weight::Theta)?;
    Ok((psi.value - theta.value).norm())
}

fn check_coprime(a: u64, q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    if gcd(a % q, q) != 1 {
        return Err(Error::NotCoprime { a, q });
    }
    Ok(())
}

/// `Δ(x,y,χ)` for every character mod `q`, in enumeration order.
pub fn character_deltas<S: Real>(
    interval: &Interval<S>,
    chars: &[DirichletCharacter],
    weight: Weight,
) -> Result<Vec<Complex<S>>> {
    chars
        .par_iter()
        .map(|chi| interval.delta(&Kernel::Character(chi), weight).map(|d| d.value))
        .collect()
}

/// Direct progression error term and its character reconstruction.
pub fn decompose_ap<S: Real>(
    x: S,
    y: S,
    q: u64,
    a: u64,
    weight: Weight,
) -> Result<(DeltaResult<S>, Complex<S>)> {
    check_coprime(a, q)?;
    let interval = Interval::new(x, y, weight)?;
    let direct = interval.delta(&Kernel::Residue { a, q }, weight)?;
    let chars = characters(&build_group(q)?);
    let deltas = character_deltas(&interval, &chars, weight)?;
    let phi = S::of_u64(euler_phi(q));
    let rec: Complex<S> = chars
        .iter()
        .zip(&deltas)
        .map(|(chi, d)| chi.eval_u64::<S>(a).conj() * *d)
        .collect::<ComplexNeumaier<S>>()
        .value();
    Ok((direct, rec / phi))
}

/// Direct additive error term, its character reconstruction and `|direct − reconstructed|`.
///
/// The reconstruction drops exactly the `n` with `gcd(n, q) > 1`; see
/// [`additive_dropped_terms`].
pub fn decompose_additive<S: Real>(
    x: S,
    y: S,
    q: u64,
    a: u64,
    weight: Weight,
) -> Result<(DeltaResult<S>, Complex<S>, S)> {
    check_coprime(a, q)?;
    let interval = Interval::new(x, y, weight)?;
    let direct = interval.delta(&Kernel::Additive { a, q }, weight)?;
    let chars = characters(&build_group(q)?);
    let deltas = character_deltas(&interval, &chars, weight)?;
    let phi = S::of_u64(euler_phi(q));
    let rec: Complex<S> = chars
        .iter()
        .zip(&deltas)
        .map(|(chi, d)| chi.eval_u64::<S>(a) * gauss_sum::<S>(&chi.conj()) * *d)
        .collect::<ComplexNeumaier<S>>()
        .value()
        / phi;
    let residual = (direct.value - rec).norm();
    Ok((direct, rec, residual))
}

/// `Σ e(na/q)w(n)` over the points with `gcd(n, q) > 1`, oriented.
pub fn additive_dropped_terms<S: Real>(x: S, y: S, q: u64, a: u64, weight: Weight) -> Result<Complex<S>> {
    check_coprime(a, q)?;
    let interval = Interval::new(x, y, weight)?;
    let dropped: Vec<LambdaPoint> =
        interval.points.iter().copied().filter(|p| gcd(p.n, q) > 1).collect();
    Ok(twisted_sum_points::<S>(&dropped, &Kernel::Additive { a, q }) * interval.sign)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareVariant {
    ArithmeticProgression,
    Additive,
}

/// `Σ*_a |Δ(x,y,·,a)|²` against `(1/φ(q)) Σ_χ c_χ |Δ(x,y,χ)|²`, with
/// `c_χ = 1` for progressions and `|τ(χ)|²` for additive twists.
pub fn averaged_square<S: Real>(
    x: S,
    y: S,
    q: u64,
    variant: SquareVariant,
    weight: Weight,
) -> Result<(S, S)> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    let interval = Interval::new(x, y, weight)?;
    let residues: Vec<u64> = (0..q).filter(|&a| gcd(a, q) == 1).collect();
    let lhs_terms: Vec<S> = residues
        .par_iter()
        .map(|&a| {
            let k = match variant {
                SquareVariant::ArithmeticProgression => Kernel::Residue { a, q },
                SquareVariant::Additive => Kernel::Additive { a, q },
            };
            interval.delta(&k, weight).map(|d| d.value.norm_sqr())
        })
        .collect::<Result<_>>()?;
    let lhs = lhs_terms.into_iter().collect::<Neumaier<S>>().value();

    let chars = characters(&build_group(q)?);
    let deltas = character_deltas(&interval, &chars, weight)?;
    let rhs = chars
        .iter()
        .zip(&deltas)
        .map(|(chi, d)| {
            let c = match variant {
                SquareVariant::ArithmeticProgression => S::one(),
                SquareVariant::Additive => gauss_sum::<S>(chi).norm_sqr(),
            };
            c * d.norm_sqr()
        })
        .collect::<Neumaier<S>>()
        .value()
        / S::of_u64(euler_phi(q));
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn delta_examples() {
        let k = Kernel::Residue { a: 1, q: 3 };
        let d = delta(10.0, 10.0, &k, Weight::Theta).unwrap();
        assert!((d.real() - (13f64.ln() + 19f64.ln() - 5.0)).abs() < 1e-13);
        assert!((d.real() - 0.5093884).abs() < 1e-7);
        assert_eq!(d.variant(), Variant::ArithmeticProgression);
        assert_eq!(d.main_term, 5.0);
        let d = delta(10.0, 10.0, &k, Weight::Psi).unwrap();
        assert!((d.real() - (13f64.ln() + 19f64.ln() + 2f64.ln() - 5.0)).abs() < 1e-13);
        for k in [Kernel::Residue { a: 2, q: 5 }, Kernel::Additive { a: 3, q: 7 }] {
            let d = delta(1234.0, 0.0, &k, Weight::Psi).unwrap();
            assert_eq!(d.value, Complex::new(0.0, 0.0));
        }
        assert!(matches!(
            delta(10.0, 10.0, &Kernel::Residue { a: 3, q: 6 }, Weight::Theta),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn f32_agrees_with_f64() {
        let k = Kernel::Residue { a: 1, q: 3 };
        let a = delta(10.0f32, 10.0, &k, Weight::Theta).unwrap().real();
        assert!((a as f64 - 0.5093884).abs() < 1e-5);
    }

    #[test]
    fn gap_examples() {
        let g3 = build_group(3).unwrap();
        let gap = psi_theta_gap(10.0, 10.0, &g3.principal()).unwrap();
        assert!((gap - 2f64.ln()).abs() < 1e-13);
        let gap = psi_theta_gap(20.0, 4.0, &g3.principal()).unwrap();
        assert_eq!(gap, 0.0);
        let trivial = build_group(1).unwrap().principal();
        let gap = psi_theta_gap(1e5, 1e4, &trivial).unwrap();
        assert!(gap <= 3.0 * 100.0 * 1e5f64.ln());
    }

    #[test]
    fn signed_interval() {
        let g = build_group(5).unwrap();
        for chi in characters(&g) {
            let k = Kernel::Character(&chi);
            let a = delta(1000.0, -100.0, &k, Weight::Psi).unwrap().value;
            let b = delta(900.0, 100.0, &k, Weight::Psi).unwrap().value;
            assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn decompositions() {
        let (d, r) = decompose_ap(1e4, 1e3, 1, 0, Weight::Psi).unwrap();
        assert!((d.value - r).norm() < 1e-9);
        for (q, a, w) in [(7, 3, Weight::Psi), (12, 5, Weight::Theta)] {
            let (d, r) = decompose_ap(1e4f64, 1e3, q, a, w).unwrap();
            assert!((d.value - r).norm() < 1e-9 * (1.0 + d.value.norm()), "q={q}");
            assert!(r.im.abs() < 1e-9);
        }
        let (_, _, res) = decompose_additive(1e4, 1e3, 1, 0, Weight::Psi).unwrap();
        assert!(res < 1e-9);
        let (_, _, res) = decompose_additive(1e4, 1e3, 7, 2, Weight::Theta).unwrap();
        assert!(res < 1e-9);
        let (_, _, res) = decompose_additive(1e4, 1e3, 4, 1, Weight::Psi).unwrap();
        // No power of 2 in (10^4, 1.1·10^4].
        assert!(res < 1e-9);
        let dropped = additive_dropped_terms::<f64>(1e4, 1e3, 4, 1, Weight::Psi).unwrap();
        assert!((res - dropped.norm()).abs() < 1e-9);
        let (_, _, res) = decompose_additive(7.0, 10.0, 4, 1, Weight::Psi).unwrap();
        let dropped = additive_dropped_terms::<f64>(7.0, 10.0, 4, 1, Weight::Psi).unwrap();
        // 8 and 16 are dropped: e(8/4) log 2 + e(16/4) log 2.
        assert!((dropped.re - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((res - dropped.norm()).abs() < 1e-9);
    }

    #[test]
    fn averaged_squares() {
        let (l, r) = averaged_square(1e4, 1e3, 1, SquareVariant::ArithmeticProgression, Weight::Psi).unwrap();
        assert!(rel(l, r) < 1e-12);
        for (q, w) in [(5, Weight::Theta), (8, Weight::Psi)] {
            let (l, r) = averaged_square(1e5, 1e4, q, SquareVariant::ArithmeticProgression, w).unwrap();
            assert!(rel(l, r) < 1e-9, "q={q}: {l} vs {r}");
        }
        let (l, r) = averaged_square(1e5f64, 1e4, 7, SquareVariant::Additive, Weight::Theta).unwrap();
        assert!((l - r).abs() < 7.0 * 7f64.ln().powi(2) * 1e5f64.ln().powi(2));
    }
}
