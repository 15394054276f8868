//! `L(s, χ)` through Hurwitz zeta, and the real rotation `Z_χ(t)` on the critical line.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::special::{hurwitz_zeta, ln_gamma};
use crate::arith_chars::{gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};

/// Evaluator for one Dirichlet L-function.
#[derive(Clone, Debug)]
pub struct LFunction {
    chi: DirichletCharacter,
    /// `(r/q, χ(r))` over the residues coprime to `q`.
    terms: Vec<(f64, Complex64)>,
    /// `ε^{-1/2}` for the root number `ε = τ(χ)/(i^a √q)`.
    rotation: Complex64,
}

impl LFunction {
    pub fn new(chi: &DirichletCharacter) -> Self {
        let q = chi.modulus();
        let terms = (1..=q)
            .filter_map(|r| chi.turn(r as i64).map(|_| (r as f64 / q as f64, chi.eval::<f64>(r as i64))))
            .collect();
        let tau: Complex64 = gauss_sum(chi);
        let i_a = if chi.parity() == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
        let eps = tau / (i_a * (q as f64).sqrt());
        let rotation = Complex64::from_polar(1.0, -eps.arg() / 2.0);
        Self { chi: chi.clone(), terms, rotation }
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }

    /// `L(s, χ) = q^{-s} Σ_r χ(r) ζ(s, r/q)` and an error estimate.
    pub fn value(&self, s: Complex64) -> (Complex64, f64) {
        let q = self.chi.modulus() as f64;
        let scale = (-s * q.ln()).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for &(a, c) in &self.terms {
            let h = hurwitz_zeta(s, a);
            sum += c * h.value;
            err += h.error;
        }
        (scale * sum, err * scale.norm())
    }

    /// `θ(t) = (t/2) log(q/π) + Im log Γ((1/2 + a + it)/2)`.
    pub fn theta(&self, t: f64) -> f64 {
        let q = self.chi.modulus() as f64;
        let a = self.chi.parity() as f64;
        0.5 * t * (q / PI).ln() + ln_gamma(Complex64::new((0.5 + a) / 2.0, t / 2.0)).im
    }

    /// `ε^{-1/2} e^{iθ(t)} L(1/2 + it)`, real for primitive `χ`.
    pub fn rotated(&self, t: f64) -> (Complex64, f64) {
        let (l, err) = self.value(Complex64::new(0.5, t));
        (self.rotation * Complex64::from_polar(1.0, self.theta(t)) * l, err)
    }

    /// `Z_χ(t)`.
    pub fn z(&self, t: f64) -> f64 {
        self.rotated(t).0.re
    }

    pub fn grid(&self, ts: &[f64]) -> Result<LValueGrid> {
        if !self.chi.is_primitive() {
            return Err(imprimitive(&self.chi));
        }
        let vals: Vec<(Complex64, f64)> = ts.par_iter().map(|&t| self.rotated(t)).collect();
        let error = vals.iter().map(|v| v.1).fold(0.0, f64::max);
        Ok(LValueGrid {
            q: self.chi.modulus(),
            label: self.chi.label(),
            t: ts.to_vec(),
            z: vals.iter().map(|v| v.0.re).collect(),
            imag: vals.iter().map(|v| v.0.im).collect(),
            error,
        })
    }
}

pub(crate) fn imprimitive(chi: &DirichletCharacter) -> Error {
    Error::Imprimitive { q: chi.modulus(), label: chi.label(), conductor: chi.conductor() }
}

/// Values of `Z_χ` on a grid.
#[derive(Clone, Debug)]
pub struct LValueGrid {
    pub q: u64,
    pub label: u64,
    pub t: Vec<f64>,
    pub z: Vec<f64>,
    /// Imaginary parts left after rotation; zero up to evaluation error.
    pub imag: Vec<f64>,
    /// Largest evaluation error estimate over the grid.
    pub error: f64,
}

impl LValueGrid {
    pub fn max_imag(&self) -> f64 {
        self.imag.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Index pairs `(i, i+1)` where `Z` changes sign.
    pub fn sign_changes(&self) -> Vec<usize> {
        self.z.windows(2).enumerate().filter(|(_, w)| w[0] * w[1] < 0.0).map(|(i, _)| i).collect()
    }
}
