//! Nontrivial zeros of Dirichlet L-functions: storage, search, counting.

mod finder;
mod io;
mod lvalue;
mod special;

use std::path::PathBuf;

pub use finder::{expected_count, find_zeros, find_zeros_with, FinderOptions, MAX_HEIGHT};
pub use io::{
    data_dir, load_for_character, load_zeros, parse_zeros, write_zeros, zero_file_name, DATA_DIR_ENV,
};
pub use lvalue::{LFunction, LValueGrid};
pub use special::{hurwitz_zeta, ln_gamma, HurwitzValue};

use crate::arith_chars::{euler_phi, inv_mod};
use crate::bound_envelopes::DensityEstimate;
use crate::error::{Error, Result};

/// `ρ = β + iγ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zero {
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroSource {
    File(PathBuf),
    Computed,
}

/// All zeros of one `L(s, χ)` with `|γ| ≤ t_max`, sorted by `γ`.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    q: u64,
    label: u64,
    zeros: Vec<Zero>,
    t_max: f64,
    source: ZeroSource,
    real_character: bool,
}

impl ZeroSet {
    pub fn new(
        q: u64,
        label: u64,
        zeros: Vec<Zero>,
        t_max: f64,
        source: ZeroSource,
        real_character: bool,
    ) -> Result<Self> {
        let zs = Self { q, label, zeros, t_max, source, real_character };
        zs.validate()?;
        Ok(zs)
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_max >= 0.0) {
            return Err(Error::InvalidArgument(format!("negative height bound {}", self.t_max)));
        }
        for w in self.zeros.windows(2) {
            if !(w[1].gamma > w[0].gamma) {
                return Err(Error::InvalidArgument(format!(
                    "ordinates not strictly increasing at {} → {}",
                    w[0].gamma, w[1].gamma
                )));
            }
        }
        for z in &self.zeros {
            if !(z.beta > 0.0 && z.beta < 1.0) {
                return Err(Error::InvalidArgument(format!("β = {} outside (0, 1)", z.beta)));
            }
            if !(z.gamma.abs() <= self.t_max) {
                return Err(Error::InvalidArgument(format!("γ = {} beyond T_max = {}", z.gamma, self.t_max)));
            }
        }
        if self.real_character {
            let n = self.zeros.len();
            for i in 0..n {
                let (a, b) = (self.zeros[i], self.zeros[n - 1 - i]);
                if (a.gamma + b.gamma).abs() > 1e-9 * (1.0 + a.gamma.abs()) {
                    return Err(Error::InvalidArgument(format!(
                        "zeros of a real character are not symmetric: {} vs {}",
                        a.gamma, b.gamma
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn label(&self) -> u64 {
        self.label
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn source(&self) -> &ZeroSource {
        &self.source
    }

    pub fn is_real_character(&self) -> bool {
        self.real_character
    }

    pub fn critical_line(&self) -> bool {
        self.zeros.iter().all(|z| z.beta == 0.5)
    }

    pub fn max_beta(&self) -> Option<f64> {
        self.zeros.iter().map(|z| z.beta).reduce(f64::max)
    }

    /// Zeros with `|γ| ≤ t`, ordered by increasing `|γ|`.
    pub fn by_height(&self, t: f64) -> Result<Vec<Zero>> {
        self.check_height(t)?;
        let mut out: Vec<Zero> = self.zeros.iter().copied().filter(|z| z.gamma.abs() <= t).collect();
        out.sort_by(|a, b| a.gamma.abs().total_cmp(&b.gamma.abs()).then(a.gamma.total_cmp(&b.gamma)));
        Ok(out)
    }

    fn check_height(&self, t: f64) -> Result<()> {
        if t > self.t_max {
            return Err(Error::BeyondHeight { t, t_max: self.t_max });
        }
        Ok(())
    }

    /// The zeros of `L(s, conj χ)`: `γ → −γ`.
    pub fn reflected(&self) -> ZeroSet {
        let mut zeros: Vec<Zero> = self.zeros.iter().map(|z| Zero { beta: z.beta, gamma: -z.gamma }).collect();
        zeros.reverse();
        ZeroSet {
            q: self.q,
            label: inv_mod(self.label, self.q).unwrap_or(1).max(1),
            zeros,
            t_max: self.t_max,
            source: self.source.clone(),
            real_character: self.real_character,
        }
    }

    /// Same zeros attached to another character (one induced by this set's character).
    pub fn relabeled(&self, q: u64, label: u64) -> ZeroSet {
        ZeroSet { q, label, ..self.clone() }
    }

    /// Adds a real zero `β₀` at `γ = 0`.
    pub fn with_exceptional(&self, beta0: f64) -> Result<ZeroSet> {
        let mut zeros = self.zeros.clone();
        let at = zeros.partition_point(|z| z.gamma < 0.0);
        if zeros.get(at).is_some_and(|z| z.gamma == 0.0) {
            return Err(Error::InvalidArgument("a zero at γ = 0 is already present".into()));
        }
        zeros.insert(at, Zero { beta: beta0, gamma: 0.0 });
        ZeroSet::new(self.q, self.label, zeros, self.t_max, self.source.clone(), self.real_character)
    }
}

/// `N(σ, T, χ) = #{ρ : β > σ, |γ| ≤ T}`.
pub fn count_zeros(zeros: &ZeroSet, sigma: f64, t: f64) -> Result<usize> {
    zeros.check_height(t)?;
    Ok(zeros.zeros.iter().filter(|z| z.beta > sigma && z.gamma.abs() <= t).count())
}

/// `(T/π) log(qT/2π) − T/π`.
pub fn vertical_prediction(q: u64, t: f64) -> Result<f64> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    if !(t >= 4.0) {
        return Err(Error::InvalidArgument(format!("vertical prediction needs T ≥ 4, got {t}")));
    }
    let pi = std::f64::consts::PI;
    Ok(t / pi * (q as f64 * t / (2.0 * pi)).ln() - t / pi)
}

/// `Σ_χ N(σ, T, χ)` over one zero set per character mod `q`.
pub fn density_sum(sets: &[ZeroSet], q: u64, sigma: f64, t: f64) -> Result<usize> {
    let phi = euler_phi(q);
    let mut labels: Vec<u64> = sets.iter().filter(|s| s.q == q).map(|s| s.label).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() as u64 != phi || sets.len() as u64 != phi {
        return Err(Error::MissingZeros(format!(
            "{} distinct characters mod {q} supplied, {phi} needed",
            labels.len()
        )));
    }
    sets.iter().map(|s| count_zeros(s, sigma, t)).sum()
}

/// `Σ_χ N(σ,T,χ) / ((qT)^{A(1−σ)} g(q,T))`.
pub fn condition2_ratio(sum: usize, q: u64, sigma: f64, t: f64, density: &DensityEstimate<f64>) -> f64 {
    let log_qt = (q as f64).ln() + t.ln();
    let log_den = density.a * (1.0 - sigma) * log_qt + density.log_g_at(log_qt);
    sum as f64 * (-log_den).exp()
}
