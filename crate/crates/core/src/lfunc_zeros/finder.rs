//! Zeros on the critical line from sign changes of `Z_χ`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::lvalue::{imprimitive, LFunction};
use super::{Zero, ZeroSet, ZeroSource};
use crate::arith_chars::DirichletCharacter;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct FinderOptions {
    pub q_cap: u64,
    pub t_cap: f64,
    /// Scan step for `|t| ≤ switch_height`.
    pub coarse_step: f64,
    pub fine_step: f64,
    pub switch_height: f64,
    /// Bisection stops once the bracket is this narrow.
    pub tolerance: f64,
    /// Largest accepted gap between found and expected counts.
    pub count_slack: f64,
    /// Step halvings tried when the count check fails.
    pub max_refinements: u32,
}

impl Default for FinderOptions {
    fn default() -> Self {
        Self {
            q_cap: 20,
            t_cap: 150.0,
            coarse_step: 1e-2,
            fine_step: 1e-3,
            switch_height: 50.0,
            tolerance: 1e-8,
            count_slack: 3.0,
            max_refinements: 3,
        }
    }
}

/// Hard ceiling on the scan height, whatever the options say.
pub const MAX_HEIGHT: f64 = 1000.0;

/// Grid `0 = t_0 < t_1 < … ≤ t_max`, ending exactly at `t_max`.
fn scan_grid(t_max: f64, opts: &FinderOptions, refine: u32) -> Vec<f64> {
    let scale = f64::powi(2.0, refine as i32);
    let h1 = opts.coarse_step / scale;
    let h2 = opts.fine_step / scale;
    let switch = opts.switch_height.min(t_max);
    let n1 = (switch / h1).floor() as usize;
    let mut ts: Vec<f64> = (0..=n1).map(|i| i as f64 * h1).collect();
    if t_max > opts.switch_height {
        let start = *ts.last().unwrap();
        let n2 = ((t_max - start) / h2).floor() as usize;
        ts.extend((1..=n2).map(|j| start + j as f64 * h2));
    }
    if *ts.last().unwrap() < t_max {
        ts.push(t_max);
    }
    ts
}

fn bisect(l: &LFunction, mut a: f64, mut b: f64, mut za: f64, tol: f64) -> f64 {
    while b - a > tol {
        let m = 0.5 * (a + b);
        let zm = l.z(m);
        if zm == 0.0 {
            return m;
        }
        if (zm < 0.0) == (za < 0.0) {
            a = m;
            za = zm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Ordinates of sign changes of `Z` along the oriented grid `ts`.
fn locate(l: &LFunction, ts: &[f64], tol: f64) -> Vec<f64> {
    let zs: Vec<f64> = ts.par_iter().map(|&t| l.z(t)).collect();
    let brackets: Vec<usize> = (0..ts.len() - 1)
        .filter(|&i| zs[i] == 0.0 || (zs[i] < 0.0) != (zs[i + 1] < 0.0) && zs[i + 1] != 0.0)
        .collect();
    brackets
        .par_iter()
        .map(|&i| {
            if zs[i] == 0.0 {
                return ts[i];
            }
            let (a, b, za) = if ts[i] < ts[i + 1] { (ts[i], ts[i + 1], zs[i]) } else { (ts[i + 1], ts[i], zs[i + 1]) };
            bisect(l, a, b, za, tol)
        })
        .collect()
}

/// `(θ(T) − θ(−T))/π`, plus 2 for the poles of `ζ`.
pub fn expected_count(l: &LFunction, t: f64) -> f64 {
    let poles = if l.character().modulus() == 1 { 2.0 } else { 0.0 };
    (l.theta(t) - l.theta(-t)) / PI + poles
}

pub fn find_zeros(chi: &DirichletCharacter, t: f64) -> Result<ZeroSet> {
    find_zeros_with(chi, t, &FinderOptions::default())
}

/// All zeros `1/2 + iγ` with `|γ| ≤ t`.
pub fn find_zeros_with(chi: &DirichletCharacter, t: f64, opts: &FinderOptions) -> Result<ZeroSet> {
    let q = chi.modulus();
    if !chi.is_primitive() {
        return Err(imprimitive(chi));
    }
    if q > opts.q_cap {
        return Err(Error::ModulusTooLarge { q, cap: opts.q_cap });
    }
    let cap = opts.t_cap.min(MAX_HEIGHT);
    if !(t <= cap) {
        return Err(Error::BeyondHeight { t, t_max: cap });
    }
    if t <= 0.0 {
        return ZeroSet::new(q, chi.label(), Vec::new(), t.max(0.0), ZeroSource::Computed, chi.is_real());
    }
    let l = LFunction::new(chi);
    let expected = expected_count(&l, t);
    let mut last = 0;
    for refine in 0..=opts.max_refinements {
        let pos = scan_grid(t, opts, refine);
        let mut gammas: Vec<f64> = locate(&l, &pos, opts.tolerance);
        if chi.is_real() {
            gammas.extend(gammas.clone().into_iter().map(|g| -g));
        } else {
            let neg: Vec<f64> = pos.iter().map(|&x| -x).collect();
            gammas.extend(locate(&l, &neg, opts.tolerance));
        }
        gammas.sort_by(f64::total_cmp);
        gammas.dedup_by(|a, b| (*a - *b).abs() < opts.tolerance);
        last = gammas.len();
        if (last as f64 - expected).abs() <= opts.count_slack {
            let zeros = gammas.into_iter().map(|gamma| Zero { beta: 0.5, gamma }).collect();
            return ZeroSet::new(q, chi.label(), zeros, t, ZeroSource::Computed, chi.is_real());
        }
        log::info!(
            "q={q} label={}: {last} zeros up to {t}, expected {expected:.2}; refining scan",
            chi.label()
        );
    }
    Err(Error::ZeroSearch(format!(
        "q={q} label={}: found {last} zeros with |γ| ≤ {t}, expected about {expected:.2}",
        chi.label()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith_chars::build_group;

    #[test]
    fn grid_shape() {
        let o = FinderOptions::default();
        let g = scan_grid(50.5, &o, 0);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 50.5);
        assert_eq!(g.len(), 5001 + 500);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(scan_grid(0.015, &o, 0), vec![0.0, 0.01, 0.015]);
    }

    #[test]
    fn zeta_small_heights() {
        let zeta = build_group(1).unwrap().principal();
        assert!(find_zeros(&zeta, 10.0).unwrap().zeros().is_empty());
        let zs = find_zeros(&zeta, 30.0).unwrap();
        let pos: Vec<f64> = zs.zeros().iter().map(|z| z.gamma).filter(|&g| g > 0.0).collect();
        let expected = [14.134_725_141_734_693, 21.022_039_638_771_555, 25.010_857_580_145_688];
        assert_eq!(pos.len(), 3);
        for (g, e) in pos.iter().zip(expected) {
            assert!((g - e).abs() < 1e-7, "{g} vs {e}");
        }
        assert_eq!(zs.zeros().len(), 6);
    }

    #[test]
    fn caps_and_trivial_cases() {
        let chi3 = build_group(3).unwrap().from_label(2).unwrap();
        assert!(find_zeros(&chi3, 0.0).unwrap().zeros().is_empty());
        let chi0 = build_group(4).unwrap().principal();
        assert!(matches!(find_zeros(&chi0, 10.0), Err(Error::Imprimitive { .. })));
        let chi23 = build_group(23).unwrap().from_label(22).unwrap();
        assert!(matches!(find_zeros(&chi23, 10.0), Err(Error::ModulusTooLarge { .. })));
        assert!(matches!(find_zeros(&chi3, 151.0), Err(Error::BeyondHeight { .. })));
    }

    #[test]
    fn complex_character_zeros_mirror_conjugate() {
        let g = build_group(5).unwrap();
        let chi = g.from_label(2).unwrap();
        let a = find_zeros(&chi, 30.0).unwrap();
        let b = find_zeros(&chi.conj(), 30.0).unwrap();
        let mut ra: Vec<f64> = a.zeros().iter().map(|z| -z.gamma).collect();
        ra.reverse();
        let gb: Vec<f64> = b.zeros().iter().map(|z| z.gamma).collect();
        assert_eq!(ra.len(), gb.len());
        for (x, y) in ra.iter().zip(&gb) {
            assert!((x - y).abs() < 1e-7);
        }
    }
}
