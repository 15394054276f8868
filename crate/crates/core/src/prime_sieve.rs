//! Segmented sieve of Eratosthenes over half-open intervals `(lo, hi]`.
//!
//! Odd numbers only, one bit each, in blocks of 2^18 bits. Prime powers
//! `p^k` (k ≥ 2) are enumerated separately from the base primes.

use num_complex::Complex;
use rayon::prelude::*;

use crate::arith_chars::{gcd, DirichletCharacter};
use crate::error::{Error, Result};
use crate::scalar::{root_of_unity, Real};
use crate::summation::ComplexNeumaier;

pub const DEFAULT_SIEVE_CAP: u64 = 1_000_000_000;
pub const BLOCK_BITS: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Weight {
    /// `log p` on primes.
    Theta,
    /// `Λ(n)` on prime powers.
    Psi,
}

impl std::str::FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" | "vartheta" | "ϑ" => Ok(Weight::Theta),
            "psi" | "ψ" => Ok(Weight::Psi),
            other => Err(Error::InvalidArgument(format!("unknown weight '{other}'"))),
        }
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Weight::Theta => "theta",
            Weight::Psi => "psi",
        })
    }
}

/// Twist applied to the weighted prime sum.
#[derive(Clone, Copy, Debug)]
pub enum Kernel<'a> {
    /// `χ(n)`.
    Character(&'a DirichletCharacter),
    /// `e(na/q)`.
    Additive { a: u64, q: u64 },
    /// `[n ≡ a mod q]`.
    Residue { a: u64, q: u64 },
}

impl Kernel<'_> {
    pub fn modulus(&self) -> u64 {
        match *self {
            Kernel::Character(chi) => chi.modulus(),
            Kernel::Additive { q, .. } | Kernel::Residue { q, .. } => q,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Kernel::Character(_) => Ok(()),
            Kernel::Additive { a, q } | Kernel::Residue { a, q } => {
                if q == 0 {
                    Err(Error::ZeroModulus)
                } else if gcd(a % q, q) != 1 {
                    Err(Error::NotCoprime { a, q })
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub n: u64,
    pub p: u64,
    pub k: u32,
}

/// A weighted point of the von Mangoldt function: `Λ(n) = log p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LambdaPoint {
    pub n: u64,
    pub p: u64,
}

impl LambdaPoint {
    pub fn weight<S: Real>(&self) -> S {
        S::of_u64(self.p).ln()
    }
}

#[derive(Clone, Debug)]
pub struct PrimeSegment {
    lo: u64,
    hi: u64,
    primes: Vec<u64>,
    powers: Option<Vec<PrimePower>>,
    block_bits: usize,
}

impl PrimeSegment {
    /// Exclusive lower endpoint.
    pub fn lo(&self) -> u64 {
        self.lo
    }

    /// Inclusive upper endpoint.
    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Prime powers with `k ≥ 2`, `None` if the segment was built without them.
    pub fn prime_powers(&self) -> Option<&[PrimePower]> {
        self.powers.as_deref()
    }

    pub fn block_bits(&self) -> usize {
        self.block_bits
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty() && self.powers.as_ref().is_none_or(|p| p.is_empty())
    }

    /// Points carrying the given weight, sorted by `n`.
    pub fn points(&self, weight: Weight) -> Result<Vec<LambdaPoint>> {
        let primes = self.primes.iter().map(|&p| LambdaPoint { n: p, p });
        match weight {
            Weight::Theta => Ok(primes.collect()),
            Weight::Psi => {
                let powers = self.powers.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("psi weight needs a segment with prime powers".into())
                })?;
                let mut out: Vec<LambdaPoint> = primes
                    .chain(powers.iter().map(|pp| LambdaPoint { n: pp.n, p: pp.p }))
                    .collect();
                out.sort_unstable();
                Ok(out)
            }
        }
    }

    /// Sub-segment `(lo, hi]` of this one.
    pub fn restrict(&self, lo: u64, hi: u64) -> PrimeSegment {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi).max(lo);
        let slice = |v: &[u64]| -> Vec<u64> {
            let a = v.partition_point(|&n| n <= lo);
            let b = v.partition_point(|&n| n <= hi);
            v[a..b].to_vec()
        };
        PrimeSegment {
            lo,
            hi,
            primes: slice(&self.primes),
            powers: self.powers.as_ref().map(|pw| {
                pw.iter().filter(|pp| pp.n > lo && pp.n <= hi).copied().collect()
            }),
            block_bits: self.block_bits,
        }
    }
}

/// Integer endpoints `(lo, hi]` of the signed interval starting at `x` with length `y`.
pub fn interval_bounds(x: u64, y: i64) -> Result<(u64, u64)> {
    let end = x as i128 + y as i128;
    let (lo, hi) = if y >= 0 { (x as i128, end) } else { (end, x as i128) };
    if lo < 0 {
        return Err(Error::RangeTooLarge { lo, hi, cap: DEFAULT_SIEVE_CAP });
    }
    Ok((lo as u64, hi as u64))
}

/// Integer endpoints for real `x`, `y`: `x < n ≤ x + y` iff `⌊x⌋ < n ≤ ⌊x + y⌋`.
pub fn real_interval_bounds<S: Real>(x: S, y: S) -> Result<(u64, u64)> {
    let (a, b) = if y >= S::zero() { (x, x + y) } else { (x + y, x) };
    if !(a.is_finite() && b.is_finite()) || a < S::zero() {
        return Err(Error::InvalidArgument(format!("bad interval x={x}, y={y}")));
    }
    let lo = a.floor().to_u64().ok_or_else(|| Error::InvalidArgument(format!("x={x}")))?;
    let hi = b.floor().to_u64().ok_or_else(|| Error::InvalidArgument(format!("x+y={}", x + y)))?;
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug)]
pub struct Sieve {
    pub cap: u64,
    pub block_bits: usize,
}

impl Default for Sieve {
    fn default() -> Self {
        Self { cap: DEFAULT_SIEVE_CAP, block_bits: BLOCK_BITS }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Plain sieve for the base primes `≤ n`.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

impl Sieve {
    pub fn check_range(&self, lo: u64, hi: u64) -> Result<()> {
        if hi > self.cap {
            return Err(Error::RangeTooLarge { lo: lo as i128, hi: hi as i128, cap: self.cap });
        }
        Ok(())
    }

    /// Primes in `(x, x+y]` for `y > 0`, `(x+y, x]` for `y < 0`.
    pub fn primes_in(&self, x: u64, y: i64) -> Result<PrimeSegment> {
        let (lo, hi) = interval_bounds(x, y)?;
        self.segment(lo, hi, false)
    }

    /// As [`Sieve::primes_in`], plus the prime powers `p^k`, `k ≥ 2`.
    pub fn lambda_points(&self, x: u64, y: i64) -> Result<PrimeSegment> {
        let (lo, hi) = interval_bounds(x, y)?;
        self.segment(lo, hi, true)
    }

    /// Segment over explicit integer endpoints `(lo, hi]`.
    pub fn segment(&self, lo: u64, hi: u64, with_powers: bool) -> Result<PrimeSegment> {
        self.check_range(lo, hi)?;
        let hi = hi.max(lo);
        let base = small_primes(isqrt(hi));
        let primes = self.sieve_range(lo, hi, &base);
        let powers = with_powers.then(|| {
            let mut pw = Vec::new();
            for &p in &base {
                let mut n = p as u128 * p as u128;
                let mut k = 2;
                while n <= hi as u128 {
                    if n > lo as u128 {
                        pw.push(PrimePower { n: n as u64, p, k });
                    }
                    n *= p as u128;
                    k += 1;
                }
            }
            pw.sort_unstable_by_key(|pp| pp.n);
            pw
        });
        Ok(PrimeSegment { lo, hi, primes, powers, block_bits: self.block_bits })
    }

    fn sieve_range(&self, lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
        let mut out = Vec::new();
        if lo < 2 && hi >= 2 {
            out.push(2);
        }
        // Odd candidates n = first + 2i for i in 0..count.
        let first = if lo + 1 <= 3 { 3 } else { (lo + 1) | 1 };
        if first > hi {
            return out;
        }
        let count = ((hi - first) / 2 + 1) as usize;
        let nblocks = count.div_ceil(self.block_bits);
        let odd_base: Vec<u64> = base.iter().copied().filter(|&p| p > 2).collect();
        let blocks: Vec<Vec<u64>> = (0..nblocks)
            .into_par_iter()
            .map(|b| {
                let start_i = b * self.block_bits;
                let len = self.block_bits.min(count - start_i);
                let start = first + 2 * start_i as u64;
                sieve_block(start, len, &odd_base)
            })
            .collect();
        for b in blocks {
            out.extend(b);
        }
        out
    }
}

/// Primes among the odd numbers `start, start+2, …` (`len` of them).
fn sieve_block(start: u64, len: usize, odd_base: &[u64]) -> Vec<u64> {
    let mut bits = vec![0u64; len.div_ceil(64)];
    let end = start + 2 * (len as u64 - 1);
    for &p in odd_base {
        if p * p > end {
            break;
        }
        let mut m = (p * p).max(start.div_ceil(p) * p);
        if m % 2 == 0 {
            m += p;
        }
        let mut i = ((m - start) / 2) as usize;
        while i < len {
            bits[i / 64] |= 1 << (i % 64);
            i += p as usize;
        }
    }
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut free = !word;
        while free != 0 {
            let t = free.trailing_zeros() as usize;
            let i = w * 64 + t;
            if i >= len {
                break;
            }
            let n = start + 2 * i as u64;
            if n > 1 {
                out.push(n);
            }
            free &= free - 1;
        }
    }
    out
}

pub fn primes_in(x: u64, y: i64) -> Result<PrimeSegment> {
    Sieve::default().primes_in(x, y)
}

pub fn lambda_points(x: u64, y: i64) -> Result<PrimeSegment> {
    Sieve::default().lambda_points(x, y)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    use crate::arith_chars::{mul_mod, pow_mod};
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Weighted, twisted sum over a segment.
///
/// `Σ w(n)·k(n)` with `w` = `log p` on primes (ϑ) or `Λ(n)` (ψ), and `k` one of
/// `χ(n)`, `e(na/q)` or `[n ≡ a mod q]`.
pub fn twisted_sum<S: Real>(
    segment: &PrimeSegment,
    kernel: &Kernel<'_>,
    weight: Weight,
) -> Result<Complex<S>> {
    kernel.validate()?;
    let points = segment.points(weight)?;
    Ok(twisted_sum_points(&points, kernel))
}

/// As [`twisted_sum`] over an explicit point list (kernel assumed valid).
pub fn twisted_sum_points<S: Real>(points: &[LambdaPoint], kernel: &Kernel<'_>) -> Complex<S> {
    let mut acc = ComplexNeumaier::new();
    match *kernel {
        Kernel::Character(chi) => {
            let table = chi.value_table::<S>();
            let q = chi.modulus();
            for pt in points {
                let v = table[(pt.n % q) as usize];
                if v.re != S::zero() || v.im != S::zero() {
                    acc.add(v * pt.weight::<S>());
                }
            }
        }
        Kernel::Additive { a, q } => {
            for pt in points {
                let r = ((pt.n % q) as u128 * (a % q) as u128 % q as u128) as u64;
                acc.add(root_of_unity::<S>(r, q) * pt.weight::<S>());
            }
        }
        Kernel::Residue { a, q } => {
            let a = a % q;
            for pt in points.iter().filter(|pt| pt.n % q == a) {
                acc.add(Complex::new(pt.weight::<S>(), S::zero()));
            }
        }
    }
    acc.value()
}
