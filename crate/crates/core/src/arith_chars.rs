//! Dirichlet characters modulo `q`.
//!
//! The unit group `(Z/qZ)*` is split by CRT into prime-power components. Odd
//! prime powers are cyclic; we use the smallest primitive root mod `p` that is
//! also primitive mod `p²`, which is the generator convention behind Conrey
//! labels. The 2-power part is `<-1>` for `4 | q` plus `<5>` for `8 | q`.
//!
//! A character is identified by its exponent vector `e`, with
//! `χ(g_i) = e(e_i / ord_i)`. Values are kept as exact fractions of a full turn
//! and rendered to complex numbers on demand.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{root_of_unity, Real};
use crate::summation::ComplexNeumaier;

pub const DEFAULT_MODULUS_CAP: u64 = 1_000_000;

const NOT_COPRIME: u32 = u32::MAX;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(q: u64) -> u64 {
    assert!(q >= 1, "euler_phi needs q >= 1");
    factorize(q)
        .into_iter()
        .fold(q, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(q: u64) -> i8 {
    assert!(q >= 1, "mobius needs q >= 1");
    let f = factorize(q);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` (requires `gcd(a, m) = 1`).
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

fn is_primitive_root(g: u64, p: u64, factors_of_p_minus_1: &[(u64, u32)]) -> bool {
    factors_of_p_minus_1
        .iter()
        .all(|&(r, _)| pow_mod(g, (p - 1) / r, p) != 1)
}

/// Smallest primitive root mod `p` that is also a primitive root mod `p²`.
fn conrey_generator(p: u64) -> u64 {
    let f = factorize(p - 1);
    let p2 = p * p;
    (2..p)
        .find(|&g| is_primitive_root(g, p, &f) && pow_mod(g, p - 1, p2) != 1)
        .expect("odd primes have a primitive root lifting to p^2")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    /// Cyclic group mod an odd prime power.
    Cyclic,
    /// The `<-1>` factor of the 2-part.
    MinusOne,
    /// The `<5>` factor of the 2-part (`8 | q`).
    Five,
}

#[derive(Clone, Debug)]
pub struct Component {
    pub prime: u64,
    pub exponent: u32,
    /// `p^e`, the CRT factor this component lives in.
    pub prime_power: u64,
    /// Generator as a residue mod `p^e`.
    pub local_generator: u64,
    /// Generator lifted to `q` (≡ 1 modulo the other CRT factors).
    pub generator: u64,
    pub order: u64,
    pub kind: ComponentKind,
}

#[derive(Debug)]
struct GroupData {
    q: u64,
    factors: Vec<(u64, u32)>,
    components: Vec<Component>,
    /// Mixed-radix exponent index per residue, `NOT_COPRIME` off the group.
    dlog: Vec<u32>,
    phi: u64,
    /// Exponent of the group (lcm of component orders).
    exponent: u64,
}

/// The unit group `(Z/qZ)*` with generators and a discrete-log table.
#[derive(Clone, Debug)]
pub struct CharacterGroup {
    inner: Arc<GroupData>,
}

fn crt_lift(local: u64, prime_power: u64, q: u64) -> u64 {
    let rest = q / prime_power;
    if rest == 1 {
        return local % q;
    }
    // x ≡ local (mod p^e), x ≡ 1 (mod rest), via the CRT idempotents.
    let e1 = mul_mod(
        rest,
        inv_mod(rest % prime_power, prime_power).expect("coprime CRT factors"),
        q,
    );
    let e2 = mul_mod(
        prime_power,
        inv_mod(prime_power % rest, rest).expect("coprime CRT factors"),
        q,
    );
    (mul_mod(local % prime_power, e1, q) + e2) % q
}

/// Builds the unit group with the default modulus cap.
pub fn build_group(q: u64) -> Result<CharacterGroup> {
    build_group_capped(q, DEFAULT_MODULUS_CAP)
}

pub fn build_group_capped(q: u64, cap: u64) -> Result<CharacterGroup> {
    if q == 0 {
        return Err(Error::ZeroModulus);
    }
    if q > cap {
        return Err(Error::ModulusTooLarge { q, cap });
    }
    let factors = factorize(q);
    let mut components = Vec::new();
    for &(p, e) in &factors {
        let pe = p.pow(e);
        if p == 2 {
            if e >= 2 {
                let g = pe - 1;
                components.push(Component {
                    prime: 2,
                    exponent: e,
                    prime_power: pe,
                    local_generator: g,
                    generator: crt_lift(g, pe, q),
                    order: 2,
                    kind: ComponentKind::MinusOne,
                });
            }
            if e >= 3 {
                components.push(Component {
                    prime: 2,
                    exponent: e,
                    prime_power: pe,
                    local_generator: 5,
                    generator: crt_lift(5, pe, q),
                    order: pe / 4,
                    kind: ComponentKind::Five,
                });
            }
        } else {
            let g = conrey_generator(p) % pe;
            components.push(Component {
                prime: p,
                exponent: e,
                prime_power: pe,
                local_generator: g,
                generator: crt_lift(g, pe, q),
                order: pe / p * (p - 1),
                kind: ComponentKind::Cyclic,
            });
        }
    }

    let phi = euler_phi(q);
    let mut dlog = vec![NOT_COPRIME; q as usize];
    // Residue list in mixed-radix order: index = Σ k_i · Π_{j<i} ord_j.
    let mut residues: Vec<u64> = vec![1 % q];
    for c in &components {
        let mut next = Vec::with_capacity(residues.len() * c.order as usize);
        let mut power = 1 % q;
        for _ in 0..c.order {
            next.extend(residues.iter().map(|&r| mul_mod(r, power, q)));
            power = mul_mod(power, c.generator, q);
        }
        residues = next;
    }
    debug_assert_eq!(residues.len() as u64, phi);
    for (idx, &r) in residues.iter().enumerate() {
        debug_assert_eq!(dlog[r as usize], NOT_COPRIME, "generators must be independent");
        dlog[r as usize] = idx as u32;
    }
    let exponent = components.iter().fold(1, |acc, c| lcm(acc, c.order));
    Ok(CharacterGroup {
        inner: Arc::new(GroupData { q, factors, components, dlog, phi, exponent }),
    })
}

impl CharacterGroup {
    pub fn modulus(&self) -> u64 {
        self.inner.q
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.inner.factors
    }

    pub fn components(&self) -> &[Component] {
        &self.inner.components
    }

    pub fn order(&self) -> u64 {
        self.inner.phi
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.phi == 1
    }

    /// Exponent vector of a unit, `None` when `gcd(n, q) > 1`.
    pub fn discrete_log(&self, n: i64) -> Option<Vec<u64>> {
        let r = n.rem_euclid(self.inner.q as i64) as usize;
        let idx = self.inner.dlog[r];
        (idx != NOT_COPRIME).then(|| self.unpack(idx as u64))
    }

    fn unpack(&self, mut idx: u64) -> Vec<u64> {
        self.inner
            .components
            .iter()
            .map(|c| {
                let k = idx % c.order;
                idx /= c.order;
                k
            })
            .collect()
    }

    /// `Π g_i^{k_i} mod q`.
    pub fn exponentiate(&self, exps: &[u64]) -> u64 {
        let q = self.inner.q;
        self.inner
            .components
            .iter()
            .zip(exps)
            .fold(1 % q, |acc, (c, &k)| mul_mod(acc, pow_mod(c.generator, k, q), q))
    }

    /// Character with the given exponent vector (reduced mod component orders).
    pub fn character(&self, exps: &[u64]) -> Result<DirichletCharacter> {
        let comps = &self.inner.components;
        if exps.len() != comps.len() {
            return Err(Error::InvalidArgument(format!(
                "exponent vector of length {} for a group with {} components",
                exps.len(),
                comps.len()
            )));
        }
        let exps: Vec<u64> = exps.iter().zip(comps).map(|(&e, c)| e % c.order).collect();
        Ok(DirichletCharacter::new(self.clone(), exps))
    }

    pub fn principal(&self) -> DirichletCharacter {
        DirichletCharacter::new(self.clone(), vec![0; self.inner.components.len()])
    }

    /// Character with Conrey label `label` (a unit mod `q`).
    pub fn from_label(&self, label: u64) -> Result<DirichletCharacter> {
        let q = self.inner.q;
        let exps = self
            .discrete_log(label as i64)
            .filter(|_| label >= 1 && (label < q || q == 1 && label == 1))
            .ok_or(Error::BadLabel { label, q })?;
        self.character(&exps)
    }
}

/// All `φ(q)` characters, in mixed-radix order of their exponent vectors.
pub fn characters(group: &CharacterGroup) -> Vec<DirichletCharacter> {
    (0..group.order())
        .map(|idx| DirichletCharacter::new(group.clone(), group.unpack(idx)))
        .collect()
}

/// Local conductor exponent of a component character.
fn local_conductor(c: &Component, e: u64) -> u64 {
    if e == 0 {
        return 1;
    }
    let d = c.order / gcd(e, c.order);
    match c.kind {
        ComponentKind::Cyclic => {
            let mut v = 0;
            let mut t = d;
            while t % c.prime == 0 {
                t /= c.prime;
                v += 1;
            }
            c.prime.pow(1 + v)
        }
        // Handled jointly below.
        ComponentKind::MinusOne | ComponentKind::Five => unreachable!(),
    }
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: CharacterGroup,
    exponents: Vec<u64>,
    order: u64,
    conductor: u64,
    /// `χ(n mod q) = e(turns[n] / order)`; `NOT_COPRIME` where χ vanishes.
    turns: Arc<[u32]>,
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("q", &self.modulus())
            .field("label", &self.label())
            .field("order", &self.order)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus() == other.modulus() && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    fn new(group: CharacterGroup, exponents: Vec<u64>) -> Self {
        let data = &group.inner;
        let comps = &data.components;
        let order = comps
            .iter()
            .zip(&exponents)
            .fold(1, |acc, (c, &e)| lcm(acc, c.order / gcd(e, c.order)));

        let mut conductor = 1u64;
        let mut two_minus = 0u64;
        let mut two_five: Option<(u64, u64)> = None;
        for (c, &e) in comps.iter().zip(&exponents) {
            match c.kind {
                ComponentKind::Cyclic => conductor *= local_conductor(c, e),
                ComponentKind::MinusOne => two_minus = e,
                ComponentKind::Five => two_five = Some((e, c.order)),
            }
        }
        let two_part = match two_five {
            Some((e, ord)) if e != 0 => {
                let d = ord / gcd(e, ord);
                4 * d
            }
            _ if two_minus != 0 => 4,
            _ => 1,
        };
        conductor *= two_part;

        // Exponent index into the full-turn fractions, reduced to the character order.
        let m = data.exponent;
        let weights: Vec<u64> = comps
            .iter()
            .zip(&exponents)
            .map(|(c, &e)| e * (m / c.order))
            .collect();
        let scale = m / order;
        let turns: Vec<u32> = data
            .dlog
            .iter()
            .map(|&idx| {
                if idx == NOT_COPRIME {
                    return NOT_COPRIME;
                }
                let mut idx = idx as u64;
                let mut t = 0u64;
                for (c, &w) in comps.iter().zip(&weights) {
                    let k = idx % c.order;
                    idx /= c.order;
                    t = (t + mul_mod(k, w, m)) % m;
                }
                debug_assert_eq!(t % scale, 0);
                (t / scale) as u32
            })
            .collect();
        Self { group, exponents, order, conductor, turns: turns.into() }
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn group(&self) -> &CharacterGroup {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus()
    }

    /// `a` with `χ(-1) = (-1)^a`.
    pub fn parity(&self) -> u8 {
        match self.turn(-1) {
            Some((0, _)) | None => 0,
            Some(_) => 1,
        }
    }

    /// Conrey label: the unit whose exponent vector equals this character's.
    pub fn label(&self) -> u64 {
        self.group.exponentiate(&self.exponents).max(1)
    }

    pub fn conj(&self) -> DirichletCharacter {
        let exps: Vec<u64> = self
            .group
            .components()
            .iter()
            .zip(&self.exponents)
            .map(|(c, &e)| (c.order - e) % c.order)
            .collect();
        DirichletCharacter::new(self.group.clone(), exps)
    }

    /// The primitive character mod the conductor that induces this one.
    pub fn primitive(&self) -> Result<DirichletCharacter> {
        if self.is_primitive() {
            return Ok(self.clone());
        }
        let q = self.modulus();
        let group = build_group(self.conductor)?;
        characters(&group)
            .into_iter()
            .find(|psi| {
                (1..q as i64).all(|n| match (self.turn(n), psi.turn(n)) {
                    (Some((a, da)), Some((b, db))) => a * db == b * da,
                    (None, _) => true,
                    (Some(_), None) => false,
                })
            })
            .ok_or_else(|| Error::InvalidArgument(format!("no inducing character for label {}", self.label())))
    }

    /// Exact value as a fraction `num/den` of a full turn; `None` if `gcd(n, q) > 1`.
    pub fn turn(&self, n: i64) -> Option<(u64, u64)> {
        let r = n.rem_euclid(self.modulus() as i64) as usize;
        let t = self.turns[r];
        (t != NOT_COPRIME).then_some((t as u64, self.order))
    }

    /// `χ(n)`.
    pub fn eval<S: Real>(&self, n: i64) -> Complex<S> {
        match self.turn(n) {
            Some((num, den)) => root_of_unity(num, den),
            None => Complex::new(S::zero(), S::zero()),
        }
    }

    pub fn eval_u64<S: Real>(&self, n: u64) -> Complex<S> {
        self.eval((n % self.modulus()) as i64)
    }

    /// Values `χ(0), …, χ(q-1)` rendered once, for hot loops.
    pub fn value_table<S: Real>(&self) -> Vec<Complex<S>> {
        let roots: Vec<Complex<S>> = (0..self.order).map(|k| root_of_unity(k, self.order)).collect();
        self.turns
            .iter()
            .map(|&t| {
                if t == NOT_COPRIME {
                    Complex::new(S::zero(), S::zero())
                } else {
                    roots[t as usize]
                }
            })
            .collect()
    }
}

/// `τ(χ) = Σ_{b mod q} χ(b) e(b/q)`, summed directly.
pub fn gauss_sum<S: Real>(chi: &DirichletCharacter) -> Complex<S> {
    let q = chi.modulus();
    let mut acc = ComplexNeumaier::new();
    for b in 0..q {
        if let Some((num, den)) = chi.turn(b as i64) {
            // χ(b)e(b/q) = e((num·q + b·den) / (den·q)), exact before rendering.
            let d = den * q;
            acc.add(root_of_unity::<S>((num * q + b * den) % d, d));
        }
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_phi(q: u64) -> u64 {
        (1..=q).filter(|&a| gcd(a, q) == 1).count() as u64
    }

    #[test]
    fn phi_and_mobius_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), brute_phi(12));
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(30), -1);
        for q in 1..500 {
            assert_eq!(euler_phi(q), brute_phi(q));
        }
    }

    #[test]
    fn group_rejects_bad_moduli() {
        assert!(matches!(build_group(0), Err(Error::ZeroModulus)));
        assert!(matches!(
            build_group(DEFAULT_MODULUS_CAP + 1),
            Err(Error::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn small_groups_have_expected_shape() {
        let g1 = build_group(1).unwrap();
        assert!(g1.is_trivial());
        assert_eq!(g1.order(), 1);
        assert!(build_group(2).unwrap().is_trivial());

        let g8 = build_group(8).unwrap();
        let orders: Vec<u64> = g8.components().iter().map(|c| c.order).collect();
        assert_eq!(orders, vec![2, 2]);
        assert_eq!(g8.components()[0].generator, 7);
        assert_eq!(g8.components()[1].generator, 5);
        assert_eq!(g8.order(), 4);

        let g15 = build_group(15).unwrap();
        let moduli: Vec<u64> = g15.components().iter().map(|c| c.prime_power).collect();
        assert_eq!(moduli, vec![3, 5]);
        assert_eq!(g15.order(), 8);
    }

    #[test]
    fn discrete_log_round_trips() {
        for q in 1..=200u64 {
            let g = build_group(q).unwrap();
            let prod: u64 = g.components().iter().map(|c| c.order).product();
            assert_eq!(prod, g.order(), "q={q}");
            for a in 0..q {
                match g.discrete_log(a as i64) {
                    Some(v) => assert_eq!(g.exponentiate(&v), a % q),
                    None => assert!(gcd(a, q) > 1),
                }
            }
        }
    }

    #[test]
    fn generators_follow_conrey_convention() {
        assert_eq!(conrey_generator(5), 2);
        assert_eq!(conrey_generator(7), 3);
        for p in [3u64, 5, 7, 11, 13, 29, 31, 37, 101, 487] {
            let g = conrey_generator(p);
            let ord = (1..=p * (p - 1)).find(|&k| pow_mod(g, k, p * p) == 1).unwrap();
            assert_eq!(ord, p * (p - 1), "p={p}");
        }
    }

    #[test]
    fn principal_and_quadratic_values() {
        let g3 = build_group(3).unwrap();
        assert_eq!(g3.principal().eval::<f64>(7), Complex::new(1.0, 0.0));
        let g6 = build_group(6).unwrap();
        for chi in characters(&g6) {
            assert_eq!(chi.eval::<f64>(4), Complex::new(0.0, 0.0));
        }
        let g5 = build_group(5).unwrap();
        let quad: Vec<_> = characters(&g5)
            .into_iter()
            .filter(|c| c.order() == 2)
            .collect();
        assert_eq!(quad.len(), 1);
        let v = quad[0].eval::<f64>(2);
        assert!((v.re + 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert_eq!(quad[0].label(), 4);
    }

    #[test]
    fn conductor_matches_brute_force() {
        fn brute(chi: &DirichletCharacter) -> u64 {
            let q = chi.modulus();
            (1..=q)
                .filter(|d| q % d == 0)
                .find(|&d| {
                    (1..q).filter(|&a| gcd(a, q) == 1).all(|a| {
                        (1..q)
                            .filter(|&b| gcd(b, q) == 1 && (b + q - a) % d == 0)
                            .all(|b| chi.turn(a as i64) == chi.turn(b as i64))
                    })
                })
                .unwrap()
        }
        for q in 1..=64 {
            for chi in characters(&build_group(q).unwrap()) {
                assert_eq!(chi.conductor(), brute(&chi), "q={q} label={}", chi.label());
            }
        }
    }

    #[test]
    fn labels_are_a_bijection() {
        let g5 = build_group(5).unwrap();
        let mut labels: Vec<u64> = characters(&g5).iter().map(|c| c.label()).collect();
        labels.sort_unstable();
        assert_eq!(labels, vec![1, 2, 3, 4]);
        for q in 1..=50 {
            let g = build_group(q).unwrap();
            for chi in characters(&g) {
                let l = chi.label();
                assert_eq!(g.from_label(l).unwrap(), chi);
                if chi.is_principal() {
                    assert_eq!(l, 1);
                }
            }
        }
        assert!(matches!(build_group(6).unwrap().from_label(3), Err(Error::BadLabel { .. })));
    }

    #[test]
    fn conrey_pairing_is_symmetric() {
        // χ_n(m) = χ_m(n) characterises Conrey labels.
        for q in [5u64, 8, 9, 12, 16, 21, 25, 40] {
            let g = build_group(q).unwrap();
            for n in (1..q).filter(|&n| gcd(n, q) == 1) {
                let chin = g.from_label(n).unwrap();
                for m in (1..q).filter(|&m| gcd(m, q) == 1) {
                    let chim = g.from_label(m).unwrap();
                    let a: Complex<f64> = chin.eval(m as i64);
                    let b: Complex<f64> = chim.eval(n as i64);
                    assert!((a - b).norm() < 1e-12, "q={q} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        let g4 = build_group(4).unwrap();
        assert!(gauss_sum::<f64>(&g4.principal()).norm() < 1e-12);
        let g1 = build_group(1).unwrap();
        assert!((gauss_sum::<f64>(&g1.principal()) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let quad = build_group(5).unwrap().from_label(4).unwrap();
        let tau = gauss_sum::<f64>(&quad);
        // Direct four-term sum with Legendre signs (1, -1, -1, 1).
        let direct: Complex<f64> = [(1, 1.0), (2, -1.0), (3, -1.0), (4, 1.0)]
            .iter()
            .map(|&(b, s)| {
                let a = std::f64::consts::TAU * b as f64 / 5.0;
                Complex::new(s * a.cos(), s * a.sin())
            })
            .sum();
        assert!((tau - direct).norm() < 1e-13);
        assert!((tau.re - 5f64.sqrt()).abs() < 1e-13 && tau.im.abs() < 1e-13);
    }

    #[test]
    fn parity_and_conjugation() {
        for q in 3..=40 {
            for chi in characters(&build_group(q).unwrap()) {
                let m1: Complex<f64> = chi.eval(-1);
                let expected = if chi.parity() == 0 { 1.0 } else { -1.0 };
                assert!((m1.re - expected).abs() < 1e-14);
                let c = chi.conj();
                assert_eq!(c.conj(), chi);
                assert_eq!(c.label(), inv_mod(chi.label(), q).unwrap());
                for n in 0..q as i64 {
                    let a: Complex<f64> = chi.eval(n);
                    let b: Complex<f64> = c.eval(n);
                    assert!((a.conj() - b).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn primitive_inducing_character() {
        let chi0 = build_group(4).unwrap().principal();
        let p = chi0.primitive().unwrap();
        assert_eq!((p.modulus(), p.label()), (1, 1));
        for q in 2..=40 {
            for chi in characters(&build_group(q).unwrap()) {
                let p = chi.primitive().unwrap();
                assert!(p.is_primitive());
                assert_eq!(p.modulus(), chi.conductor());
                for n in 1..q as i64 {
                    if gcd(n as u64, q) == 1 {
                        let a: Complex<f64> = chi.eval(n);
                        let b: Complex<f64> = p.eval(n);
                        assert!((a - b).norm() < 1e-14);
                    }
                }
            }
        }
    }
}
