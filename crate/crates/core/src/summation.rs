//! Compensated summation.
//!
//! Sums here run over tens of thousands of `log p` terms; Neumaier's variant of
//! Kahan summation keeps the error independent of the term count.

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier<S> {
    sum: S,
    comp: S,
}

impl<S: Real> Neumaier<S> {
    pub fn new() -> Self {
        Self { sum: S::zero(), comp: S::zero() }
    }

    pub fn add(&mut self, v: S) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> S {
        self.sum + self.comp
    }
}

impl<S: Real> FromIterator<S> for Neumaier<S> {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Neumaier accumulator for complex values (independent real/imaginary parts).
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexNeumaier<S> {
    re: Neumaier<S>,
    im: Neumaier<S>,
}

impl<S: Real> ComplexNeumaier<S> {
    pub fn new() -> Self {
        Self { re: Neumaier::new(), im: Neumaier::new() }
    }

    pub fn add(&mut self, v: Complex<S>) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub fn sub(&mut self, v: Complex<S>) {
        self.re.add(-v.re);
        self.im.add(-v.im);
    }

    pub fn value(&self) -> Complex<S> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<S: Real> FromIterator<Complex<S>> for ComplexNeumaier<S> {
    fn from_iter<I: IntoIterator<Item = Complex<S>>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

pub fn sum<S: Real, I: IntoIterator<Item = S>>(iter: I) -> S {
    iter.into_iter().collect::<Neumaier<S>>().value()
}

pub fn sum_complex<S: Real, I: IntoIterator<Item = Complex<S>>>(iter: I) -> Complex<S> {
    iter.into_iter().collect::<ComplexNeumaier<S>>().value()
}
