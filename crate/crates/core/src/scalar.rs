//! Scalar abstraction shared by the floating-point parts of the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; constants and parameters enter through here.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Real")
    }

    fn of_u64(v: u64) -> Self {
        Self::from_u64(v).expect("u64 is representable in every Real")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `exp(2πi·turns)`.
pub fn cis_turns<S: Real>(turns: S) -> Complex<S> {
    let angle = S::TAU() * turns;
    Complex::new(angle.cos(), angle.sin())
}

/// `e(num/den) = exp(2πi·num/den)` with the fraction reduced before conversion.
pub fn root_of_unity<S: Real>(num: u64, den: u64) -> Complex<S> {
    debug_assert!(den > 0);
    let num = num % den;
    // Fold into (-1/2, 1/2] so the angle passed to sin/cos stays small.
    let (n, neg) = if 2 * num > den { (den - num, true) } else { (num, false) };
    let z = if 2 * n == den {
        Complex::new(-S::one(), S::zero())
    } else if 4 * n == den {
        Complex::new(S::zero(), S::one())
    } else {
        cis_turns(S::of_u64(n) / S::of_u64(den))
    };
    if neg {
        z.conj()
    } else {
        z
    }
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub fn expm1_complex<S: Real>(z: Complex<S>) -> Complex<S> {
    let two = S::of(2.0);
    let half = z.im / two;
    let s = half.sin();
    let re = z.re.exp_m1() * z.im.cos() - two * s * s;
    let im = z.re.exp() * z.im.sin();
    Complex::new(re, im)
}
