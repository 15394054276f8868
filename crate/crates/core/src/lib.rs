//! Primes in short intervals and short arithmetic progressions.
//!
//! Dirichlet characters, a segmented sieve, twisted Chebyshev error terms,
//! zeros of Dirichlet L-functions, the truncated explicit formula, the
//! theoretical envelopes, and an experiment harness that compares them.
//!
//! Floating-point code is generic over [`scalar::Real`] (`f32`, `f64`); the
//! aliases below fix the common instantiations. L-function evaluation and
//! zero finding are `f64` only.

pub mod arith_chars;
pub mod error;
pub mod scalar;
pub mod summation;
pub mod prime_sieve;
pub mod chebyshev_delta;
pub mod bound_envelopes;
pub mod lfunc_zeros;
pub mod explicit_formula;
pub mod experiments;

pub use num_complex::Complex64;

pub type EtaProfile64 = bound_envelopes::EtaProfile<f64>;
pub type EtaProfile32 = bound_envelopes::EtaProfile<f32>;
pub type DensityEstimate64 = bound_envelopes::DensityEstimate<f64>;
pub type DensityEstimate32 = bound_envelopes::DensityEstimate<f32>;
pub type ExceptionalZero64 = bound_envelopes::ExceptionalZero<f64>;
pub type DeltaResult64 = chebyshev_delta::DeltaResult<f64>;
pub type DeltaResult32 = chebyshev_delta::DeltaResult<f32>;
pub type Interval64 = chebyshev_delta::Interval<f64>;
pub type FormulaEvaluation64 = explicit_formula::FormulaEvaluation<f64>;
pub type Window64 = explicit_formula::Window<f64>;

pub use error::{Error, Result};
