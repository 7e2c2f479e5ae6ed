//! Exact finite-stage computations for inductive limits of
//! `C_0(T_0, M_{2^n})` along threshold maps `chi_s(t) = max{t, s}`, over
//! the unit interval and the Cantor set.
//!
//! The matrix and measure layers are generic over [`Scalar`]; the aliases
//! below fix the exact rational instance used for every certificate.

pub mod corpus;
pub mod dyadic;
pub mod error;
pub mod ideal;
pub mod k0;
pub mod matrix;
pub mod morphism;
pub mod report;
pub mod scalar;
pub mod space;
pub mod step;
pub mod trace;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use space::{DenseSequence, Point, Space, ThresholdMap};
pub use step::StepFunction;

/// Exact rationals, the scalar of every certificate.
pub type Rational = num_rational::BigRational;
pub type RationalMatrix = Matrix<Rational>;
pub type RationalStepFunction = StepFunction<Rational>;
pub type RationalMeasure = trace::AtomicMeasure<Rational>;
pub type RationalTrace = trace::TraceFunctional<Rational>;

/// Floating-point instances, for exploration only.
pub type FloatMatrix = Matrix<f64>;
pub type FloatStepFunction = StepFunction<f64>;

/// Integer combinations of partition indicators: `C_0(Ω_0, Z)`.
pub type K0Element = k0::ClopenCombination<num_bigint::BigInt>;
/// Dyadic combinations of partition indicators: `C_0(Ω_0, Z[1/2])`.
pub type DyadicVector = k0::ClopenCombination<Dyadic>;
