//! Exact classification and invariants of Calabi-Yau threefolds fibred by
//! mirror-quartic (M2-polarized) K3 surfaces, computed from the branching
//! data of the generalized functional invariant map `g: P¹ → P¹`.
//!
//! The linear algebra and polynomial layers are generic over a
//! [`scalar::Scalar`]; the rest of the crate uses the exact aliases below.

pub mod cli;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod hodge;
pub mod hurwitz;
pub mod lattice;
pub mod linalg;
pub mod monodromy;
pub mod poly;
pub mod profile;
pub mod roots;
pub mod scalar;
pub mod selftest;
pub mod transitions;

pub use error::{Error, Result};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Dense matrix over exact rationals; carrier for monodromy computations.
pub type ExactMatrix = linalg::Matrix<Rational>;
/// Dense matrix over arbitrary-precision integers; Gram matrices and SNF.
pub type IntMatrix = linalg::Matrix<Integer>;
/// Floating point matrix, for comparisons against the exact path only.
pub type FloatMatrix = linalg::Matrix<f64>;
/// Univariate polynomial with exact rational coefficients.
pub type RationalPoly = poly::Polynomial<Rational>;
