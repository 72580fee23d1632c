//! Exact coefficient arithmetic: Gaussian rationals, sparse multivariate
//! polynomials, their fraction field, and the cylinder extension by a formal
//! exponential generator.

mod field;
mod gaussian;
mod matrix;
mod poly;

pub use field::{Ring, RingOp, ScalarField, EXP_NAME};
pub use gaussian::GaussianRational;
pub use matrix::Matrix;
pub use poly::{gcd, Monomial, Poly};
