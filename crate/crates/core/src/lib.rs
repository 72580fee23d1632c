//! Exact verification of generalized complex, Kähler, contact and Sasakian
//! structures given by polynomial tensor data on a coordinate chart.

pub mod calculus;
pub mod contact;
pub mod error;
pub mod gcx;
pub mod ghk;
pub mod scalar;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;
