//! Exact calculus for volume densities of fully augmented links.

pub mod approx;
pub mod calculus;
pub mod bounds;
pub mod catalog;
pub mod error;
pub mod numerics;

pub use error::{Error, Result};
