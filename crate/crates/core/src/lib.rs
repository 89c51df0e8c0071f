//! Numerical criteria for local polynomial convexity of unions of
//! totally-real planes in C^2 and of the CR-singular cubic surfaces
//! `w = p_t(z, z̄)` with `p_t = z²z̄ + t z z̄² + (t²/3) z̄³`.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod certify;
pub mod config;
pub mod convexity;
pub mod error;
pub mod invariants;
pub mod kernel;
pub mod planes;

pub use config::Config;
pub use error::{Error, Result};
pub use kernel::{Complex, ComplexPoly, HermitianPoly, LaurentExpr, RealMatrix2, RootSet};
