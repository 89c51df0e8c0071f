//! Numeric foundations: complex scalars, 2x2 matrices, polynomials in `z`
//! and `z̄`, Laurent expressions, root finding and winding numbers.

mod matrix;
mod poly;
mod roots;
mod winding;

pub use matrix::{ComplexMatrix2, RealMatrix2};
pub use poly::{ComplexPoly, HermitianPoly, LaurentExpr};
pub use roots::{find_roots, find_roots_with, Root, RootSet};
pub use winding::{sample_circle, winding_number, winding_number_with};

/// Complex scalar. Serializes as `[re, im]`.
pub type Complex = num_complex::Complex64;

pub(crate) fn c64(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub(crate) fn is_finite_c(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
