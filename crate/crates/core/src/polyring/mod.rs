//! Coefficient fields and sparse multivariate polynomials.

pub mod field;
pub mod gf2x;
pub mod monomial;
pub mod parse;
pub mod poly;

pub use field::{format_binary, sqrt_char2, BinaryField, Field, FieldElement, Scalar};
pub use gf2x::MAX_DEGREE as MAX_EXT_DEGREE;
pub use monomial::{Monomial, MonomialOrder, MAX_VARS};
pub use parse::{parse_poly, print_poly};
pub use poly::{lift_reduce, poly_arith, ArithOp, Polynomial, Ring};
