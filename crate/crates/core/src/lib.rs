//! Exact algebra for certifying singularities of inseparable double covers
//! in characteristic 2 and smoothness of their characteristic-0 lifts.

pub mod classify;
pub mod error;
pub mod geometry;
pub mod groebner;
pub mod pipeline;
pub mod polyring;
pub mod solve;

pub use error::{Error, Result};
