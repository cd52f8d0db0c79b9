//! Polynomial and module arithmetic over a field.

pub mod groebner;
pub mod linalg;
pub mod module;
pub mod monomial;
pub mod poly;
pub mod scalar;
pub mod syzygy;
