//! Logarithmic tangent modules of hyperplane arrangements: freeness, stable freeness,
//! intersection lattices and sheaf cohomology tables over exact fields.

pub mod algebra;
pub mod arrangement;
pub mod classifier;
pub mod cohomology;
pub mod error;
pub mod harness;
pub mod hilbert;
pub mod lattice;
pub mod resolution;

pub use algebra::groebner::Budget;
pub use algebra::module::{FreeModule, GradedMap, ModElem};
pub use algebra::monomial::Monomial;
pub use algebra::poly::Poly;
pub use algebra::scalar::{Field, Fp};
pub use error::{Error, Result};

/// Exact rationals.
pub type Rational = num_rational::BigRational;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
pub type F32003 = Fp<32003>;
/// Polynomials with rational coefficients.
pub type QPoly = Poly<Rational>;
