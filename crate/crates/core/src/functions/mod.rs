//! Test-function spaces: polynomials, trigonometric polynomials, separable
//! bivariate symbols, Chebyshev interpolants, and quadrature rules.

pub mod bivariate;
pub mod cheb;
pub mod poly;
pub mod quadrature;
pub mod trig;

pub use bivariate::SeparableBivariate;
pub use cheb::{indicator_ramp, ChebInterp};
pub use poly::PolyFunction;
pub use quadrature::{gauss_legendre, gauss_legendre_on};
pub use trig::TrigPoly;
