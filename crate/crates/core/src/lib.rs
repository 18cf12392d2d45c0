//! Numerical Hermitean Clifford analysis: the complexified Clifford algebra,
//! Hermitean Dirac operators, Cauchy kernels, surface quadrature, and the
//! boundary operators built from the matrix Hilbert transform.

pub mod circulant;
pub mod clifford;
pub mod error;
pub mod harness;
pub mod hermitean;
pub mod kernels;
pub mod numdiff;
pub mod operators;
pub mod poly;
pub mod surface;

pub use circulant::CirculantPair;
pub use clifford::{BladeIndex, Multivector, VectorR2n};
pub use error::{Error, Result};
