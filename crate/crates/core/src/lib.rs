//! Positive positive-definite functions and measures on finite abelian
//! groups, with numeric probes for Gaussians on `R^n`.

pub mod cone;
pub mod constructions;
pub mod cyclotomic;
pub mod fourier;
pub mod error;
pub mod gaussian;
pub mod group;
pub mod io;
pub mod linalg;
pub mod ppd;
pub mod sample;
pub mod scalar;

pub use cyclotomic::Cyclotomic;
pub use error::{Error, Result};
pub use group::{FiniteAbelianGroup, GroupElement, Homomorphism, QuotientGroup, Subgroup};
pub use scalar::{Mode, Scalar};
