//! Exact-arithmetic toolkit for finite-dimensional curved L∞-algebras,
//! L∞-modules, Maurer–Cartan twisting and resolutions of modules.
//!
//! All degrees are degrees in the shifted space `L[1]`. Completeness of the
//! filtration is modelled by nilpotency: every space declares an order `N`
//! with `F^N = 0`, and symmetric words of total weight `>= N` vanish.

pub mod cech;
pub mod error;
pub mod graded;
pub mod homology;
pub mod linalg;
pub mod linfty;
pub mod modules;
pub mod product;
pub mod random;
pub mod resolution;
pub mod scalar;
pub mod sym;
pub mod twisting;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use graded::{koszul_sign, shuffles, Element, Generator, GradedSpace, LinearMap, Sign, Word};
pub use linfty::{LInftyMorphism, LInftyStructure};
pub use scalar::Scalar;
pub use sym::SymElement;
