//! Exact cohomology calculator for blow-ups, projective bundles and products.
//!
//! Rings are given by rational structure constants on labeled bases. Support
//! flavors (closed, compact, twisted) are modules over the closed ring. The
//! blow-up constructor produces the full ring of the blow-up together with
//! the maps relating it to the ambient space, the center and the exceptional
//! divisor, and the double complex module computes row, column, Bott-Chern,
//! Aeppli and total cohomology of finite double complexes.

pub mod blowup;
pub mod bundle;
pub mod catalog;
pub mod double_complex;
pub mod error;
pub mod graded;
pub mod gysin;
pub mod linalg;
pub mod report;
pub mod spaces;

pub use error::{Error, Result};
