//! Exact symbolic machinery for higher prequantum geometry on flat charts:
//! graded exterior calculus, the higher Poisson bracket L∞-algebra of a
//! pre-n-plectic form, finite-dimensional L∞-algebras, and Čech–Deligne
//! cochains on circles and tori.

pub mod cech;
pub mod conventions;
pub mod error;
pub mod exterior;
pub mod linalg;
pub mod linfinity;
pub mod nplectic;
pub mod runner;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;
