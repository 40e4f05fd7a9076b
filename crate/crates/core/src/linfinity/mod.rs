//! Finite-dimensional L∞-algebras by structure constants.

pub mod cocycle;
pub mod combinatorics;
pub mod data;
pub mod homology;
pub mod jacobi;
pub mod morphism;

pub use cocycle::{coboundary, is_cocycle, string_extension, LieCocycle};
pub use data::{abelian, su2, verify_l_infinity, Generator, LElem, LInfinityData};
pub use homology::{homology, ChainComplex, Homology};
pub use jacobi::{jacobi_report, jacobi_residual, BracketAlgebra, JacobiEntry, JacobiReport};
pub use morphism::{symmetric_jacobi_residual, verify_morphism, MorphismComponents, MorphismReport};
