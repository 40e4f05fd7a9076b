//! Pre-n-plectic forms and the L∞-algebra of their Hamiltonian observables.

pub mod dw;
pub mod kernel;
pub mod observable;
pub mod structure;

pub use dw::{dw_check, DwReport};
pub use kernel::{kernel_complex, KernelComplex};
pub use observable::{
    arity_sign, jacobi_report, ks_cocycle, ks_cocycle_with, l_infty_bracket, l_infty_bracket_with, Observable,
    ObservableAlgebra, ObservableJacobiReport,
};
pub use structure::{
    check_pre_nplectic, hamiltonian_form_of, solve_hamiltonian, HamiltonianPair, HamiltonianSolution, PreNPlectic,
};
