//! Numerical laboratory for localization systems on finite lattices.
//!
//! The crate builds sharp, unsharp and number-operator localization systems
//! on periodic lattices, checks the standard causality and covariance
//! conditions numerically, and runs theorem-level experiments whose
//! outcomes are recorded with concrete witnesses.

pub mod opkernel;
pub mod spacetime;
pub mod modelzoo;
pub mod axioms;
pub mod nogo;

pub use opkernel::{
    apply_spectral_function, classify, commutator_norm, eig_hermitian, lattice_join, lattice_meet,
    tensor_product, ClassReport, KernelError, OpClass, Operator, SpectralDecomposition, StateVector,
};
