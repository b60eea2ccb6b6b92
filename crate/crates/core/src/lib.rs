//! Symbolic-numeric toolkit for classical integrable lattices with open
//! boundaries.
//!
//! The crate starts from an ultralocal Poisson algebra of a Lax matrix and two
//! (possibly dynamical) boundary matrices, builds the double-row transfer
//! matrix, extracts a Hamiltonian from its spectral expansion, and constructs
//! the time part of the Lax pair through a boundary partial-trace formula.
//! Every algebraic identity is checked exactly over rational coefficients;
//! the [`dynamics`] module then integrates the resulting flows numerically.

pub mod checks;
pub mod double_row;
pub mod dynamics;
pub mod error;
pub mod ring;
pub mod spectral;
pub mod toda;

pub use error::{Error, Result};
