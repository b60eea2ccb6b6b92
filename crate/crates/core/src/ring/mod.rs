//! Exact phase-space algebra: Laurent polynomials in the generators with a
//! Poisson bracket defined on generators and extended by the Leibniz rule.
//!
//! `x_j` never appears bare. Its exponential `u_j = e^{x_j}` is a Laurent
//! generator and `{X_j, u_k} = δ_jk u_k` encodes the canonical pair.

mod element;
mod fraction;
mod generator;
mod poisson;

pub use element::{integer, rational, Coeff, Monomial, RingElement};
pub use fraction::Fraction;
pub use generator::{Generator, GeneratorKind, Param, Spectral};
pub use poisson::PoissonStructure;
