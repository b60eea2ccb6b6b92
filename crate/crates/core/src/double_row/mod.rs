//! Monodromies, single- and double-row transfer matrices, Hamiltonian
//! extraction, and the partial-trace formulas for the time part of the Lax
//! pair, together with exact verifiers for the zero-curvature identities
//! they satisfy.

mod monodromy;
mod single_row;
mod transfer;
mod verify;

pub use monodromy::{monodromy, monodromy_inverse, Monodromy};
pub use single_row::{single_row_transfer, sts_matrix, verify_single_row};
pub use transfer::{equal_up_to_constant, extract_hamiltonian, HamiltonianRecipe, TransferExpansion};
pub use verify::{CorollaryData, FlowMatrices};

use crate::error::{Error, Result};
use crate::ring::{PoissonStructure, Spectral};
use crate::spectral::{embed_a, partial_trace_a, swap_legs, LaxFamily, LinearForm, SpectralFunction, SpectralMatrix, SpectralScalar};

/// A bulk Lax family with its two boundary matrices, r-matrix and Poisson structure.
#[derive(Clone, Copy)]
pub struct DoubleRow<'a> {
    pub lax: &'a dyn LaxFamily,
    pub k_minus: &'a dyn SpectralFunction,
    pub k_plus: &'a dyn SpectralFunction,
    pub r: &'a dyn SpectralFunction,
    pub ps: &'a PoissonStructure,
}

/// `tr_a(A_a X_ab B_a)` for 2x2 `A`, `B` and a 4x4 `X`.
pub(crate) fn sandwich_trace(a: &SpectralMatrix, x: &SpectralMatrix, b: &SpectralMatrix) -> Result<SpectralMatrix> {
    partial_trace_a(&(&(&embed_a(a)? * x) * &embed_a(b)?))
}

impl<'a> DoubleRow<'a> {
    pub fn sites(&self) -> usize {
        self.lax.sites()
    }

    fn check_site(&self, j: usize) -> Result<()> {
        let max = self.sites() + 1;
        if j == 0 || j > max {
            return Err(Error::SiteOutOfRange { index: j, max });
        }
        Ok(())
    }

    /// `b(z) = tr(k^+(z) L(z) k^-(z) L(-z)^{-1})`.
    pub fn transfer(&self, arg: LinearForm) -> Result<SpectralScalar> {
        let n = self.sites();
        let l = monodromy(self.lax, n, 1, arg)?.matrix;
        let l_inv = monodromy_inverse(self.lax, n, 1, -arg)?;
        let prod = &(&(&self.k_plus.at(arg) * &l) * &self.k_minus.at(arg)) * &l_inv;
        Ok(prod.trace())
    }

    /// Coefficients of `b(λ)` in powers of `λ`.
    pub fn expansion(&self) -> Result<TransferExpansion> {
        TransferExpansion::from_scalar(&self.transfer(LinearForm::lambda())?, Spectral::Lambda)
    }

    /// The two-partial-trace formula for `𝕄_b(j, lam, mu)`, `j = 1..=N+1`.
    ///
    /// `lam` plays the role of the generating parameter and `mu` that of the
    /// auxiliary one; passing `-μ` for `mu` gives `𝕄(j, λ, -μ)`.
    pub fn boundary_m(&self, j: usize, lam: LinearForm, mu: LinearForm) -> Result<SpectralMatrix> {
        self.check_site(j)?;
        let n = self.sites();
        let kp = self.k_plus.at(lam);
        let km = self.k_minus.at(lam);
        let r_ab = self.r.at(lam - mu);
        let r_ba = swap_legs(&self.r.at(lam + mu))?;

        let upper = monodromy(self.lax, n, j, lam)?.matrix;
        let lower = monodromy(self.lax, j - 1, 1, lam)?.matrix;
        let full_inv_neg = monodromy_inverse(self.lax, n, 1, -lam)?;
        let a1 = &kp * &upper;
        let b1 = &(&lower * &km) * &full_inv_neg;
        let first = sandwich_trace(&a1, &r_ab, &b1)?;

        let full = monodromy(self.lax, n, 1, lam)?.matrix;
        let lower_inv_neg = monodromy_inverse(self.lax, j - 1, 1, -lam)?;
        let upper_inv_neg = monodromy_inverse(self.lax, n, j, -lam)?;
        let a2 = &(&(&kp * &full) * &km) * &lower_inv_neg;
        let second = sandwich_trace(&a2, &r_ba, &upper_inv_neg)?;
        Ok(&first + &second)
    }

    /// `𝕄(j, λ, ±μ)` with the standard variables.
    pub fn boundary_m_standard(&self, j: usize, negate_mu: bool) -> Result<SpectralMatrix> {
        let mu = if negate_mu { -LinearForm::mu() } else { LinearForm::mu() };
        self.boundary_m(j, LinearForm::lambda(), mu)
    }
}
