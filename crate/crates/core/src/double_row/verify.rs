use rayon::prelude::*;

use super::transfer::{extract_hamiltonian, HamiltonianRecipe, TransferExpansion};
use super::DoubleRow;
use crate::checks::RelationReport;
use crate::error::Result;
use crate::ring::{Fraction, Spectral};
use crate::spectral::{LinearForm, SpectralMatrix, SpectralScalar};

/// `𝕄(j, ·, μ)` for `j = 1..=N+1`, plus the two reflected ends `𝕄(1, ·, -μ)` and `𝕄(N+1, ·, -μ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowMatrices {
    pub forward: Vec<SpectralMatrix>,
    pub first_reflected: SpectralMatrix,
    pub last_reflected: SpectralMatrix,
}

impl FlowMatrices {
    /// `𝕄(j, μ)`, 1-based.
    pub fn at(&self, j: usize) -> &SpectralMatrix {
        &self.forward[j - 1]
    }

    pub fn last(&self) -> &SpectralMatrix {
        self.forward.last().expect("at least one site")
    }

    fn try_map(&self, f: impl Fn(&SpectralMatrix) -> Result<SpectralMatrix> + Sync) -> Result<Self> {
        Ok(FlowMatrices {
            forward: self.forward.par_iter().map(&f).collect::<Result<_>>()?,
            first_reflected: f(&self.first_reflected)?,
            last_reflected: f(&self.last_reflected)?,
        })
    }
}

/// Everything the corollary needs: expansion, Hamiltonian and extracted flow matrices.
#[derive(Clone, Debug)]
pub struct CorollaryData {
    pub expansion: TransferExpansion,
    pub hamiltonian: Fraction,
    pub flows: FlowMatrices,
}

fn scalar_as_matrix(s: SpectralScalar) -> SpectralMatrix {
    SpectralMatrix::from_2x2([[s, SpectralScalar::zero()], [SpectralScalar::zero(), SpectralScalar::zero()]])
}

impl<'a> DoubleRow<'a> {
    /// `𝕄(j, λ, μ)` for every `j` and the two reflected ends.
    pub fn flow_family(&self) -> Result<FlowMatrices> {
        let n = self.sites();
        let forward = (1..=n + 1)
            .into_par_iter()
            .map(|j| self.boundary_m_standard(j, false))
            .collect::<Result<Vec<_>>>()?;
        Ok(FlowMatrices {
            forward,
            first_reflected: self.boundary_m_standard(1, true)?,
            last_reflected: self.boundary_m_standard(n + 1, true)?,
        })
    }

    /// `{b(λ), b(μ)} = 0`.
    pub fn verify_transfer_commutes(&self) -> Result<RelationReport> {
        let b_l = self.transfer(LinearForm::lambda())?;
        let b_m = self.transfer(LinearForm::mu())?;
        let bb = SpectralScalar::bracket(self.ps, &b_l, &b_m)?;
        Ok(RelationReport::from_residual("{b(λ), b(μ)} = 0", "scalar", &scalar_as_matrix(bb)))
    }

    /// The three generating-function identities for bulk, `k^-` and `k^+`.
    pub fn verify_theorem(&self, flows: &FlowMatrices) -> Result<RelationReport> {
        let b = self.transfer(LinearForm::lambda())?;
        self.zero_curvature_report("zero curvature (generating)", &b, flows)
    }

    /// `𝕄_𝓗 = Σ_k (∂𝓗/∂H^(k)) 𝕄^(k)`, `𝕄^(k)` the `λ^k` coefficient at `λ → ∞`.
    pub fn extract_m(
        &self,
        family: &FlowMatrices,
        exp: &TransferExpansion,
        recipe: &HamiltonianRecipe,
    ) -> Result<FlowMatrices> {
        let weights = recipe.weights(exp)?;
        family.try_map(|m| {
            let mut acc = SpectralMatrix::zeros(m.dim());
            for (k, w) in &weights {
                acc = &acc + &m.laurent_coefficient(Spectral::Lambda, *k)?.scale_fraction(w);
            }
            Ok(acc)
        })
    }

    pub fn corollary_data(&self, recipe: &HamiltonianRecipe) -> Result<CorollaryData> {
        let expansion = self.expansion()?;
        let hamiltonian = extract_hamiltonian(&expansion, recipe)?;
        let family = self.flow_family()?;
        let flows = self.extract_m(&family, &expansion, recipe)?;
        Ok(CorollaryData {
            expansion,
            hamiltonian,
            flows,
        })
    }

    /// `∂_T ℓ(j, μ) = {𝓗, ℓ(j, μ)}` and `∂_T k^±(μ) = {𝓗, k^±(μ)}` against the extracted flows.
    pub fn verify_corollary(&self, data: &CorollaryData) -> Result<RelationReport> {
        let h = SpectralScalar::from_fraction(&data.hamiltonian);
        self.zero_curvature_report("zero curvature (Hamiltonian)", &h, &data.flows)
    }

    /// Intertwining relations `𝕄(1, μ) k^-(μ) = k^-(μ) 𝕄(1, -μ)` and
    /// `𝕄(N+1, -μ) k^+(μ) = k^+(μ) 𝕄(N+1, μ)`, valid when both `k` are non-dynamical.
    pub fn verify_intertwining(&self, flows: &FlowMatrices) -> Result<RelationReport> {
        let mu = LinearForm::mu();
        let km = self.k_minus.at(mu);
        let kp = self.k_plus.at(mu);
        let mut report = RelationReport::new("boundary intertwining");
        report.absorb("k-", &(&(flows.at(1) * &km) - &(&km * &flows.first_reflected)));
        report.absorb("k+", &(&(&flows.last_reflected * &kp) - &(&kp * flows.last())));
        Ok(report)
    }

    fn zero_curvature_report(&self, name: &str, g: &SpectralScalar, flows: &FlowMatrices) -> Result<RelationReport> {
        let mu = LinearForm::mu();
        let n = self.sites();
        let mut report = RelationReport::new(name);
        let sites: Vec<(usize, SpectralMatrix)> = (1..=n)
            .into_par_iter()
            .map(|j| {
                let l = self.lax.lax(j, mu);
                let lhs = l.bracket_with(self.ps, g, true)?;
                let rhs = &(flows.at(j + 1) * &l) - &(&l * flows.at(j));
                Ok((j, &lhs - &rhs))
            })
            .collect::<Result<_>>()?;
        for (j, residual) in sites {
            report.absorb(&format!("site {j}"), &residual);
        }
        let km = self.k_minus.at(mu);
        let lhs = km.bracket_with(self.ps, g, true)?;
        let rhs = &(flows.at(1) * &km) - &(&km * &flows.first_reflected);
        report.absorb("k-", &(&lhs - &rhs));
        let kp = self.k_plus.at(mu);
        let lhs = kp.bracket_with(self.ps, g, true)?;
        let rhs = &(&flows.last_reflected * &kp) - &(&kp * flows.last());
        report.absorb("k+", &(&lhs - &rhs));
        Ok(report)
    }
}
