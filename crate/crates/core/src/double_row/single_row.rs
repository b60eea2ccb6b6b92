use super::monodromy::monodromy;
use super::sandwich_trace;
use super::transfer::TransferExpansion;
use crate::checks::RelationReport;
use crate::error::{Error, Result};
use crate::ring::{PoissonStructure, Spectral};
use crate::spectral::{LaxFamily, LinearForm, SpectralFunction, SpectralMatrix, SpectralScalar};

/// `t(z) = tr L(z)`.
pub fn single_row_generating(family: &dyn LaxFamily, arg: LinearForm) -> Result<SpectralScalar> {
    Ok(monodromy(family, family.sites(), 1, arg)?.matrix.trace())
}

pub fn single_row_transfer(family: &dyn LaxFamily) -> Result<TransferExpansion> {
    TransferExpansion::from_scalar(&single_row_generating(family, LinearForm::lambda())?, Spectral::Lambda)
}

/// `M_b(j, λ, μ) = tr_a(L_a(N, j, λ) r_ab(λ - μ) L_a(j - 1, 1, λ))`, `j = 1..=N+1`.
pub fn sts_matrix(family: &dyn LaxFamily, r: &dyn SpectralFunction, j: usize) -> Result<SpectralMatrix> {
    let n = family.sites();
    if j == 0 || j > n + 1 {
        return Err(Error::SiteOutOfRange { index: j, max: n + 1 });
    }
    let lam = LinearForm::lambda();
    let upper = monodromy(family, n, j, lam)?.matrix;
    let lower = monodromy(family, j - 1, 1, lam)?.matrix;
    sandwich_trace(&upper, &r.at(lam - LinearForm::mu()), &lower)
}

/// `{t(λ), t(μ)} = 0` and `{t(λ), ℓ(j, μ)} = M(j+1) ℓ(j, μ) - ℓ(j, μ) M(j)` for every site.
pub fn verify_single_row(
    family: &dyn LaxFamily,
    r: &dyn SpectralFunction,
    ps: &PoissonStructure,
) -> Result<RelationReport> {
    let mut report = RelationReport::new("single-row zero curvature");
    let t_l = single_row_generating(family, LinearForm::lambda())?;
    let t_m = single_row_generating(family, LinearForm::mu())?;
    let tt = SpectralScalar::bracket(ps, &t_l, &t_m)?;
    report.absorb("{t, t}", &SpectralMatrix::from_2x2([
        [tt, SpectralScalar::zero()],
        [SpectralScalar::zero(), SpectralScalar::zero()],
    ]));
    let ms: Vec<SpectralMatrix> = (1..=family.sites() + 1)
        .map(|j| sts_matrix(family, r, j))
        .collect::<Result<_>>()?;
    for j in 1..=family.sites() {
        let l = family.lax(j, LinearForm::mu());
        let lhs = l.bracket_with(ps, &t_l, true)?;
        let rhs = &(&ms[j] * &l) - &(&l * &ms[j - 1]);
        report.absorb(&format!("site {j}"), &(&lhs - &rhs));
    }
    Ok(report)
}
