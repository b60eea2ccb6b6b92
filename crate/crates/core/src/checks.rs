//! Exact verifiers for the Poisson-algebraic relations behind the boundary
//! construction: classical Yang-Baxter, ultralocal rLL, the two reflection
//! algebras, the non-dynamical reflection equation, and locality between
//! bulk and boundary fields.
//!
//! Every check builds a residual matrix whose entries are pole-cleared and
//! compared to zero exactly. All parameters stay symbolic, so a pass holds for
//! every parameter value.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ring::PoissonStructure;
use crate::spectral::{
    embed_a, embed_b, embed_two_legs, swap_legs, tensor_bracket, LaxFamily, Leg, LinearForm,
    SpectralFunction, SpectralMatrix,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    /// Where the entry lives, e.g. `site 1 (0,2)`.
    pub location: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation: String,
    pub holds: bool,
    pub residual: Vec<ResidualEntry>,
}

impl RelationReport {
    pub fn new(relation: impl Into<String>) -> Self {
        RelationReport {
            relation: relation.into(),
            holds: true,
            residual: Vec::new(),
        }
    }

    /// Records every nonzero entry of `m` under `label`.
    pub fn absorb(&mut self, label: &str, m: &SpectralMatrix) {
        for (i, j, v) in m.nonzero_entries() {
            self.residual.push(ResidualEntry {
                location: format!("{label} ({i},{j})"),
                value: v.to_string(),
            });
        }
        self.holds = self.residual.is_empty();
    }

    pub fn from_residual(relation: impl Into<String>, label: &str, m: &SpectralMatrix) -> Self {
        let mut r = Self::new(relation);
        r.absorb(label, m);
        r
    }

    pub fn merge(&mut self, other: RelationReport) {
        self.residual.extend(other.residual);
        self.holds = self.residual.is_empty();
    }
}

fn lambda_minus_mu() -> LinearForm {
    LinearForm::lambda() - LinearForm::mu()
}

fn lambda_plus_mu() -> LinearForm {
    LinearForm::lambda() + LinearForm::mu()
}

/// Residual of `[r_ac(λ-ν), r_bc(μ-ν)] + [r_ab(λ-μ), r_ac(λ-ν)] + [r_ab(λ-μ), r_bc(μ-ν)]`
/// on `a ⊗ b ⊗ c`.
pub fn check_cybe(r: &dyn SpectralFunction) -> Result<RelationReport> {
    let (l, m, n) = (LinearForm::lambda(), LinearForm::mu(), LinearForm::nu());
    let r_ab = embed_two_legs(&r.at(l - m), Leg::A, Leg::B)?;
    let r_ac = embed_two_legs(&r.at(l - n), Leg::A, Leg::C)?;
    let r_bc = embed_two_legs(&r.at(m - n), Leg::B, Leg::C)?;
    let residual = &(&r_ac.commutator(&r_bc) + &r_ab.commutator(&r_ac)) + &r_ab.commutator(&r_bc);
    Ok(RelationReport::from_residual("classical Yang-Baxter", "abc", &residual))
}

/// `{ℓ_a(j,λ), ℓ_b(k,μ)} = δ_jk [r_ab(λ-μ), ℓ_a(j,λ) ℓ_b(k,μ)]` for every pair of sites.
pub fn check_rll(family: &dyn LaxFamily, r: &dyn SpectralFunction, ps: &PoissonStructure) -> Result<RelationReport> {
    let (l, m) = (LinearForm::lambda(), LinearForm::mu());
    let r_lm = r.at(lambda_minus_mu());
    let mut report = RelationReport::new("ultralocal rLL");
    let n = family.sites();
    for j in 1..=n {
        for k in 1..=n {
            let a = family.lax(j, l);
            let b = family.lax(k, m);
            let lhs = tensor_bracket(&a, &b, ps)?;
            let residual = if j == k {
                let prod = &embed_a(&a)? * &embed_b(&b)?;
                &lhs - &r_lm.commutator(&prod)
            } else {
                lhs
            };
            report.absorb(&format!("sites ({j},{k})"), &residual);
        }
    }
    Ok(report)
}

/// Right-hand side of the reflection algebra for `k^-`.
fn reflection_minus_rhs(k: &dyn SpectralFunction, r: &dyn SpectralFunction) -> Result<SpectralMatrix> {
    let ka = embed_a(&k.at(LinearForm::lambda()))?;
    let kb = embed_b(&k.at(LinearForm::mu()))?;
    let r_ab_minus = r.at(lambda_minus_mu());
    let r_ba_minus = swap_legs(&r_ab_minus)?;
    let r_ab_plus = r.at(lambda_plus_mu());
    let r_ba_plus = swap_legs(&r_ab_plus)?;
    let t1 = &(&r_ab_minus * &ka) * &kb;
    let t2 = &(&ka * &kb) * &r_ba_minus;
    let t3 = &(&ka * &r_ba_plus) * &kb;
    let t4 = &(&kb * &r_ab_plus) * &ka;
    Ok(&(&(&t1 - &t2) + &t3) - &t4)
}

/// Right-hand side of the reflection algebra for `k^+` (roles of `r_ab`, `r_ba` exchanged).
fn reflection_plus_rhs(k: &dyn SpectralFunction, r: &dyn SpectralFunction) -> Result<SpectralMatrix> {
    let ka = embed_a(&k.at(LinearForm::lambda()))?;
    let kb = embed_b(&k.at(LinearForm::mu()))?;
    let r_ab_minus = r.at(lambda_minus_mu());
    let r_ba_minus = swap_legs(&r_ab_minus)?;
    let r_ab_plus = r.at(lambda_plus_mu());
    let r_ba_plus = swap_legs(&r_ab_plus)?;
    let t1 = &(&r_ba_minus * &ka) * &kb;
    let t2 = &(&ka * &kb) * &r_ab_minus;
    let t3 = &(&ka * &r_ab_plus) * &kb;
    let t4 = &(&kb * &r_ba_plus) * &ka;
    Ok(&(&(&t1 - &t2) + &t3) - &t4)
}

pub fn check_reflection_minus(
    k: &dyn SpectralFunction,
    r: &dyn SpectralFunction,
    ps: &PoissonStructure,
) -> Result<RelationReport> {
    let lhs = tensor_bracket(&k.at(LinearForm::lambda()), &k.at(LinearForm::mu()), ps)?;
    let residual = &lhs - &reflection_minus_rhs(k, r)?;
    Ok(RelationReport::from_residual("reflection algebra k-", "ab", &residual))
}

pub fn check_reflection_plus(
    k: &dyn SpectralFunction,
    r: &dyn SpectralFunction,
    ps: &PoissonStructure,
) -> Result<RelationReport> {
    let lhs = tensor_bracket(&k.at(LinearForm::lambda()), &k.at(LinearForm::mu()), ps)?;
    let residual = &lhs - &reflection_plus_rhs(k, r)?;
    Ok(RelationReport::from_residual("reflection algebra k+", "ab", &residual))
}

/// `{k_a(λ), k_b(μ)} = 0`: no dynamical entries interact.
pub fn check_nondynamical(k: &dyn SpectralFunction, ps: &PoissonStructure) -> Result<RelationReport> {
    let residual = tensor_bracket(&k.at(LinearForm::lambda()), &k.at(LinearForm::mu()), ps)?;
    Ok(RelationReport::from_residual("non-dynamical {k,k} = 0", "ab", &residual))
}

/// `{k^-_a, k^+_b} = 0` and `{k^±_a, ℓ_b(j)} = 0` for every site.
pub fn check_locality(
    family: &dyn LaxFamily,
    k_minus: &dyn SpectralFunction,
    k_plus: &dyn SpectralFunction,
    ps: &PoissonStructure,
) -> Result<RelationReport> {
    let (l, m) = (LinearForm::lambda(), LinearForm::mu());
    let mut report = RelationReport::new("boundary locality");
    let km = k_minus.at(l);
    let kp = k_plus.at(l);
    report.absorb("{k-, k+}", &tensor_bracket(&km, &k_plus.at(m), ps)?);
    for j in 1..=family.sites() {
        let lax = family.lax(j, m);
        report.absorb(&format!("{{k-, l({j})}}"), &tensor_bracket(&km, &lax, ps)?);
        report.absorb(&format!("{{k+, l({j})}}"), &tensor_bracket(&kp, &lax, ps)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Generator, RingElement};
    use crate::spectral::{rational_r, FlipEntry, SpectralScalar};
    use crate::toda::{BcnParams, ConstantK, DnKMinus, DnKPlus, TodaLax};

    fn rational(z: LinearForm) -> SpectralMatrix {
        rational_r(z).unwrap()
    }

    #[test]
    fn cybe_rational_holds() {
        assert!(check_cybe(&rational).unwrap().holds);
    }

    #[test]
    fn cybe_zero_holds() {
        let zero = |_: LinearForm| SpectralMatrix::zeros(4);
        assert!(check_cybe(&zero).unwrap().holds);
    }

    #[test]
    fn cybe_detects_sign_flip() {
        let flipped = FlipEntry::new(rational, 1, 2);
        let report = check_cybe(&flipped).unwrap();
        assert!(!report.holds);
        assert!(!report.residual.is_empty());
    }

    #[test]
    fn rll_toda() {
        let ps = PoissonStructure::canonical(2);
        assert!(check_rll(&TodaLax::new(2), &rational, &ps).unwrap().holds);
    }

    /// `e^{-x_1}` replaced by `e^{x_1}` at the first site.
    struct WrongExponential;
    impl LaxFamily for WrongExponential {
        fn sites(&self) -> usize {
            2
        }
        fn lax(&self, site: usize, arg: LinearForm) -> SpectralMatrix {
            let mut m = TodaLax::new(2).lax(site, arg);
            if site == 1 {
                m.set(1, 0, SpectralScalar::from(RingElement::gen(Generator::U(1))));
            }
            m
        }
    }

    #[test]
    fn rll_detects_wrong_exponential() {
        // Flipping the sign of one exponential is the canonical shift x -> x + iπ, so it would pass.
        let ps = PoissonStructure::canonical(2);
        assert!(check_rll(&FlipEntry::new(TodaLax::new(2), 0, 1).at_site(1), &rational, &ps).unwrap().holds);
        assert!(!check_rll(&WrongExponential, &rational, &ps).unwrap().holds);
    }

    struct ConstantLax;
    impl LaxFamily for ConstantLax {
        fn sites(&self) -> usize {
            2
        }
        fn lax(&self, _: usize, _: LinearForm) -> SpectralMatrix {
            SpectralMatrix::from_ring_2x2([
                [RingElement::int(2), RingElement::int(1)],
                [RingElement::int(-1), RingElement::zero()],
            ])
        }
    }

    #[test]
    fn rll_constant_lax_holds_trivially() {
        // No fields: the bracket vanishes and ℓ ⊗ ℓ commutes with P.
        let ps = PoissonStructure::canonical(2);
        assert!(check_rll(&ConstantLax, &rational, &ps).unwrap().holds);
    }

    #[test]
    fn dn_k_minus_reflection() {
        let ps = PoissonStructure::canonical(1).with_sl2();
        assert!(check_reflection_minus(&DnKMinus, &rational, &ps).unwrap().holds);
        assert!(!check_nondynamical(&DnKMinus, &ps).unwrap().holds);
    }

    #[test]
    fn bcn_constant_k_reflection() {
        let ps = PoissonStructure::canonical(1);
        let p = BcnParams::symbolic();
        let km = ConstantK::minus(&p);
        let kp = ConstantK::plus(&p);
        assert!(check_reflection_minus(&km, &rational, &ps).unwrap().holds);
        assert!(check_reflection_plus(&kp, &rational, &ps).unwrap().holds);
        assert!(check_nondynamical(&km, &ps).unwrap().holds);
        assert!(check_nondynamical(&kp, &ps).unwrap().holds);
    }

    #[test]
    fn identity_k_reflection() {
        let ps = PoissonStructure::canonical(1);
        let id = |_: LinearForm| SpectralMatrix::identity(2);
        assert!(check_reflection_minus(&id, &rational, &ps).unwrap().holds);
        assert!(check_reflection_plus(&id, &rational, &ps).unwrap().holds);
        let lam_id = |z: LinearForm| SpectralMatrix::identity(2).scale_scalar(&z.to_ring().into());
        assert!(check_nondynamical(&lam_id, &ps).unwrap().holds);
    }

    #[test]
    fn reflection_detects_mutation() {
        let ps = PoissonStructure::canonical(1).with_sl2();
        for (row, col) in [(0, 0), (0, 1), (1, 0)] {
            let bad = FlipEntry::new(DnKMinus, row, col);
            assert!(!check_reflection_minus(&bad, &rational, &ps).unwrap().holds, "({row},{col})");
        }
    }

    #[test]
    fn locality_of_dn_boundaries() {
        let ps = PoissonStructure::canonical(2).with_sl2();
        let report = check_locality(&TodaLax::new(2), &DnKMinus, &DnKPlus, &ps).unwrap();
        assert!(report.holds);
        // A k-matrix carrying a bulk field breaks locality.
        let leaky = |z: LinearForm| {
            SpectralMatrix::from_ring_2x2([
                [z.to_ring(), RingElement::gen(Generator::U(1))],
                [RingElement::zero(), z.to_ring()],
            ])
        };
        assert!(!check_locality(&TodaLax::new(2), &leaky, &DnKPlus, &ps).unwrap().holds);
    }

    #[test]
    fn report_serializes() {
        let flipped = FlipEntry::new(rational, 1, 2);
        let report = check_cybe(&flipped).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: RelationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert!(json.contains("\"holds\":false"));
    }
}
