//! Open Toda chains with constant (`BC_N`) and dynamical sl(2) (`D_N`)
//! boundary matrices, their closed-form Hamiltonians, equations of motion and
//! flow matrices, and the two changes of variables used to compare with the
//! classical literature.

mod canonical;
mod closed_form;
mod config;

pub use canonical::{canonical_map_bcn, dn_boundary_elimination, CanonicalMap, DnElimination};
pub use closed_form::{bracket_eom, Coordinate, EquationsOfMotion};
pub use config::{parse_value, ModelConfig, DEFAULT_C0, DEFAULT_C1};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::checks::{
    check_cybe, check_locality, check_nondynamical, check_reflection_minus, check_reflection_plus, check_rll,
    RelationReport,
};
use crate::double_row::{DoubleRow, HamiltonianRecipe};
use crate::error::{Error, Result};
use crate::ring::{rational, Generator, Param, PoissonStructure, RingElement};
use crate::spectral::{rational_r, LaxFamily, LinearForm, SpectralFunction, SpectralMatrix};

/// `ℓ(j, z) = [[z + X_j, -u_j], [1/u_j, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TodaLax {
    sites: usize,
}

impl TodaLax {
    pub fn new(sites: usize) -> Self {
        TodaLax { sites }
    }
}

impl LaxFamily for TodaLax {
    fn sites(&self) -> usize {
        self.sites
    }

    fn lax(&self, site: usize, arg: LinearForm) -> SpectralMatrix {
        let u = RingElement::gen(Generator::U(site));
        let u_inv = RingElement::power_of(Generator::U(site), -1).expect("u_j is a unit");
        SpectralMatrix::from_ring_2x2([
            [&arg.to_ring() + &RingElement::gen(Generator::X(site)), -u],
            [u_inv, RingElement::zero()],
        ])
    }
}

/// `r(z) = P / z`.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalR;

impl SpectralFunction for RationalR {
    fn at(&self, arg: LinearForm) -> SpectralMatrix {
        rational_r(arg).expect("r-matrix evaluated at a nonzero linear form")
    }
}

/// Boundary constants of the `BC_N` chain. Each is either a parameter
/// generator (symbolic) or a rational constant.
#[derive(Clone, Debug, PartialEq)]
pub struct BcnParams {
    pub theta_1: RingElement,
    pub alpha_1: RingElement,
    pub beta_1: RingElement,
    pub theta_n: RingElement,
    pub alpha_n: RingElement,
    pub beta_n: RingElement,
}

impl BcnParams {
    pub fn symbolic() -> Self {
        let p = |p: Param| RingElement::gen(Generator::Param(p));
        BcnParams {
            theta_1: p(Param::Theta1),
            alpha_1: p(Param::Alpha1),
            beta_1: p(Param::Beta1),
            theta_n: p(Param::ThetaN),
            alpha_n: p(Param::AlphaN),
            beta_n: p(Param::BetaN),
        }
    }

    pub fn zero() -> Self {
        BcnParams {
            theta_1: RingElement::zero(),
            alpha_1: RingElement::zero(),
            beta_1: RingElement::zero(),
            theta_n: RingElement::zero(),
            alpha_n: RingElement::zero(),
            beta_n: RingElement::zero(),
        }
    }

    /// Symbolic parameters with the given ones replaced by values.
    pub fn with_values(values: &[(Param, RingElement)]) -> Self {
        let mut p = Self::symbolic();
        for (name, v) in values {
            match name {
                Param::Theta1 => p.theta_1 = v.clone(),
                Param::Alpha1 => p.alpha_1 = v.clone(),
                Param::Beta1 => p.beta_1 = v.clone(),
                Param::ThetaN => p.theta_n = v.clone(),
                Param::AlphaN => p.alpha_n = v.clone(),
                Param::BetaN => p.beta_n = v.clone(),
                Param::C0 | Param::C1 => {}
            }
        }
        p
    }
}

/// `D_N` integration constants: `F - u_1 = c_0 / 2` and `H² + EF = c_1 / 4`.
#[derive(Clone, Debug, PartialEq)]
pub struct DnParams {
    pub c_0: RingElement,
    pub c_1: RingElement,
}

impl DnParams {
    pub fn symbolic() -> Self {
        DnParams {
            c_0: RingElement::gen(Generator::Param(Param::C0)),
            c_1: RingElement::gen(Generator::Param(Param::C1)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Minus,
    Plus,
}

/// Constant boundary matrices
/// `k^-(z) = [[zθ_1 + α_1, z], [-β_1 z, -zθ_1 + α_1]]` and
/// `k^+(z) = [[zθ_N + α_N, zβ_N], [-z, -zθ_N + α_N]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantK {
    pub end: End,
    pub theta: RingElement,
    pub alpha: RingElement,
    pub beta: RingElement,
}

impl ConstantK {
    pub fn minus(p: &BcnParams) -> Self {
        ConstantK {
            end: End::Minus,
            theta: p.theta_1.clone(),
            alpha: p.alpha_1.clone(),
            beta: p.beta_1.clone(),
        }
    }

    pub fn plus(p: &BcnParams) -> Self {
        ConstantK {
            end: End::Plus,
            theta: p.theta_n.clone(),
            alpha: p.alpha_n.clone(),
            beta: p.beta_n.clone(),
        }
    }
}

impl SpectralFunction for ConstantK {
    fn at(&self, arg: LinearForm) -> SpectralMatrix {
        let z = arg.to_ring();
        let zt = &z * &self.theta;
        let zb = &z * &self.beta;
        let (upper, lower) = match self.end {
            End::Minus => (z, -zb),
            End::Plus => (zb, -z),
        };
        SpectralMatrix::from_ring_2x2([
            [&zt + &self.alpha, upper],
            [lower, &self.alpha - &zt],
        ])
    }
}

/// Dynamical `k^-(z) = [[z/2 - H, F], [E, z/2 + H]]` over sl(2).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DnKMinus;

impl SpectralFunction for DnKMinus {
    fn at(&self, arg: LinearForm) -> SpectralMatrix {
        let half = arg.to_ring().scale(&rational(1, 2));
        let h = RingElement::gen(Generator::H);
        SpectralMatrix::from_ring_2x2([
            [&half - &h, RingElement::gen(Generator::F)],
            [RingElement::gen(Generator::E), &half + &h],
        ])
    }
}

/// `k^+ = [[0, 0], [-1, 0]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DnKPlus;

impl SpectralFunction for DnKPlus {
    fn at(&self, _: LinearForm) -> SpectralMatrix {
        SpectralMatrix::from_ring_2x2([
            [RingElement::zero(), RingElement::zero()],
            [RingElement::int(-1), RingElement::zero()],
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Bcn,
    Dn,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Bcn => "bcn",
            ModelKind::Dn => "dn",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelParams {
    Bcn(BcnParams),
    Dn(DnParams),
}

#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryMatrix {
    Constant(ConstantK),
    DnMinus,
    DnPlus,
}

impl SpectralFunction for BoundaryMatrix {
    fn at(&self, arg: LinearForm) -> SpectralMatrix {
        match self {
            BoundaryMatrix::Constant(k) => k.at(arg),
            BoundaryMatrix::DnMinus => DnKMinus.at(arg),
            BoundaryMatrix::DnPlus => DnKPlus.at(arg),
        }
    }
}

/// A boundary Toda chain: Lax family, r-matrix, boundary matrices, Poisson
/// structure and the recipe that reads the physical Hamiltonian off `b(λ)`.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub lax: TodaLax,
    pub r: RationalR,
    pub k_minus: BoundaryMatrix,
    pub k_plus: BoundaryMatrix,
    pub recipe: HamiltonianRecipe,
    pub params: ModelParams,
    ps: PoissonStructure,
}

/// `BC_N` chain; the Hamiltonian is `(-1)^N / 2` times the `λ^{2N}` coefficient.
pub fn build_bcn(n: usize, params: BcnParams) -> Result<ModelSpec> {
    if n < 1 {
        return Err(Error::InvalidModel(format!("BC_N needs N >= 1, got {n}")));
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    Ok(ModelSpec {
        kind: ModelKind::Bcn,
        lax: TodaLax::new(n),
        r: RationalR,
        k_minus: BoundaryMatrix::Constant(ConstantK::minus(&params)),
        k_plus: BoundaryMatrix::Constant(ConstantK::plus(&params)),
        recipe: HamiltonianRecipe::ScaledCoefficient {
            power: 2 * n as i32,
            scale: rational(sign, 2),
        },
        params: ModelParams::Bcn(params),
        ps: PoissonStructure::canonical(n),
    })
}

/// `D_N` chain; the Hamiltonian is `-H^{(2N-2)} / (2 H^{(2N)})`.
pub fn build_dn(n: usize, params: DnParams) -> Result<ModelSpec> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("D_N needs N >= 2, got {n}")));
    }
    let top = 2 * n as i32;
    Ok(ModelSpec {
        kind: ModelKind::Dn,
        lax: TodaLax::new(n),
        r: RationalR,
        k_minus: BoundaryMatrix::DnMinus,
        k_plus: BoundaryMatrix::DnPlus,
        recipe: HamiltonianRecipe::Ratio {
            numerator: top - 2,
            denominator: top,
            scale: rational(-1, 2),
        },
        params: ModelParams::Dn(params),
        ps: PoissonStructure::canonical(n).with_sl2(),
    })
}

impl ModelSpec {
    pub fn sites(&self) -> usize {
        self.lax.sites()
    }

    pub fn ps(&self) -> &PoissonStructure {
        &self.ps
    }

    pub fn double_row(&self) -> DoubleRow<'_> {
        DoubleRow {
            lax: &self.lax,
            k_minus: &self.k_minus,
            k_plus: &self.k_plus,
            r: &self.r,
            ps: &self.ps,
        }
    }

    pub fn bcn_params(&self) -> Option<&BcnParams> {
        match &self.params {
            ModelParams::Bcn(p) => Some(p),
            ModelParams::Dn(_) => None,
        }
    }

    pub fn dn_params(&self) -> Option<&DnParams> {
        match &self.params {
            ModelParams::Dn(p) => Some(p),
            ModelParams::Bcn(_) => None,
        }
    }

    /// Phase-space generators in state order: `u_1..u_N, X_1..X_N[, E, F, H]`.
    pub fn generators(&self) -> Vec<Generator> {
        let n = self.sites();
        let mut g: Vec<Generator> = (1..=n).map(Generator::U).collect();
        g.extend((1..=n).map(Generator::X));
        if self.kind == ModelKind::Dn {
            g.extend([Generator::E, Generator::F, Generator::H]);
        }
        g
    }

    /// CYBE, rLL, both reflection algebras (or their non-dynamical form) and locality.
    pub fn structure_checks(&self) -> Result<Vec<RelationReport>> {
        let mut out = vec![
            check_cybe(&self.r)?,
            check_rll(&self.lax, &self.r, &self.ps)?,
            check_reflection_minus(&self.k_minus, &self.r, &self.ps)?,
            check_reflection_plus(&self.k_plus, &self.r, &self.ps)?,
        ];
        if self.kind == ModelKind::Bcn {
            out.push(check_nondynamical(&self.k_minus, &self.ps)?);
        }
        out.push(check_nondynamical(&self.k_plus, &self.ps)?);
        out.push(check_locality(&self.lax, &self.k_minus, &self.k_plus, &self.ps)?);
        Ok(out)
    }
}
