use super::{build_bcn, BcnParams, LaxFamily, ModelParams, ModelSpec};
use crate::checks::RelationReport;
use crate::error::{Error, Result};
use crate::ring::{integer, rational, Fraction, Generator, RingElement};
use crate::spectral::{LinearForm, SpectralMatrix, SpectralScalar};

fn u(j: usize) -> RingElement {
    RingElement::gen(Generator::U(j))
}

fn u_inv(j: usize) -> RingElement {
    RingElement::power_of(Generator::U(j), -1).expect("u_j is a unit")
}

fn scalar_report(name: &str, label: &str, f: Fraction) -> RelationReport {
    let z = SpectralScalar::zero();
    let m = SpectralMatrix::from_2x2([[SpectralScalar::from_fraction(&f), z.clone()], [z.clone(), z]]);
    RelationReport::from_residual(name, label, &m)
}

/// `X̃_1 = X_1 + θ_1 e^{x_1}`, `X̃_N = X_N + θ_N e^{-x_N}`, `x̃_j = x_j`.
///
/// It is realised on the Lax side by constant gauge matrices at the two ends,
/// `ℓ̃(j) = G(j+1) ℓ(j) G(j)^{-1}` with `G(1) = [[1,0],[θ_1,1]]`,
/// `G(N+1) = [[1,θ_N],[0,1]]` and `G(j) = 𝟙` otherwise, and it maps the chain to
/// the `θ = 0` chain with `β̃ = β - θ²`.
#[derive(Clone, Debug)]
pub struct CanonicalMap {
    pub sites: usize,
    /// `X̃_j` in the original variables.
    pub momenta: Vec<RingElement>,
    pub gauge_first: SpectralMatrix,
    pub gauge_last: SpectralMatrix,
    pub tilde_params: BcnParams,
}

pub fn canonical_map_bcn(model: &ModelSpec) -> Result<CanonicalMap> {
    let p = match &model.params {
        ModelParams::Bcn(p) => p,
        ModelParams::Dn(_) => return Err(Error::InvalidModel("canonical map is defined for BC_N only".into())),
    };
    let n = model.sites();
    let mut momenta: Vec<RingElement> = (1..=n).map(|j| RingElement::gen(Generator::X(j))).collect();
    momenta[0] += &(&p.theta_1 * &u(1));
    momenta[n - 1] += &(&p.theta_n * &u_inv(n));
    let one = RingElement::one;
    let zero = RingElement::zero;
    let gauge_first = SpectralMatrix::from_ring_2x2([[one(), zero()], [p.theta_1.clone(), one()]]);
    let gauge_last = SpectralMatrix::from_ring_2x2([[one(), p.theta_n.clone()], [zero(), one()]]);
    let tilde_params = BcnParams {
        theta_1: RingElement::zero(),
        theta_n: RingElement::zero(),
        beta_1: &p.beta_1 - &(&p.theta_1 * &p.theta_1),
        beta_n: &p.beta_n - &(&p.theta_n * &p.theta_n),
        alpha_1: p.alpha_1.clone(),
        alpha_n: p.alpha_n.clone(),
    };
    Ok(CanonicalMap {
        sites: n,
        momenta,
        gauge_first,
        gauge_last,
        tilde_params,
    })
}

impl CanonicalMap {
    /// Replaces every `X_j` by `X̃_j`.
    pub fn pull_back(&self, f: &Fraction) -> Result<Fraction> {
        let mut out = f.clone();
        // Simultaneous substitution: each X̃_j only involves X_j itself.
        for (j, m) in self.momenta.iter().enumerate() {
            out = out.substitute(Generator::X(j + 1), m)?;
        }
        Ok(out)
    }

    fn pull_back_matrix(&self, m: &SpectralMatrix) -> Result<SpectralMatrix> {
        let mut out = m.clone();
        for (j, v) in self.momenta.iter().enumerate() {
            out = out.substitute(Generator::X(j + 1), v)?;
        }
        Ok(out)
    }

    pub fn gauge(&self, j: usize) -> SpectralMatrix {
        if j == 1 {
            self.gauge_first.clone()
        } else if j == self.sites + 1 {
            self.gauge_last.clone()
        } else {
            SpectralMatrix::identity(2)
        }
    }

    /// The `θ = 0` chain in the new variables.
    pub fn tilde_model(&self) -> Result<ModelSpec> {
        build_bcn(self.sites, self.tilde_params.clone())
    }

    /// Canonical brackets of the new variables, invariance of the Hamiltonian up to a constant,
    /// the gauge relation on `ℓ` and on the extracted `𝕄`, and the zero
    /// curvature of the shifted pair `(ℓ̃, G 𝕄 G^{-1} - μ/2 𝟙)`.
    pub fn verify(&self, model: &ModelSpec) -> Result<RelationReport> {
        let ps = model.ps();
        let n = self.sites;
        let mut report = RelationReport::new("canonical map");

        for j in 1..=n {
            for k in 1..=n {
                let uk = u(k);
                let b = ps.bracket(&self.momenta[j - 1], &uk)?;
                let want = if j == k { uk } else { RingElement::zero() };
                report.merge(scalar_report("", &format!("{{X~_{j}, u_{k}}}"), (&b - &want).into()));
                let xx = ps.bracket(&self.momenta[j - 1], &self.momenta[k - 1])?;
                report.merge(scalar_report("", &format!("{{X~_{j}, X~_{k}}}"), xx.into()));
            }
        }

        let tilde = self.tilde_model()?;
        let h = model.paper_hamiltonian()?;
        let h_tilde = self.pull_back(&tilde.paper_hamiltonian()?)?;
        let diff = &h - &h_tilde;
        if !diff.is_field_free() {
            report.merge(scalar_report("", "H - H~", diff));
        }

        let mu = LinearForm::mu();
        for j in 1..=n {
            let l = model.lax.lax(j, mu);
            let l_tilde = self.pull_back_matrix(&tilde.lax.lax(j, mu))?;
            let gauged = &(&self.gauge(j + 1) * &l) * &self.gauge(j).inverse_2x2()?;
            report.absorb(&format!("gauge l({j})"), &(&l_tilde - &gauged));
        }

        let flows = model.double_row().corollary_data(&model.recipe)?.flows;
        let tilde_flows = tilde.double_row().corollary_data(&tilde.recipe)?.flows;
        let shift = SpectralMatrix::identity(2).scale_scalar(&mu.to_ring().scale(&rational(1, 2)).into());
        let mut shifted = Vec::with_capacity(n + 1);
        for j in 1..=n + 1 {
            let g = self.gauge(j);
            let conj = &(&g * flows.at(j)) * &g.inverse_2x2()?;
            let target = self.pull_back_matrix(tilde_flows.at(j))?;
            report.absorb(&format!("gauge M({j})"), &(&conj - &target));
            shifted.push(&conj - &shift);
        }

        let h = SpectralScalar::from_fraction(&h);
        for j in 1..=n {
            let l_tilde = self.pull_back_matrix(&tilde.lax.lax(j, mu))?;
            let lhs = l_tilde.bracket_with(ps, &h, true)?;
            let rhs = &(&shifted[j] * &l_tilde) - &(&l_tilde * &shifted[j - 1]);
            report.absorb(&format!("shifted zero curvature {j}"), &(&lhs - &rhs));
        }
        Ok(report)
    }
}

/// Elimination of `F` on the level set `F - e^{x_1} = c_0/2`, the coordinate
/// `e^{x̃_1} = c_0 e^{x_1} / (c_0 + e^{x_1})`, and the abbreviation `e^{-x_0}`.
///
/// `c_0 = 2(F - e^{x_1})` and `c_1 = 4(H² + EF)` are kept as the conserved
/// phase-space functions they stand for, so every relation below is an
/// identity on the whole phase space.
#[derive(Clone, Debug)]
pub struct DnElimination {
    pub sites: usize,
    pub c_0: Fraction,
    pub c_1: Fraction,
    /// `e^{x̃_1}`.
    pub tilde_u1: Fraction,
    /// `d x̃_1 / dT`.
    pub tilde_rate: Fraction,
    /// `d² x̃_1 / dT²`.
    pub tilde_accel: Fraction,
    /// `e^{-x_0} = e^{x_2}/c_0² + ((d x̃_1/dT)² - c_1) e^{x̃_1} / (c_0² - e^{2x̃_1})`.
    pub exp_minus_x0: Fraction,
    /// `ẍ_j` for `j = 2..=N` (index `j - 2`).
    pub accelerations: Vec<Fraction>,
}

pub fn dn_boundary_elimination(model: &ModelSpec) -> Result<DnElimination> {
    let p = match &model.params {
        ModelParams::Dn(p) => p,
        ModelParams::Bcn(_) => return Err(Error::InvalidModel("boundary elimination is defined for D_N only".into())),
    };
    if p.c_0.is_zero() {
        return Err(Error::InvalidModel("c_0 must be nonzero".into()));
    }
    let n = model.sites();
    let ps = model.ps();
    let h = model.paper_hamiltonian()?;
    let d = |f: &Fraction| ps.bracket_fraction(&h, f);
    let gen = |g: Generator| Fraction::from(RingElement::gen(g));

    let u1 = gen(Generator::U(1));
    let c_0: Fraction = (&gen(Generator::F) - &u1).scale(&integer(2));
    let c_1: Fraction = (&(&gen(Generator::H) * &gen(Generator::H)) + &(&gen(Generator::E) * &gen(Generator::F)))
        .scale(&integer(4));
    let c0_plus_u1 = &c_0 + &u1;
    let tilde_u1 = (&c_0 * &u1).div(&c0_plus_u1)?;

    let rate = |j: usize| -> Result<Fraction> { Ok(&d(&gen(Generator::U(j)))? * &Fraction::from(u_inv(j))) };
    let tilde_rate = &rate(1)? * &c_0.div(&c0_plus_u1)?;
    let tilde_accel = d(&tilde_rate)?;

    let c0_sq = &c_0 * &c_0;
    let w_sq = &tilde_u1 * &tilde_u1;
    let first = gen(Generator::U(2)).div(&c0_sq)?;
    let second = (&(&(&tilde_rate * &tilde_rate) - &c_1) * &tilde_u1).div(&(&c0_sq - &w_sq))?;
    let exp_minus_x0 = &first + &second;

    let mut accelerations = Vec::new();
    for j in 2..=n {
        accelerations.push(d(&rate(j)?)?);
    }
    Ok(DnElimination {
        sites: n,
        c_0,
        c_1,
        tilde_u1,
        tilde_rate,
        tilde_accel,
        exp_minus_x0,
        accelerations,
    })
}

impl DnElimination {
    /// `ẍ̃_1 - (e^{x_2 - x̃_1} - e^{x̃_1 - x_0})`.
    pub fn boundary_residual(&self) -> Result<Fraction> {
        let u2 = Fraction::from(u(2));
        let rhs = &u2.div(&self.tilde_u1)? - &(&self.tilde_u1 * &self.exp_minus_x0);
        Ok(&self.tilde_accel - &rhs)
    }

    /// The same residual with `e^{x_1}` in place of `e^{x̃_1}` in the numerator of `e^{-x_0}`.
    pub fn literal_boundary_residual(&self) -> Result<Fraction> {
        let u1 = Fraction::from(u(1));
        let c0_sq = &self.c_0 * &self.c_0;
        let w_sq = &self.tilde_u1 * &self.tilde_u1;
        let first = Fraction::from(u(2)).div(&c0_sq)?;
        let second = (&(&(&self.tilde_rate * &self.tilde_rate) - &self.c_1) * &u1).div(&(&c0_sq - &w_sq))?;
        let e = &first + &second;
        let rhs = &Fraction::from(u(2)).div(&self.tilde_u1)? - &(&self.tilde_u1 * &e);
        Ok(&self.tilde_accel - &rhs)
    }

    /// `ẍ_j - (e^{x_{j+1} - x_j} - e^{x_j - x_{j-1}})` for `j = 2..=N`, with `x̃_1` in place of `x_1`.
    pub fn bulk_residuals(&self) -> Result<Vec<(usize, Fraction)>> {
        let n = self.sites;
        let mut out = Vec::new();
        for j in 2..=n {
            let mut rhs = Fraction::zero();
            if j < n {
                rhs = Fraction::from(&u(j + 1) * &u_inv(j));
            }
            let below = if j == 2 {
                Fraction::from(u(2)).div(&self.tilde_u1)?
            } else {
                Fraction::from(&u(j) * &u_inv(j - 1))
            };
            rhs = &rhs - &below;
            out.push((j, &self.accelerations[j - 2] - &rhs));
        }
        Ok(out)
    }
}
