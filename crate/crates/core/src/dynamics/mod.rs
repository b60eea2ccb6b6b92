//! Floating-point evaluation of the exact expressions, Runge-Kutta
//! integration of the Hamiltonian flow, and trajectory diagnostics.
//!
//! Expressions are compiled once from their exact form. Time derivatives of
//! Lax and boundary matrices are obtained by the chain rule from the exact
//! vector field, never by finite differences.

mod compile;
mod integrate;
mod output;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use compile::{
    evaluate, frobenius, mat_mul, Compiled, CompiledFlow, CompiledMatrix, Layout, Mat2, SINGULARITY_THRESHOLD,
};
pub use integrate::{rk4_step, Scheme};
pub use output::{write_csv, write_json, write_svg, CSV_FIXED_CHANNELS};

use crate::double_row::extract_hamiltonian;
use crate::error::{Error, Result};
use crate::ring::{Fraction, Generator, RingElement};
use crate::spectral::{LaxFamily, LinearForm, SpectralFunction, SpectralMatrix};
use crate::toda::{bracket_eom, dn_boundary_elimination, Coordinate, EquationsOfMotion, ModelKind, ModelSpec};

/// Default `μ` values for the zero-curvature residual.
pub const DEFAULT_MU_SAMPLES: [f64; 5] = [0.3, 0.7, 1.1, 1.9, 2.3];

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "BILAX_THREADS";

/// Sizes the global worker pool from `BILAX_THREADS` when it is set.
/// Returns the cap that was applied.
pub fn init_threads_from_env() -> Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // A pool that is already running keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(Some(n))
}

/// Where the equations of motion come from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EomSource {
    /// The closed-form equations of the model.
    #[default]
    Closed,
    /// Brackets with the Hamiltonian extracted from the transfer matrix.
    Bracket,
}

/// A state in [`Layout`] order. Positions are stored as `x_j`, not `e^{x_j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub values: Vec<f64>,
}

/// Compiled `d/dT` of every coordinate.
#[derive(Clone, Debug)]
pub struct VectorField {
    layout: Layout,
    rates: Vec<Compiled>,
}

impl VectorField {
    pub fn new(model: &ModelSpec, source: EomSource) -> Result<Self> {
        let eom = match source {
            EomSource::Closed => model.paper_eom()?,
            EomSource::Bracket => {
                let exp = model.double_row().expansion()?;
                let h = extract_hamiltonian(&exp, &model.recipe)?;
                bracket_eom(model.ps(), &h, &model.coordinates())?
            }
        };
        Self::from_equations(model, &eom)
    }

    /// Compiles explicit equations; every coordinate of the model needs a rate.
    pub fn from_equations(model: &ModelSpec, eom: &EquationsOfMotion) -> Result<Self> {
        let layout = Layout::new(model.coordinates());
        let rates = layout
            .coords
            .iter()
            .map(|&c| {
                let f = eom.rate(c).ok_or_else(|| Error::InvalidModel(format!("no rate for {c}")))?;
                Compiled::fraction(f, &layout)
            })
            .collect::<Result<_>>()?;
        Ok(VectorField { layout, rates })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    fn eval_env(&self, env: &[f64], out: &mut [f64]) -> Result<()> {
        for (o, r) in out.iter_mut().zip(&self.rates) {
            *o = r.eval(env)?;
        }
        Ok(())
    }

    pub fn eval(&self, state: &[f64], out: &mut [f64]) -> Result<()> {
        self.eval_env(&self.layout.env(state, 0.0), out)
    }

    pub fn at(&self, p: &PhasePoint) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.layout.len()];
        self.eval(&p.values, &mut out)?;
        Ok(out)
    }
}

/// Sampled states with named diagnostic channels aligned with `times`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub coordinates: Vec<Coordinate>,
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub channels: BTreeMap<String, Vec<f64>>,
    /// Set when integration stopped early.
    pub error: Option<String>,
}

impl Trajectory {
    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.channels.get(name).map(Vec::as_slice)
    }

    /// Largest value of a channel.
    pub fn max(&self, name: &str) -> Option<f64> {
        self.channel(name).map(|c| c.iter().copied().fold(0.0, f64::max))
    }

    pub fn is_complete(&self) -> bool {
        self.error.is_none()
    }
}

/// Channel limits checked after a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Every Hamiltonian and transfer-matrix coefficient drift.
    pub hamiltonian: f64,
    /// Casimir and `F - e^{x_1}` drift.
    pub casimir: f64,
    pub zero_curvature: f64,
    pub boundary_condition: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hamiltonian: 1e-8,
            casimir: 1e-10,
            zero_curvature: 1e-12,
            boundary_condition: 1e-8,
        }
    }
}

impl Tolerances {
    /// Limit for a channel name, if it is monitored.
    pub fn limit(&self, channel: &str) -> Option<f64> {
        match channel {
            "casimir_drift" | "F_minus_u1_drift" => Some(self.casimir),
            "zc_residual" => Some(self.zero_curvature),
            "bc_x0_residual" => Some(self.boundary_condition),
            c if c.ends_with("_drift") => Some(self.hamiltonian),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelVerdict {
    pub channel: String,
    pub max: f64,
    pub limit: f64,
    pub within: bool,
}

/// Max of every monitored channel against its limit.
pub fn check_channels(traj: &Trajectory, tol: &Tolerances) -> Vec<ChannelVerdict> {
    traj.channels
        .keys()
        .filter_map(|name| {
            let limit = tol.limit(name)?;
            let max = traj.max(name)?;
            Some(ChannelVerdict {
                channel: name.clone(),
                max,
                limit,
                within: max <= limit,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub mu_samples: Vec<f64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            dt: 1e-3,
            steps: 10_000,
            scheme: Scheme::Rk4,
            mu_samples: DEFAULT_MU_SAMPLES.to_vec(),
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if let Scheme::Rk4Adaptive { tol } = self.scheme {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
            }
        }
        if let Some(&m) = self.mu_samples.iter().find(|m| !m.is_finite() || **m == 0.0) {
            return Err(Error::Config(format!("mu samples must be finite and nonzero, got {m}")));
        }
        Ok(())
    }
}

/// Residual of one matrix equation `lhs = a - b`.
///
/// `scaled` divides the Frobenius norm by `max(1, |lhs| + |a| + |b|)`, the
/// size of the terms that cancel. For entries of order one it equals
/// `absolute`; it stays meaningful when `e^{x_j}` grows along an open chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub absolute: f64,
    pub scaled: f64,
}

impl Residual {
    fn of(lhs: &Mat2, a: &Mat2, b: &Mat2) -> Self {
        let mut r = *lhs;
        for i in 0..4 {
            r[i] -= a[i] - b[i];
        }
        let absolute = frobenius(&r);
        let size = frobenius(lhs) + frobenius(a) + frobenius(b);
        Residual {
            absolute,
            scaled: absolute / size.max(1.0),
        }
    }

    fn max(self, o: Residual) -> Residual {
        Residual {
            absolute: self.absolute.max(o.absolute),
            scaled: self.scaled.max(o.scaled),
        }
    }
}

/// Residuals of the discrete zero-curvature equations at one state and one `μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroCurvatureSample {
    /// One per site `j = 1..=N`.
    pub sites: Vec<Residual>,
    pub k_minus: Residual,
    pub k_plus: Residual,
}

impl ZeroCurvatureSample {
    pub fn max(&self) -> Residual {
        self.sites.iter().fold(self.k_minus.max(self.k_plus), |acc, &r| acc.max(r))
    }
}

#[derive(Clone, Debug)]
struct BoundaryProbe {
    tilde_u1: Compiled,
    tilde_rate: CompiledFlow,
    exp_minus_x0: Compiled,
    u2: Compiled,
}

/// A model compiled for numerics. Every parameter must be a number.
#[derive(Clone, Debug)]
pub struct Dynamics {
    kind: ModelKind,
    sites: usize,
    layout: Layout,
    field: VectorField,
    hamiltonian: Compiled,
    coefficients: Vec<(i32, Compiled)>,
    casimir: Option<Compiled>,
    f_minus_u1: Option<Compiled>,
    lax: Vec<CompiledMatrix>,
    flows: Vec<CompiledMatrix>,
    first_reflected: CompiledMatrix,
    last_reflected: CompiledMatrix,
    k_minus: CompiledMatrix,
    k_plus: CompiledMatrix,
    boundary: Option<BoundaryProbe>,
    constants: Option<(f64, f64)>,
}

fn numeric_constant(r: &RingElement) -> Option<f64> {
    r.as_constant().and_then(|c| c.to_f64())
}

impl Dynamics {
    pub fn new(model: &ModelSpec, source: EomSource) -> Result<Self> {
        Self::with_field(model, VectorField::new(model, source)?)
    }

    /// Diagnostics of `model` along the flow of `eom`, which need not be the model's own.
    pub fn from_equations(model: &ModelSpec, eom: &EquationsOfMotion) -> Result<Self> {
        Self::with_field(model, VectorField::from_equations(model, eom)?)
    }

    fn with_field(model: &ModelSpec, field: VectorField) -> Result<Self> {
        let layout = field.layout.clone();
        let n = model.sites();
        let dr = model.double_row();
        let data = dr.corollary_data(&model.recipe)?;
        let mu = LinearForm::mu();
        let compile_m = |m: &SpectralMatrix| CompiledMatrix::new(m, &layout);

        let coefficients = data
            .expansion
            .coefficients()
            .iter()
            .filter(|(_, c)| !c.is_field_free())
            .map(|(&k, c)| Ok((k, Compiled::fraction(c, &layout)?)))
            .collect::<Result<_>>()?;
        let lax = (1..=n)
            .map(|j| compile_m(&model.lax.lax(j, mu)))
            .collect::<Result<_>>()?;
        let flows = data.flows.forward.iter().map(compile_m).collect::<Result<_>>()?;

        let (mut casimir, mut f_minus_u1, mut boundary, mut constants) = (None, None, None, None);
        if model.kind == ModelKind::Dn {
            casimir = Some(Compiled::ring(&model.ps().casimir()?, &layout)?);
            let fu = &RingElement::gen(Generator::F) - &RingElement::gen(Generator::U(1));
            f_minus_u1 = Some(Compiled::ring(&fu, &layout)?);
            let p = model.dn_params().expect("D_N parameters");
            constants = numeric_constant(&p.c_0).zip(numeric_constant(&p.c_1));
            // With c_0 = 0 the elimination does not exist; the singularity guard handles such states.
            if !p.c_0.is_zero() {
                let e = dn_boundary_elimination(model)?;
                boundary = Some(BoundaryProbe {
                    tilde_u1: Compiled::fraction(&e.tilde_u1, &layout)?,
                    tilde_rate: CompiledFlow::new(&e.tilde_rate, &layout)?,
                    exp_minus_x0: Compiled::fraction(&e.exp_minus_x0, &layout)?,
                    u2: Compiled::ring(&RingElement::gen(Generator::U(2)), &layout)?,
                });
            }
        }

        Ok(Dynamics {
            kind: model.kind,
            sites: n,
            hamiltonian: Compiled::fraction(&model.paper_hamiltonian()?, &layout)?,
            coefficients,
            casimir,
            f_minus_u1,
            lax,
            flows,
            first_reflected: compile_m(&data.flows.first_reflected)?,
            last_reflected: compile_m(&data.flows.last_reflected)?,
            k_minus: compile_m(&model.k_minus.at(mu))?,
            k_plus: compile_m(&model.k_plus.at(mu))?,
            boundary,
            constants,
            field,
            layout,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn vector_field(&self) -> &VectorField {
        &self.field
    }

    /// Validates a state: right length, finite, and away from `F = e^{x_1}`.
    pub fn point(&self, values: Vec<f64>) -> Result<PhasePoint> {
        if values.len() != self.layout.len() {
            return Err(Error::Dimension {
                expected: self.layout.len(),
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("non-finite coordinate {v}")));
        }
        if let Some(fu) = &self.f_minus_u1 {
            let d = fu.eval(&self.layout.env(&values, 0.0))?;
            if d.abs() < SINGULARITY_THRESHOLD {
                return Err(Error::Singularity {
                    value: d,
                    threshold: SINGULARITY_THRESHOLD,
                });
            }
        }
        Ok(PhasePoint { values })
    }

    /// `D_N` state with `F = e^{x_1} + c_0/2` and `E` fixed by `H² + EF = c_1/4`.
    pub fn dn_point(&self, x: &[f64], momenta: &[f64], h: f64) -> Result<PhasePoint> {
        let (c0, c1) = self
            .constants
            .ok_or_else(|| Error::Config("D_N initial data needs numeric c_0 and c_1".into()))?;
        let f = x.first().ok_or(Error::Dimension { expected: 1, found: 0 })?.exp() + c0 / 2.0;
        if f.abs() < SINGULARITY_THRESHOLD {
            return Err(Error::Singularity {
                value: f,
                threshold: SINGULARITY_THRESHOLD,
            });
        }
        let e = (c1 / 4.0 - h * h) / f;
        let mut v = x.to_vec();
        v.extend_from_slice(momenta);
        v.extend([e, f, h]);
        self.point(v)
    }

    /// Uniform `x_j, X_j ∈ [-1, 1]`; for `D_N` also `H ∈ [-1, 1]`, resampled
    /// until `|F| ≥ 10⁻³`.
    pub fn random_point(&self, seed: u64) -> Result<PhasePoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.sites;
        for _ in 0..1000 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let momenta: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            if self.kind == ModelKind::Bcn {
                let mut v = x;
                v.extend(momenta);
                return self.point(v);
            }
            let h = rng.gen_range(-1.0..=1.0);
            let (c0, _) = self
                .constants
                .ok_or_else(|| Error::Config("D_N initial data needs numeric c_0 and c_1".into()))?;
            if (x[0].exp() + c0 / 2.0).abs() >= 1e-3 {
                return self.dn_point(&x, &momenta, h);
            }
        }
        Err(Error::Config("could not sample a regular initial point".into()))
    }

    /// Integrates from `p0`; a singular denominator truncates the trajectory
    /// and is recorded in `error`.
    pub fn integrate(&self, p0: &PhasePoint, dt: f64, steps: usize, scheme: Scheme) -> Result<Trajectory> {
        SimulationConfig {
            dt,
            steps,
            scheme,
            mu_samples: DEFAULT_MU_SAMPLES.to_vec(),
        }
        .validate()?;
        let p0 = self.point(p0.values.clone())?;
        let f = |y: &[f64], out: &mut [f64]| self.field.eval(y, out);
        let run = integrate::run(&f, p0.values, dt, steps, scheme);
        Ok(Trajectory {
            coordinates: self.layout.coords.clone(),
            times: run.times,
            states: run.states.into_iter().map(|values| PhasePoint { values }).collect(),
            channels: BTreeMap::new(),
            error: run.error.map(|e| e.to_string()),
        })
    }

    /// Zero-curvature and boundary-flow residuals at one state.
    pub fn zero_curvature_at(&self, p: &PhasePoint, mu: f64) -> Result<ZeroCurvatureSample> {
        let env = self.layout.env(&p.values, mu);
        let mut rates = vec![0.0; self.layout.len()];
        self.field.eval_env(&env, &mut rates)?;
        let flows: Vec<Mat2> = self.flows.iter().map(|m| m.eval(&env)).collect::<Result<_>>()?;
        let mut sites = Vec::with_capacity(self.sites);
        for (j, l) in self.lax.iter().enumerate() {
            let lv = l.eval(&env)?;
            let dl = l.time_derivative(&self.layout, &env, &rates)?;
            sites.push(Residual::of(&dl, &mat_mul(&flows[j + 1], &lv), &mat_mul(&lv, &flows[j])));
        }
        let km = self.k_minus.eval(&env)?;
        let dkm = self.k_minus.time_derivative(&self.layout, &env, &rates)?;
        let first_refl = self.first_reflected.eval(&env)?;
        let k_minus = Residual::of(&dkm, &mat_mul(&flows[0], &km), &mat_mul(&km, &first_refl));
        let kp = self.k_plus.eval(&env)?;
        let dkp = self.k_plus.time_derivative(&self.layout, &env, &rates)?;
        let last_refl = self.last_reflected.eval(&env)?;
        let k_plus = Residual::of(&dkp, &mat_mul(&last_refl, &kp), &mat_mul(&kp, &flows[self.sites]));
        Ok(ZeroCurvatureSample { sites, k_minus, k_plus })
    }

    /// Max residual over sites, both ends and every `μ`, per sample.
    pub fn zero_curvature_residual(&self, traj: &Trajectory, mus: &[f64]) -> Result<Vec<Residual>> {
        let zero = Residual {
            absolute: 0.0,
            scaled: 0.0,
        };
        traj.states
            .par_iter()
            .map(|p| {
                mus.iter()
                    .map(|&mu| self.zero_curvature_at(p, mu).map(|s| s.max()))
                    .try_fold(zero, |acc, r| r.map(|r| acc.max(r)))
            })
            .collect()
    }

    /// `𝓗` at a state.
    pub fn hamiltonian(&self, p: &PhasePoint) -> Result<f64> {
        self.hamiltonian.eval(&self.layout.env(&p.values, 0.0))
    }

    fn series(&self, traj: &Trajectory, c: &Compiled) -> Result<Vec<f64>> {
        traj.states
            .par_iter()
            .map(|p| c.eval(&self.layout.env(&p.values, 0.0)))
            .collect()
    }

    /// Drift of `𝓗`, of every non-constant transfer-matrix coefficient
    /// (`b{k}_drift`), and for `D_N` of the Casimir and `F - e^{x_1}`.
    /// Drift is `|q(t) - q(0)| / max(|q(0)|, 1)`.
    pub fn conserved_channels(&self, traj: &Trajectory) -> Result<BTreeMap<String, Vec<f64>>> {
        let mut out = BTreeMap::new();
        out.insert("H_drift".to_string(), drift(&self.series(traj, &self.hamiltonian)?));
        for (k, c) in &self.coefficients {
            out.insert(format!("b{k}_drift"), drift(&self.series(traj, c)?));
        }
        if let Some(c) = &self.casimir {
            out.insert("casimir_drift".to_string(), drift(&self.series(traj, c)?));
        }
        if let Some(c) = &self.f_minus_u1 {
            out.insert("F_minus_u1_drift".to_string(), drift(&self.series(traj, c)?));
        }
        Ok(out)
    }

    /// `|d²x̃_1/dT² - (e^{x_2 - x̃_1} - e^{x̃_1 - x_0})|` at a state, divided by
    /// `max(1, sum of the magnitudes of the three terms)`. The second
    /// derivative comes from applying the exact flow twice.
    /// `None` unless the model is `D_N` with `c_0 ≠ 0`.
    pub fn boundary_condition_at(&self, p: &PhasePoint) -> Result<Option<f64>> {
        let Some(b) = &self.boundary else {
            return Ok(None);
        };
        let env = self.layout.env(&p.values, 0.0);
        let mut rates = vec![0.0; self.layout.len()];
        self.field.eval_env(&env, &mut rates)?;
        let accel = b.tilde_rate.time_derivative(&self.layout, &env, &rates)?;
        let w = b.tilde_u1.eval(&env)?;
        let (push, pull) = (b.u2.eval(&env)? / w, w * b.exp_minus_x0.eval(&env)?);
        let size = accel.abs() + push.abs() + pull.abs();
        Ok(Some((accel - push + pull).abs() / size.max(1.0)))
    }

    pub fn boundary_condition_residual(&self, traj: &Trajectory) -> Result<Option<Vec<f64>>> {
        if self.boundary.is_none() {
            return Ok(None);
        }
        let v = traj
            .states
            .par_iter()
            .map(|p| self.boundary_condition_at(p).map(|r| r.unwrap_or(0.0)))
            .collect::<Result<_>>()?;
        Ok(Some(v))
    }

    /// Integration followed by every diagnostic channel.
    pub fn simulate(&self, p0: &PhasePoint, cfg: &SimulationConfig) -> Result<Trajectory> {
        cfg.validate()?;
        let mut traj = self.integrate(p0, cfg.dt, cfg.steps, cfg.scheme)?;
        let mut channels = self.conserved_channels(&traj)?;
        let zc = self.zero_curvature_residual(&traj, &cfg.mu_samples)?;
        channels.insert("zc_residual".to_string(), zc.iter().map(|r| r.scaled).collect());
        channels.insert("zc_absolute".to_string(), zc.iter().map(|r| r.absolute).collect());
        if let Some(r) = self.boundary_condition_residual(&traj)? {
            channels.insert("bc_x0_residual".to_string(), r);
        }
        traj.channels = channels;
        Ok(traj)
    }

    /// Independent runs in parallel.
    pub fn simulate_many(&self, points: &[PhasePoint], cfg: &SimulationConfig) -> Vec<Result<Trajectory>> {
        points.par_iter().map(|p| self.simulate(p, cfg)).collect()
    }
}

fn drift(values: &[f64]) -> Vec<f64> {
    let Some(&q0) = values.first() else {
        return Vec::new();
    };
    let scale = q0.abs().max(1.0);
    values.iter().map(|q| (q - q0).abs() / scale).collect()
}

/// `expr` evaluated at a state of `model`.
pub fn evaluate_at(model: &ModelSpec, expr: &Fraction, p: &PhasePoint) -> Result<f64> {
    evaluate(expr, &Layout::new(model.coordinates()), &p.values)
}
