use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ModelKind, ModelParams, ModelSpec};
use crate::error::{Error, Result};
use crate::ring::{integer, rational, Fraction, Generator, PoissonStructure, RingElement};
use crate::spectral::{LinearForm, SpectralMatrix, SpectralScalar};

fn g(x: Generator) -> RingElement {
    RingElement::gen(x)
}

fn u(j: usize) -> RingElement {
    g(Generator::U(j))
}

fn u_inv(j: usize) -> RingElement {
    RingElement::power_of(Generator::U(j), -1).expect("u_j is a unit")
}

fn x(j: usize) -> RingElement {
    g(Generator::X(j))
}

/// `Σ X_j²/2 + Σ e^{x_{j+1} - x_j}`.
fn bulk_hamiltonian(n: usize) -> RingElement {
    let mut h = RingElement::zero();
    for j in 1..=n {
        h += &(&x(j) * &x(j)).scale(&rational(1, 2));
    }
    for j in 1..n {
        h += &(&u(j + 1) * &u_inv(j));
    }
    h
}

/// Numerator `e^{x_2} + X_1² e^{x_1} - 2H e^{x_1} X_1 - E e^{2x_1}` of the `D_N` boundary term.
fn dn_boundary_numerator() -> RingElement {
    let (u1, x1) = (u(1), x(1));
    let mut b = u(2);
    b += &(&(&x1 * &x1) * &u1);
    b -= &(&(&g(Generator::H) * &u1) * &x1).scale(&integer(2));
    b -= &(&g(Generator::E) * &(&u1 * &u1));
    b
}

impl ModelSpec {
    /// The closed-form Hamiltonian of the chain.
    pub fn paper_hamiltonian(&self) -> Result<Fraction> {
        let n = self.sites();
        let bulk = bulk_hamiltonian(n);
        match &self.params {
            ModelParams::Bcn(p) => {
                let half = rational(1, 2);
                let (u1, un_inv) = (u(1), u_inv(n));
                let mut h = bulk;
                h += &(&p.alpha_1 * &u1);
                h += &(&p.beta_1 * &(&u1 * &u1)).scale(&half);
                h += &(&(&p.theta_1 * &x(1)) * &u1);
                h += &(&p.alpha_n * &un_inv);
                h += &(&p.beta_n * &(&un_inv * &un_inv)).scale(&half);
                h += &(&(&p.theta_n * &x(n)) * &un_inv);
                Ok(h.into())
            }
            ModelParams::Dn(_) => {
                let den = (&g(Generator::F) - &u(1)).scale(&integer(2));
                let b = Fraction::new(dn_boundary_numerator(), den)?;
                Ok(&Fraction::from(bulk) + &b)
            }
        }
    }

    /// Closed-form equations of motion. The `D_N` chain has no displayed
    /// first-order system, so its rates come from brackets with the closed-form Hamiltonian.
    pub fn paper_eom(&self) -> Result<EquationsOfMotion> {
        let n = self.sites();
        let p = match &self.params {
            ModelParams::Bcn(p) => p,
            ModelParams::Dn(_) => return bracket_eom(self.ps(), &self.paper_hamiltonian()?, &self.coordinates()),
        };
        let mut rates = Vec::new();
        for j in 1..=n {
            let mut v = x(j);
            if j == 1 {
                v += &(&p.theta_1 * &u(1));
            }
            if j == n {
                v += &(&p.theta_n * &u_inv(n));
            }
            rates.push((Coordinate::Position(j), v.into()));
        }
        for j in 1..=n {
            let mut f = RingElement::zero();
            if j < n {
                f += &(&u(j + 1) * &u_inv(j));
            }
            if j > 1 {
                f -= &(&u(j) * &u_inv(j - 1));
            }
            if j == 1 {
                let u1 = u(1);
                f -= &(&p.alpha_1 * &u1);
                f -= &(&p.beta_1 * &(&u1 * &u1));
                f -= &(&(&p.theta_1 * &x(1)) * &u1);
            }
            if j == n {
                let ui = u_inv(n);
                f += &(&p.alpha_n * &ui);
                f += &(&p.beta_n * &(&ui * &ui));
                f += &(&(&p.theta_n * &x(n)) * &ui);
            }
            rates.push((Coordinate::Momentum(j), f.into()));
        }
        Ok(EquationsOfMotion { rates })
    }

    /// Dynamical coordinates in state order: `x_1..x_N, X_1..X_N[, E, F, H]`.
    pub fn coordinates(&self) -> Vec<Coordinate> {
        let n = self.sites();
        let mut c: Vec<Coordinate> = (1..=n).map(Coordinate::Position).collect();
        c.extend((1..=n).map(Coordinate::Momentum));
        if self.kind == ModelKind::Dn {
            c.extend([Coordinate::E, Coordinate::F, Coordinate::H]);
        }
        c
    }

    /// Closed-form flow matrices `𝕄(j, mu)`, `j = 1..=N+1`.
    ///
    /// The bulk lower-left entry is `-e^{-x_{j-1}}`, and the `D_N` `𝕄(1)`
    /// lower-left entry carries `+E e^{2x_1}`; these are the values forced by
    /// the zero-curvature equations.
    pub fn paper_m(&self, j: usize, mu: LinearForm) -> Result<SpectralMatrix> {
        let n = self.sites();
        if j == 0 || j > n + 1 {
            return Err(Error::SiteOutOfRange { index: j, max: n + 1 });
        }
        let m = mu.to_ring();
        let half_m = m.scale(&rational(1, 2));
        let bulk = |j: usize| SpectralMatrix::from_ring_2x2([[-&half_m, u(j)], [-u_inv(j - 1), half_m.clone()]]);
        match &self.params {
            ModelParams::Bcn(p) => {
                if j == 1 {
                    let t = &p.theta_1 * &u(1);
                    let mut lower = &m * &p.theta_1;
                    lower -= &p.alpha_1;
                    lower -= &(&p.beta_1 * &u(1));
                    Ok(SpectralMatrix::from_ring_2x2([
                        [&t - &half_m, u(1)],
                        [lower, &half_m - &t],
                    ]))
                } else if j == n + 1 {
                    let t = &p.theta_n * &u_inv(n);
                    let mut upper = -&(&m * &p.theta_n);
                    upper += &p.alpha_n;
                    upper += &(&p.beta_n * &u_inv(n));
                    Ok(SpectralMatrix::from_ring_2x2([
                        [&t - &half_m, upper],
                        [-u_inv(n), &half_m - &t],
                    ]))
                } else {
                    Ok(bulk(j))
                }
            }
            ModelParams::Dn(_) => {
                let (u1, f, h, x1) = (u(1), g(Generator::F), g(Generator::H), x(1));
                let f_minus_u = &f - &u1;
                if j == 1 {
                    let pref = Fraction::new(RingElement::one(), (&u1 - &f).scale(&integer(2)))?;
                    let diag = &(&m * &f) + &(&u1 * &(&h.scale(&integer(2)) - &x1));
                    let upper = &u1 * &(&u1 - &f.scale(&integer(2)));
                    // e^{x_2} + X_1² e^{x_1} - 2H e^{x_1} X_1 + E e^{2x_1} - 2EF e^{x_1}
                    let e = g(Generator::E);
                    let mut tail_num = dn_boundary_numerator();
                    tail_num += &(&e * &(&u1 * &u1)).scale(&integer(2));
                    tail_num -= &(&(&e * &f) * &u1).scale(&integer(2));
                    let lower_poly = &(&m * &m) + &(&m * &h).scale(&integer(2));
                    let lower = &Fraction::from(lower_poly) + &Fraction::new(tail_num, f_minus_u)?;
                    let entry = |v: Fraction| SpectralScalar::from_fraction(&(&v * &pref));
                    Ok(SpectralMatrix::from_2x2([
                        [entry(diag.clone().into()), entry(upper.into())],
                        [entry(lower), entry((-diag).into())],
                    ]))
                } else if j == 2 {
                    let lower = Fraction::new(&u1 - &f.scale(&integer(2)), (&u1 * &f_minus_u).scale(&integer(2)))?;
                    Ok(SpectralMatrix::from_2x2([
                        [(-&half_m).into(), u(2).into()],
                        [SpectralScalar::from_fraction(&lower), half_m.clone().into()],
                    ]))
                } else if j == n + 1 {
                    Ok(SpectralMatrix::from_ring_2x2([
                        [-&half_m, RingElement::zero()],
                        [-u_inv(n), half_m.clone()],
                    ]))
                } else {
                    Ok(bulk(j))
                }
            }
        }
    }
}

/// A first-order coordinate of the phase space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coordinate {
    /// `x_j`, represented through `u_j = e^{x_j}`.
    Position(usize),
    /// `X_j`.
    Momentum(usize),
    E,
    F,
    H,
}

impl Coordinate {
    /// The ring generator carrying this coordinate.
    pub fn generator(self) -> Generator {
        match self {
            Coordinate::Position(j) => Generator::U(j),
            Coordinate::Momentum(j) => Generator::X(j),
            Coordinate::E => Generator::E,
            Coordinate::F => Generator::F,
            Coordinate::H => Generator::H,
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Position(j) => write!(f, "x_{j}"),
            Coordinate::Momentum(j) => write!(f, "X_{j}"),
            Coordinate::E => f.write_str("E"),
            Coordinate::F => f.write_str("F"),
            Coordinate::H => f.write_str("H"),
        }
    }
}

/// `d/dT` of each coordinate as an exact fraction.
#[derive(Clone, Debug, PartialEq)]
pub struct EquationsOfMotion {
    pub rates: Vec<(Coordinate, Fraction)>,
}

impl EquationsOfMotion {
    pub fn rate(&self, c: Coordinate) -> Option<&Fraction> {
        self.rates.iter().find(|(k, _)| *k == c).map(|(_, f)| f)
    }
}

/// `d/dT c = {𝓗, c}`; positions use `ẋ_j = {𝓗, u_j} / u_j`.
pub fn bracket_eom(ps: &PoissonStructure, h: &Fraction, coords: &[Coordinate]) -> Result<EquationsOfMotion> {
    let mut rates = Vec::with_capacity(coords.len());
    for &c in coords {
        let gen = Fraction::from(RingElement::gen(c.generator()));
        let mut rate = ps.bracket_fraction(h, &gen)?;
        if let Coordinate::Position(j) = c {
            rate = &rate * &Fraction::from(u_inv(j));
        }
        rates.push((c, rate));
    }
    Ok(EquationsOfMotion { rates })
}
