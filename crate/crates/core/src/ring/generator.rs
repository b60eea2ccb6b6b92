use std::fmt;

use serde::{Deserialize, Serialize};

/// Formal spectral variables. They are central in every Poisson structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spectral {
    Lambda,
    Mu,
    Nu,
}

impl Spectral {
    pub const ALL: [Spectral; 3] = [Spectral::Lambda, Spectral::Mu, Spectral::Nu];

    pub fn index(self) -> usize {
        match self {
            Spectral::Lambda => 0,
            Spectral::Mu => 1,
            Spectral::Nu => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Spectral::Lambda => "lambda",
            Spectral::Mu => "mu",
            Spectral::Nu => "nu",
        }
    }
}

/// Boundary and integration constants of the Toda models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Param {
    Theta1,
    Alpha1,
    Beta1,
    ThetaN,
    AlphaN,
    BetaN,
    C0,
    C1,
}

impl Param {
    pub const ALL: [Param; 8] = [
        Param::Theta1,
        Param::Alpha1,
        Param::Beta1,
        Param::ThetaN,
        Param::AlphaN,
        Param::BetaN,
        Param::C0,
        Param::C1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Theta1 => "theta_1",
            Param::Alpha1 => "alpha_1",
            Param::Beta1 => "beta_1",
            Param::ThetaN => "theta_N",
            Param::AlphaN => "alpha_N",
            Param::BetaN => "beta_N",
            Param::C0 => "c_0",
            Param::C1 => "c_1",
        }
    }

    /// Accepts the printed name with or without the underscore (`c0`, `thetaN`).
    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == name || p.name().replace('_', "") == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    Spectral,
    Parameter,
    /// `u_j = e^{x_j}`, the only kind allowed to carry negative exponents.
    CoordinateExp,
    Momentum,
    Sl2E,
    Sl2F,
    Sl2H,
}

/// A ring generator. Sites are 1-based.
///
/// The variant order fixes the canonical monomial ordering used for printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    Spectral(Spectral),
    Param(Param),
    X(usize),
    U(usize),
    E,
    F,
    H,
}

impl Generator {
    pub const LAMBDA: Generator = Generator::Spectral(Spectral::Lambda);
    pub const MU: Generator = Generator::Spectral(Spectral::Mu);
    pub const NU: Generator = Generator::Spectral(Spectral::Nu);

    pub fn kind(self) -> GeneratorKind {
        match self {
            Generator::Spectral(_) => GeneratorKind::Spectral,
            Generator::Param(_) => GeneratorKind::Parameter,
            Generator::X(_) => GeneratorKind::Momentum,
            Generator::U(_) => GeneratorKind::CoordinateExp,
            Generator::E => GeneratorKind::Sl2E,
            Generator::F => GeneratorKind::Sl2F,
            Generator::H => GeneratorKind::Sl2H,
        }
    }

    /// Parameters and spectral variables: central, never dynamical.
    pub fn is_central(self) -> bool {
        matches!(self, Generator::Spectral(_) | Generator::Param(_))
    }

    pub fn allows_negative_exponent(self) -> bool {
        matches!(self, Generator::U(_))
    }

    pub fn name(self) -> String {
        match self {
            Generator::Spectral(s) => s.name().to_string(),
            Generator::Param(p) => p.name().to_string(),
            Generator::X(j) => format!("X_{j}"),
            Generator::U(j) => format!("u_{j}"),
            Generator::E => "E".to_string(),
            Generator::F => "F".to_string(),
            Generator::H => "H".to_string(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
