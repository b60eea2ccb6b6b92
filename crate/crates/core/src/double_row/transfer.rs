use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::{Coeff, Fraction, Generator, PoissonStructure, RingElement, Spectral};
use crate::spectral::SpectralScalar;

/// Coefficients of a polynomial generating function `Σ_k λ^k H^(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferExpansion {
    coefficients: BTreeMap<i32, Fraction>,
}

impl TransferExpansion {
    /// Reads off the `var`-coefficients of a pole-free scalar.
    pub fn from_scalar(s: &SpectralScalar, var: Spectral) -> Result<Self> {
        let g = Generator::Spectral(var);
        if s.poles().keys().any(|f| f.coefficient(var) != 0) || s.field_denom().contains(g) {
            return Err(Error::NotInvertible(format!(
                "generating function is not polynomial in {}",
                var.name()
            )));
        }
        if !s.poles().is_empty() {
            return Err(Error::NotInvertible("generating function carries spectral poles".into()));
        }
        let mut coefficients = BTreeMap::new();
        for (k, c) in s.numer().coefficients_in(g) {
            if k < 0 {
                return Err(Error::InvalidExponent(g));
            }
            coefficients.insert(k, Fraction::new(c, s.field_denom().clone())?);
        }
        Ok(TransferExpansion { coefficients })
    }

    pub fn from_coefficients(coefficients: BTreeMap<i32, Fraction>) -> Self {
        TransferExpansion {
            coefficients: coefficients.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn coefficients(&self) -> &BTreeMap<i32, Fraction> {
        &self.coefficients
    }

    pub fn coefficient(&self, power: i32) -> Result<&Fraction> {
        self.coefficients.get(&power).ok_or(Error::MissingCoefficient(power))
    }

    pub fn degree(&self) -> Option<i32> {
        self.coefficients.keys().next_back().copied()
    }

    /// Every pair of coefficients Poisson-commutes.
    pub fn in_involution(&self, ps: &PoissonStructure) -> Result<bool> {
        let cs: Vec<&Fraction> = self.coefficients.values().collect();
        for (i, a) in cs.iter().enumerate() {
            for b in &cs[i + 1..] {
                if !ps.bracket_fraction(a, b)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// How the physical Hamiltonian is read off a transfer expansion.
#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianRecipe {
    /// `scale · H^(power)`.
    ScaledCoefficient { power: i32, scale: Coeff },
    /// `scale · H^(numerator) / H^(denominator)`.
    Ratio {
        numerator: i32,
        denominator: i32,
        scale: Coeff,
    },
}

impl HamiltonianRecipe {
    /// Partial derivatives `∂𝓗/∂H^(k)` as fractions, one per referenced power.
    pub fn weights(&self, exp: &TransferExpansion) -> Result<Vec<(i32, Fraction)>> {
        match self {
            HamiltonianRecipe::ScaledCoefficient { power, scale } => {
                exp.coefficient(*power)?;
                Ok(vec![(*power, Fraction::from(RingElement::constant(scale.clone())))])
            }
            HamiltonianRecipe::Ratio {
                numerator,
                denominator,
                scale,
            } => {
                let a = exp.coefficient(*numerator)?;
                let b = exp.coefficient(*denominator)?;
                if b.is_zero() {
                    return Err(Error::VanishingCoefficient(*denominator));
                }
                let inv_b = b.recip()?;
                let wa = inv_b.scale(scale);
                let wb = (&(a * &inv_b) * &inv_b).scale(&-scale.clone());
                Ok(vec![(*numerator, wa), (*denominator, wb)])
            }
        }
    }

    pub fn referenced_powers(&self) -> Vec<i32> {
        match self {
            HamiltonianRecipe::ScaledCoefficient { power, .. } => vec![*power],
            HamiltonianRecipe::Ratio {
                numerator, denominator, ..
            } => vec![*numerator, *denominator],
        }
    }
}

pub fn extract_hamiltonian(exp: &TransferExpansion, recipe: &HamiltonianRecipe) -> Result<Fraction> {
    match recipe {
        HamiltonianRecipe::ScaledCoefficient { power, scale } => Ok(exp.coefficient(*power)?.scale(scale)),
        HamiltonianRecipe::Ratio {
            numerator,
            denominator,
            scale,
        } => {
            let b = exp.coefficient(*denominator)?;
            if b.is_zero() {
                return Err(Error::VanishingCoefficient(*denominator));
            }
            Ok(exp.coefficient(*numerator)?.div(b)?.scale(scale))
        }
    }
}

/// `a - b` contains no phase-space generator.
pub fn equal_up_to_constant(a: &Fraction, b: &Fraction) -> bool {
    (a - b).is_field_free()
}
