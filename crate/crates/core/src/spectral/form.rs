use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::ring::{integer, Generator, RingElement, Spectral};

/// Integer linear combination of the spectral variables, e.g. `λ - μ`.
///
/// Used both as the argument of spectral families (`ℓ(j, -λ)`, `r(λ + μ)`)
/// and, after sign normalization, as a pole factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearForm {
    coeffs: [i32; 3],
}

impl LinearForm {
    pub fn var(s: Spectral) -> Self {
        let mut coeffs = [0; 3];
        coeffs[s.index()] = 1;
        LinearForm { coeffs }
    }

    pub fn lambda() -> Self {
        Self::var(Spectral::Lambda)
    }

    pub fn mu() -> Self {
        Self::var(Spectral::Mu)
    }

    pub fn nu() -> Self {
        Self::var(Spectral::Nu)
    }

    pub fn coefficient(&self, s: Spectral) -> i32 {
        self.coeffs[s.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; 3]
    }

    /// Returns `(form', sign)` with `form = sign * form'` and the first nonzero
    /// coefficient of `form'` positive.
    pub fn normalized(&self) -> (LinearForm, i32) {
        match self.coeffs.iter().find(|&&c| c != 0) {
            Some(&c) if c < 0 => (-*self, -1),
            _ => (*self, 1),
        }
    }

    pub fn to_ring(&self) -> RingElement {
        let mut out = RingElement::zero();
        for s in Spectral::ALL {
            let c = self.coefficient(s);
            if c != 0 {
                out += &RingElement::gen(Generator::Spectral(s)).scale(&integer(c as i64));
            }
        }
        out
    }

    /// The part of the form without `s`.
    pub fn without(&self, s: Spectral) -> LinearForm {
        let mut out = *self;
        out.coeffs[s.index()] = 0;
        out
    }

    pub fn evaluate(&self, value: &impl Fn(Spectral) -> f64) -> f64 {
        Spectral::ALL
            .iter()
            .map(|&s| self.coefficient(s) as f64 * value(s))
            .sum()
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: LinearForm) -> LinearForm {
        let mut coeffs = self.coeffs;
        for (c, r) in coeffs.iter_mut().zip(rhs.coeffs) {
            *c += r;
        }
        LinearForm { coeffs }
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: LinearForm) -> LinearForm {
        self + (-rhs)
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.map(|c| -c),
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in Spectral::ALL {
            let c = self.coefficient(s);
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            f.write_str(s.name())?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
