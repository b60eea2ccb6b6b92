use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::element::{Coeff, RingElement};
use super::generator::Generator;
use super::poisson::PoissonStructure;
use crate::error::{Error, Result};

/// Quotient of two ring elements, reduced by scalar content only.
///
/// Equality is decided by cross-multiplication, so two fractions that differ
/// by a common polynomial factor still compare equal.
#[derive(Clone)]
pub struct Fraction {
    num: RingElement,
    den: RingElement,
}

impl Fraction {
    pub fn new(num: RingElement, den: RingElement) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: RingElement, den: RingElement) -> Self {
        if num.is_zero() {
            return Fraction {
                num,
                den: RingElement::one(),
            };
        }
        if let Some(c) = den.as_constant() {
            return Fraction {
                num: num.scale(&c.recip()),
                den: RingElement::one(),
            };
        }
        let mut content = den.content();
        if den.leading_coefficient().is_some_and(|c| c.is_negative()) {
            content = -content;
        }
        let inv = content.recip();
        Fraction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RingElement::zero().into()
    }

    pub fn one() -> Self {
        RingElement::one().into()
    }

    pub fn numer(&self) -> &RingElement {
        &self.num
    }

    pub fn denom(&self) -> &RingElement {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The ring element if the denominator is 1.
    pub fn as_ring(&self) -> Option<&RingElement> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Fraction::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn div(&self, other: &Fraction) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn derivative(&self, g: Generator) -> Self {
        let top = &(&self.num.derivative(g) * &self.den) - &(&self.num * &self.den.derivative(g));
        Self::normalized(top, &self.den * &self.den)
    }

    /// Free of phase-space generators: every partial derivative vanishes.
    pub fn is_field_free(&self) -> bool {
        let mut gens = self.num.generators();
        gens.extend(self.den.generators());
        gens.into_iter()
            .filter(|g| !g.is_central())
            .all(|g| self.derivative(g).is_zero())
    }

    pub fn substitute(&self, g: Generator, value: &RingElement) -> Result<Self> {
        Fraction::new(self.num.substitute(g, value)?, self.den.substitute(g, value)?)
    }

    /// Substitutes a fraction for `g`, clearing its denominator.
    pub fn substitute_fraction(&self, g: Generator, value: &Fraction) -> Result<Self> {
        let sub = |f: &RingElement| -> Result<Fraction> {
            let mut acc = Fraction::zero();
            for (power, rest) in f.coefficients_in(g) {
                let factor = if power >= 0 {
                    pow_fraction(value, power as u32)
                } else {
                    pow_fraction(&value.recip()?, power.unsigned_abs())
                };
                acc = &acc + &(&Fraction::from(rest) * &factor);
            }
            Ok(acc)
        };
        sub(&self.num)?.div(&sub(&self.den)?)
    }

    pub fn evaluate(&self, value: &impl Fn(Generator) -> f64) -> f64 {
        self.num.evaluate(value) / self.den.evaluate(value)
    }
}

fn pow_fraction(f: &Fraction, e: u32) -> Fraction {
    Fraction::normalized(f.num.pow(e), f.den.pow(e))
}

impl From<RingElement> for Fraction {
    fn from(num: RingElement) -> Self {
        Fraction {
            num,
            den: RingElement::one(),
        }
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Fraction {
    type Output = Fraction;
    fn add(self, rhs: &Fraction) -> Fraction {
        if self.den == rhs.den {
            return Fraction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        Fraction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &Fraction {
    type Output = Fraction;
    fn sub(self, rhs: &Fraction) -> Fraction {
        self + &(-rhs)
    }
}

impl Mul for &Fraction {
    type Output = Fraction;
    fn mul(self, rhs: &Fraction) -> Fraction {
        Fraction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        Fraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl PoissonStructure {
    /// Quotient rule: `{p/q, g} = ({p,g} q - p {q,g}) / q^2`, applied in both slots.
    pub fn bracket_fraction(&self, f: &Fraction, g: &Fraction) -> Result<Fraction> {
        let (p, q) = (f.numer(), f.denom());
        let (r, s) = (g.numer(), g.denom());
        let pr = self.bracket(p, r)?;
        let ps = self.bracket(p, s)?;
        let qr = self.bracket(q, r)?;
        let qs = self.bracket(q, s)?;
        // {p/q, r/s} = ({p,r} q s - p {q,r} s - {p,s} q r + p r {q,s}) / (q s)^2
        let qs_prod = q * s;
        let mut top = &pr * &qs_prod;
        top -= &(&(p * &qr) * s);
        top -= &(&(&ps * q) * r);
        top += &(&(p * r) * &qs);
        if top.is_zero() {
            return Ok(Fraction::zero());
        }
        Fraction::new(top, &qs_prod * &qs_prod)
    }
}
