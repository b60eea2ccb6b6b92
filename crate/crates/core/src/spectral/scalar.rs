use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::form::LinearForm;
use crate::error::{Error, Result};
use crate::ring::{integer, Coeff, Fraction, Generator, PoissonStructure, RingElement, Spectral};

/// `num / (den · Π form^e)`: a ring element with rational dependence on the
/// spectral variables through products of linear-form poles.
///
/// `den` is free of spectral variables. Poles are kept factored and
/// sign-normalized; equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct SpectralScalar {
    num: RingElement,
    den: RingElement,
    poles: BTreeMap<LinearForm, u32>,
}

fn has_spectral(r: &RingElement) -> bool {
    r.generators().iter().any(|g| matches!(g, Generator::Spectral(_)))
}

impl SpectralScalar {
    pub fn zero() -> Self {
        RingElement::zero().into()
    }

    pub fn one() -> Self {
        RingElement::one().into()
    }

    pub fn int(n: i64) -> Self {
        RingElement::int(n).into()
    }

    /// `num / form^power`.
    pub fn with_pole(num: RingElement, form: LinearForm, power: u32) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (form, sign) = form.normalized();
        let num = if sign < 0 && power % 2 == 1 { -num } else { num };
        let mut poles = BTreeMap::new();
        if power > 0 {
            poles.insert(form, power);
        }
        Ok(SpectralScalar {
            num,
            den: RingElement::one(),
            poles,
        })
    }

    /// `f` viewed as a spectral-free scalar.
    pub fn from_fraction(f: &Fraction) -> Self {
        SpectralScalar {
            num: f.numer().clone(),
            den: f.denom().clone(),
            poles: BTreeMap::new(),
        }
    }

    pub fn numer(&self) -> &RingElement {
        &self.num
    }

    pub fn field_denom(&self) -> &RingElement {
        &self.den
    }

    pub fn poles(&self) -> &BTreeMap<LinearForm, u32> {
        &self.poles
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The full denominator as a ring element (poles expanded).
    pub fn full_denominator(&self) -> RingElement {
        let mut d = self.den.clone();
        for (form, &e) in &self.poles {
            d = &d * &form.to_ring().pow(e);
        }
        d
    }

    /// Spectral-pole-free value as a fraction, if there are no poles.
    pub fn as_fraction(&self) -> Option<Fraction> {
        if self.poles.is_empty() {
            Fraction::new(self.num.clone(), self.den.clone()).ok()
        } else {
            None
        }
    }

    fn simplify_den(mut self) -> Self {
        if let Some(c) = self.den.as_constant() {
            if !c.is_one() {
                self.num = self.num.scale(&c.recip());
                self.den = RingElement::one();
            }
        }
        if self.num.is_zero() {
            self.den = RingElement::one();
            self.poles.clear();
        }
        self
    }

    pub fn scale_ring(&self, r: &RingElement) -> Self {
        SpectralScalar {
            num: &self.num * r,
            den: self.den.clone(),
            poles: self.poles.clone(),
        }
        .simplify_den()
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        SpectralScalar {
            num: self.num.scale(c),
            den: self.den.clone(),
            poles: self.poles.clone(),
        }
        .simplify_den()
    }

    pub fn mul_fraction(&self, f: &Fraction) -> Self {
        self * &SpectralScalar::from_fraction(f)
    }

    /// Multiplicative inverse; only spectral-free numerators can move to the denominator.
    pub fn inverse(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::NotInvertible("zero scalar".into()));
        }
        if has_spectral(&self.num) {
            return Err(Error::NotInvertible(format!(
                "numerator {} depends on a spectral variable",
                self.num
            )));
        }
        let mut num = self.den.clone();
        for (form, &e) in &self.poles {
            num = &num * &form.to_ring().pow(e);
        }
        Ok(SpectralScalar {
            num,
            den: self.num.clone(),
            poles: BTreeMap::new(),
        }
        .simplify_den())
    }

    /// Entrywise Poisson bracket. Spectral variables and poles are central.
    pub fn bracket(ps: &PoissonStructure, a: &Self, b: &Self) -> Result<Self> {
        let fa = Fraction::new(a.num.clone(), a.den.clone())?;
        let fb = Fraction::new(b.num.clone(), b.den.clone())?;
        let f = ps.bracket_fraction(&fa, &fb)?;
        let mut poles = a.poles.clone();
        for (form, &e) in &b.poles {
            *poles.entry(*form).or_insert(0) += e;
        }
        Ok(SpectralScalar {
            num: f.numer().clone(),
            den: f.denom().clone(),
            poles,
        }
        .simplify_den())
    }

    /// Coefficient of `var^k` in the expansion at `var → ∞`.
    ///
    /// Poles involving `var` are expanded as geometric series; the result keeps
    /// the remaining poles and the field denominator.
    pub fn laurent_coefficient(&self, var: Spectral, k: i32) -> Result<Self> {
        let g = Generator::Spectral(var);
        if self.den.contains(g) {
            return Err(Error::NotInvertible(format!(
                "field denominator depends on {}",
                var.name()
            )));
        }
        let mut remaining = BTreeMap::new();
        let mut expand: Vec<(i32, RingElement, u32)> = Vec::new();
        let mut total = 0i32;
        for (form, &e) in &self.poles {
            let c = form.coefficient(var);
            match c {
                0 => {
                    remaining.insert(*form, e);
                }
                1 | -1 => {
                    // 1/(c v + R) = c / (v + c R)
                    let shifted = form.without(var).to_ring().scale(&integer(c as i64));
                    expand.push((c, shifted, e));
                    total += e as i32;
                }
                _ => {
                    return Err(Error::NotInvertible(format!(
                        "pole {form} has coefficient {c} on {}",
                        var.name()
                    )))
                }
            }
        }
        let by_power = self.num.coefficients_in(g);
        let max_power = by_power.keys().next_back().copied().unwrap_or(0);
        let depth = max_power - total - k;
        let mut num = RingElement::zero();
        if depth >= 0 {
            let depth = depth as usize;
            let mut series = vec![RingElement::zero(); depth + 1];
            series[0] = RingElement::one();
            for (c, shifted, e) in &expand {
                let single = inverse_power_series(shifted, *e, depth);
                series = convolve(&series, &single, depth);
                if *c < 0 && e % 2 == 1 {
                    series = series.iter().map(|s| -s).collect();
                }
            }
            for (p, a) in by_power {
                let n = p - total - k;
                if n >= 0 {
                    num += &(&a * &series[n as usize]);
                }
            }
        }
        Ok(SpectralScalar {
            num,
            den: self.den.clone(),
            poles: remaining,
        }
        .simplify_den())
    }

    pub fn substitute(&self, g: Generator, value: &RingElement) -> Result<Self> {
        let f = Fraction::new(self.num.clone(), self.den.clone())?.substitute(g, value)?;
        Ok(SpectralScalar {
            num: f.numer().clone(),
            den: f.denom().clone(),
            poles: self.poles.clone(),
        }
        .simplify_den())
    }

    pub fn substitute_fraction(&self, g: Generator, value: &Fraction) -> Result<Self> {
        let f = Fraction::new(self.num.clone(), self.den.clone())?.substitute_fraction(g, value)?;
        Ok(SpectralScalar {
            num: f.numer().clone(),
            den: f.denom().clone(),
            poles: self.poles.clone(),
        }
        .simplify_den())
    }

    pub fn evaluate(&self, value: &impl Fn(Generator) -> f64) -> f64 {
        let mut den = self.den.evaluate(value);
        for (form, &e) in &self.poles {
            den *= form.evaluate(&|s| value(Generator::Spectral(s))).powi(e as i32);
        }
        self.num.evaluate(value) / den
    }
}

/// `(v + R)^{-e} = v^{-e} Σ_n C(e+n-1, n) (-R)^n v^{-n}`, coefficients up to `depth`.
fn inverse_power_series(shifted: &RingElement, e: u32, depth: usize) -> Vec<RingElement> {
    let minus = -shifted;
    let mut out = Vec::with_capacity(depth + 1);
    let mut power = RingElement::one();
    let mut binom = Coeff::one();
    for n in 0..=depth {
        if n > 0 {
            power = &power * &minus;
            // C(e+n-1, n) = C(e+n-2, n-1) * (e+n-1) / n
            binom = binom * integer(e as i64 + n as i64 - 1) / integer(n as i64);
        }
        out.push(power.scale(&binom));
    }
    out
}

fn convolve(a: &[RingElement], b: &[RingElement], depth: usize) -> Vec<RingElement> {
    let mut out = vec![RingElement::zero(); depth + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(depth + 1 - i) {
            out[i + j] += &(x * y);
        }
    }
    out
}

impl From<RingElement> for SpectralScalar {
    fn from(num: RingElement) -> Self {
        SpectralScalar {
            num,
            den: RingElement::one(),
            poles: BTreeMap::new(),
        }
    }
}

impl From<Generator> for SpectralScalar {
    fn from(g: Generator) -> Self {
        RingElement::gen(g).into()
    }
}

impl PartialEq for SpectralScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.num.is_zero() || other.num.is_zero() {
            return self.num.is_zero() && other.num.is_zero();
        }
        if self.den == other.den && self.poles == other.poles {
            return self.num == other.num;
        }
        &self.num * &other.full_denominator() == &other.num * &self.full_denominator()
    }
}

impl fmt::Display for SpectralScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() && self.poles.is_empty() {
            return write!(f, "{}", self.num);
        }
        let mut parts = Vec::new();
        if !self.den.is_one() {
            parts.push(format!("({})", self.den));
        }
        for (form, &e) in &self.poles {
            if e == 1 {
                parts.push(format!("({form})"));
            } else {
                parts.push(format!("({form})^{e}"));
            }
        }
        write!(f, "({}) / {}", self.num, parts.join("*"))
    }
}

impl fmt::Debug for SpectralScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &SpectralScalar {
    type Output = SpectralScalar;
    fn add(self, rhs: &SpectralScalar) -> SpectralScalar {
        if rhs.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return rhs.clone();
        }
        if self.poles == rhs.poles && self.den == rhs.den {
            return SpectralScalar {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
                poles: self.poles.clone(),
            }
            .simplify_den();
        }
        let mut poles = self.poles.clone();
        for (form, &e) in &rhs.poles {
            let slot = poles.entry(*form).or_insert(0);
            *slot = (*slot).max(e);
        }
        let lift = |s: &SpectralScalar| -> RingElement {
            let mut n = s.num.clone();
            for (form, &e) in &poles {
                let have = s.poles.get(form).copied().unwrap_or(0);
                if e > have {
                    n = &n * &form.to_ring().pow(e - have);
                }
            }
            n
        };
        let (a, b) = (lift(self), lift(rhs));
        let (num, den) = if self.den == rhs.den {
            (&a + &b, self.den.clone())
        } else {
            (&(&a * &rhs.den) + &(&b * &self.den), &self.den * &rhs.den)
        };
        SpectralScalar { num, den, poles }.simplify_den()
    }
}

impl Sub for &SpectralScalar {
    type Output = SpectralScalar;
    fn sub(self, rhs: &SpectralScalar) -> SpectralScalar {
        self + &(-rhs)
    }
}

impl Mul for &SpectralScalar {
    type Output = SpectralScalar;
    fn mul(self, rhs: &SpectralScalar) -> SpectralScalar {
        if self.num.is_zero() || rhs.num.is_zero() {
            return SpectralScalar::zero();
        }
        let mut poles = self.poles.clone();
        for (form, &e) in &rhs.poles {
            *poles.entry(*form).or_insert(0) += e;
        }
        let den = if rhs.den.is_one() {
            self.den.clone()
        } else if self.den.is_one() {
            rhs.den.clone()
        } else {
            &self.den * &rhs.den
        };
        SpectralScalar {
            num: &self.num * &rhs.num,
            den,
            poles,
        }
        .simplify_den()
    }
}

impl Neg for &SpectralScalar {
    type Output = SpectralScalar;
    fn neg(self) -> SpectralScalar {
        SpectralScalar {
            num: -&self.num,
            den: self.den.clone(),
            poles: self.poles.clone(),
        }
    }
}

impl Neg for SpectralScalar {
    type Output = SpectralScalar;
    fn neg(self) -> SpectralScalar {
        -&self
    }
}
