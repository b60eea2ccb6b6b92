use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::generator::Generator;
use crate::error::{Error, Result};

pub type Coeff = BigRational;

pub fn rational(num: i64, den: i64) -> Coeff {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// A power product of generators, sorted by generator, no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Generator, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(g: Generator) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn from_powers<I: IntoIterator<Item = (Generator, i32)>>(powers: I) -> Result<Self> {
        let mut acc: BTreeMap<Generator, i32> = BTreeMap::new();
        for (g, e) in powers {
            *acc.entry(g).or_insert(0) += e;
        }
        let mut out = Vec::with_capacity(acc.len());
        for (g, e) in acc {
            if e == 0 {
                continue;
            }
            if e < 0 && !g.allows_negative_exponent() {
                return Err(Error::InvalidExponent(g));
            }
            out.push((g, e));
        }
        Ok(Monomial(out))
    }

    pub fn powers(&self) -> &[(Generator, i32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, g: Generator) -> i32 {
        self.0
            .binary_search_by(|(h, _)| h.cmp(&g))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lowers the exponent of `g` by one. Callers guarantee the result is valid.
    pub(crate) fn lower(&self, g: Generator) -> Monomial {
        let mut out = self.0.clone();
        match out.binary_search_by(|(h, _)| h.cmp(&g)) {
            Ok(i) => {
                out[i].1 -= 1;
                if out[i].1 == 0 {
                    out.remove(i);
                }
            }
            Err(i) => out.insert(i, (g, -1)),
        }
        Monomial(out)
    }

    pub fn without(&self, g: Generator) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(h, _)| *h != g).collect())
    }

    pub fn is_central(&self) -> bool {
        self.0.iter().all(|(g, _)| g.is_central())
    }

    /// Inverse of a monomial built only from `u_j` generators.
    pub fn unit_inverse(&self) -> Option<Monomial> {
        if self.0.iter().all(|(g, _)| g.allows_negative_exponent()) {
            Some(Monomial(self.0.iter().map(|&(g, e)| (g, -e)).collect()))
        } else {
            None
        }
    }

    pub fn evaluate(&self, value: &impl Fn(Generator) -> f64) -> f64 {
        self.0.iter().fold(1.0, |acc, &(g, e)| acc * value(g).powi(e))
    }
}

/// Exact Laurent polynomial in the ring generators with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElement {
    terms: BTreeMap<Monomial, Coeff>,
}

impl RingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(integer(n))
    }

    pub fn gen(g: Generator) -> Self {
        Self::term(Monomial::generator(g), Coeff::one())
    }

    /// `g^e`; only `u_j` accepts negative `e`.
    pub fn power_of(g: Generator, e: i32) -> Result<Self> {
        Ok(Self::term(Monomial::from_powers([(g, e)])?, Coeff::one()))
    }

    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        RingElement { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(iter: I) -> Self {
        let mut out = RingElement::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this element has no generator at all.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The single monomial of a one-term element.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Coeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RingElement {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        RingElement {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().iter().map(|(g, _)| *g))
            .collect()
    }

    /// No phase-space generator appears (parameters and spectral variables allowed).
    pub fn is_field_free(&self) -> bool {
        self.terms.keys().all(Monomial::is_central)
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.terms.keys().any(|m| m.exponent(g) != 0)
    }

    pub fn derivative(&self, g: Generator) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(g);
            if e != 0 {
                out.add_term(m.lower(g), c * integer(e as i64));
            }
        }
        out
    }

    /// Groups terms by the exponent of `g`; the values no longer contain `g`.
    pub fn coefficients_in(&self, g: Generator) -> BTreeMap<i32, RingElement> {
        let mut out: BTreeMap<i32, RingElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(g))
                .or_default()
                .add_term(m.without(g), c.clone());
        }
        out
    }

    pub fn coefficient_of(&self, g: Generator, power: i32) -> RingElement {
        self.coefficients_in(g).remove(&power).unwrap_or_default()
    }

    /// Replaces `g` by `value`. Negative powers need `value` to be a unit monomial.
    pub fn substitute(&self, g: Generator, value: &RingElement) -> Result<Self> {
        let inverse = value
            .as_monomial()
            .and_then(|(m, c)| m.unit_inverse().map(|mi| (mi, c.recip())));
        let mut out = Self::zero();
        for (power, rest) in self.coefficients_in(g) {
            let factor = if power >= 0 {
                value.pow(power as u32)
            } else {
                let (mi, ci) = inverse.clone().ok_or(Error::InvalidExponent(g))?;
                RingElement::term(mi, ci).pow(power.unsigned_abs())
            };
            out += &(&rest * &factor);
        }
        Ok(out)
    }

    /// Positive rational `c` with every coefficient divided by `c` integral and coprime.
    pub fn content(&self) -> Coeff {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Coeff::one();
        }
        BigRational::new(num, den)
    }

    /// Leading coefficient in monomial order.
    pub fn leading_coefficient(&self) -> Option<&Coeff> {
        self.terms.values().next_back()
    }

    pub fn evaluate(&self, value: &impl Fn(Generator) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64().unwrap_or(f64::NAN) * m.evaluate(value))
            .sum()
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    let mut exp_parts: Vec<(usize, i32)> = Vec::new();
    for &(g, e) in m.powers() {
        match g {
            Generator::U(j) => exp_parts.push((j, e)),
            _ if e == 1 => parts.push(g.name()),
            _ => parts.push(format!("{}^{}", g.name(), e)),
        }
    }
    if !exp_parts.is_empty() {
        // Positive exponents first so that exp(x_2 - x_1) reads naturally.
        exp_parts.sort_by_key(|&(j, e)| (e < 0, j));
        let mut s = String::new();
        for (i, (j, e)) in exp_parts.iter().enumerate() {
            let mag = e.abs();
            let body = if mag == 1 {
                format!("x_{j}")
            } else {
                format!("{mag}*x_{j}")
            };
            if i == 0 {
                if *e < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if *e < 0 { " - " } else { " + " });
            }
            s.push_str(&body);
        }
        parts.push(format!("exp({s})"));
    }
    f.write_str(&parts.join("*"))
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl From<Generator> for RingElement {
    fn from(g: Generator) -> Self {
        RingElement::gen(g)
    }
}

impl From<i64> for RingElement {
    fn from(n: i64) -> Self {
        RingElement::int(n)
    }
}

impl From<Coeff> for RingElement {
    fn from(c: Coeff) -> Self {
        RingElement::constant(c)
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.mul(b), c * d);
            }
        }
        out
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RingElement> for RingElement {
            type Output = RingElement;
            fn $method(self, rhs: &RingElement) -> RingElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<RingElement> for &RingElement {
            type Output = RingElement;
            fn $method(self, rhs: RingElement) -> RingElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}
