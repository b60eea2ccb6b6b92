use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Coeff, Fraction, Generator, RingElement, Spectral};
use crate::spectral::{SpectralMatrix, SpectralScalar};
use crate::toda::Coordinate;

/// Denominators smaller than this in magnitude abort evaluation.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Assignment of state-vector slots to coordinates.
///
/// The numeric environment of a state is the state vector with every
/// position `x_j` replaced by `e^{x_j}`, followed by one slot for `μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    pub coords: Vec<Coordinate>,
}

impl Layout {
    pub fn new(coords: Vec<Coordinate>) -> Self {
        Layout { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn index(&self, c: Coordinate) -> Option<usize> {
        self.coords.iter().position(|&k| k == c)
    }

    fn mu_slot(&self) -> usize {
        self.coords.len()
    }

    fn slot(&self, g: Generator) -> Result<usize> {
        if g == Generator::Spectral(Spectral::Mu) {
            return Ok(self.mu_slot());
        }
        self.coords
            .iter()
            .position(|c| c.generator() == g)
            .ok_or(Error::Unassigned(g))
    }

    /// Fills `env` from a state and a value of `μ`.
    pub fn fill_env(&self, state: &[f64], mu: f64, env: &mut Vec<f64>) {
        env.clear();
        env.extend(self.coords.iter().zip(state).map(|(c, &v)| match c {
            Coordinate::Position(_) => v.exp(),
            _ => v,
        }));
        env.push(mu);
    }

    pub fn env(&self, state: &[f64], mu: f64) -> Vec<f64> {
        let mut env = Vec::with_capacity(self.len() + 1);
        self.fill_env(state, mu, &mut env);
        env
    }

    /// `d g / dT` for the generator in `slot`, given coordinate rates.
    fn generator_rate(&self, slot: usize, env: &[f64], rates: &[f64]) -> f64 {
        match self.coords[slot] {
            Coordinate::Position(_) => env[slot] * rates[slot],
            _ => rates[slot],
        }
    }
}

/// Double-double value `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from_coeff(c: &Coeff) -> Dd {
        let hi = c.to_f64().unwrap_or(f64::NAN);
        let lo = BigRational::from_float(hi)
            .map(|h| (c - h).to_f64().unwrap_or(0.0))
            .unwrap_or(0.0);
        Dd { hi, lo }
    }

    fn recip(v: f64) -> Dd {
        let hi = 1.0 / v;
        Dd {
            hi,
            lo: (-hi).mul_add(v, 1.0) / v,
        }
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn mul_f64(self, v: f64) -> Dd {
        let p = self.hi * v;
        let e = self.hi.mul_add(v, -p);
        quick_two_sum(p, self.lo.mul_add(v, e))
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }
}

#[derive(Clone, Debug)]
struct Term {
    coeff: Dd,
    factors: Vec<(usize, i32)>,
}

/// Sum of monomials, each product and the running sum carried in
/// double-double so that cancellation between large terms stays exact to
/// about 30 digits.
#[derive(Clone, Debug)]
struct Poly {
    terms: Vec<Term>,
}

impl Poly {
    fn new(r: &RingElement, layout: &Layout) -> Result<Self> {
        let terms = r
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .powers()
                    .iter()
                    .map(|&(g, e)| Ok((layout.slot(g)?, e)))
                    .collect::<Result<_>>()?;
                Ok(Term {
                    coeff: Dd::from_coeff(c),
                    factors,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Poly { terms })
    }

    fn eval(&self, env: &[f64]) -> f64 {
        let mut acc = Dd::ZERO;
        for t in &self.terms {
            let mut p = t.coeff;
            for &(i, e) in &t.factors {
                let v = env[i];
                if e > 0 {
                    for _ in 0..e {
                        p = p.mul_f64(v);
                    }
                } else {
                    let r = Dd::recip(v);
                    for _ in 0..-e {
                        p = p.mul(r);
                    }
                }
            }
            acc = acc.add(p);
        }
        acc.hi + acc.lo
    }
}

/// A fraction compiled to floating-point evaluation.
#[derive(Clone, Debug)]
pub struct Compiled {
    num: Poly,
    den: Option<Poly>,
}

impl Compiled {
    pub fn ring(r: &RingElement, layout: &Layout) -> Result<Self> {
        Ok(Compiled {
            num: Poly::new(r, layout)?,
            den: None,
        })
    }

    pub fn fraction(f: &Fraction, layout: &Layout) -> Result<Self> {
        let den = f.denom();
        Ok(Compiled {
            num: Poly::new(f.numer(), layout)?,
            den: if den.is_one() { None } else { Some(Poly::new(den, layout)?) },
        })
    }

    pub fn scalar(s: &SpectralScalar, layout: &Layout) -> Result<Self> {
        Self::fraction(&scalar_fraction(s)?, layout)
    }

    pub fn eval(&self, env: &[f64]) -> Result<f64> {
        let n = self.num.eval(env);
        match &self.den {
            None => Ok(n),
            Some(d) => {
                let d = d.eval(env);
                if d.abs() < SINGULARITY_THRESHOLD || !d.is_finite() {
                    return Err(Error::Singularity {
                        value: d,
                        threshold: SINGULARITY_THRESHOLD,
                    });
                }
                Ok(n / d)
            }
        }
    }
}

/// Spectral scalar as a single fraction, poles moved into the denominator.
pub(crate) fn scalar_fraction(s: &SpectralScalar) -> Result<Fraction> {
    Fraction::new(s.numer().clone(), s.full_denominator())
}

/// Row-major 2×2 numeric matrix.
pub type Mat2 = [f64; 4];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

pub fn frobenius(a: &Mat2) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// A compiled 2×2 matrix together with its partial derivatives, so that
/// `d/dT` follows from the chain rule and the exact vector field.
#[derive(Clone, Debug)]
pub struct CompiledMatrix {
    entries: Vec<Compiled>,
    partials: Vec<(usize, Vec<Compiled>)>,
}

impl CompiledMatrix {
    pub fn new(m: &SpectralMatrix, layout: &Layout) -> Result<Self> {
        m.expect_dim(2)?;
        let fractions: Vec<Fraction> = m.entries().iter().map(scalar_fraction).collect::<Result<_>>()?;
        let entries = fractions.iter().map(|f| Compiled::fraction(f, layout)).collect::<Result<_>>()?;
        let mut partials = Vec::new();
        for (slot, c) in layout.coords.iter().enumerate() {
            let g = c.generator();
            if !fractions.iter().any(|f| f.numer().contains(g) || f.denom().contains(g)) {
                continue;
            }
            let d = fractions
                .iter()
                .map(|f| Compiled::fraction(&f.derivative(g), layout))
                .collect::<Result<_>>()?;
            partials.push((slot, d));
        }
        Ok(CompiledMatrix { entries, partials })
    }

    pub fn eval(&self, env: &[f64]) -> Result<Mat2> {
        let mut out = [0.0; 4];
        for (o, e) in out.iter_mut().zip(&self.entries) {
            *o = e.eval(env)?;
        }
        Ok(out)
    }

    /// `d/dT` of the matrix along coordinate rates.
    pub fn time_derivative(&self, layout: &Layout, env: &[f64], rates: &[f64]) -> Result<Mat2> {
        let mut out = [0.0; 4];
        for (slot, d) in &self.partials {
            let r = layout.generator_rate(*slot, env, rates);
            for (o, e) in out.iter_mut().zip(d) {
                *o += e.eval(env)? * r;
            }
        }
        Ok(out)
    }
}

/// Gradient of a scalar fraction, for `d/dT` of derived quantities.
#[derive(Clone, Debug)]
pub struct CompiledFlow {
    value: Compiled,
    partials: Vec<(usize, Compiled)>,
}

impl CompiledFlow {
    pub fn new(f: &Fraction, layout: &Layout) -> Result<Self> {
        let mut partials = Vec::new();
        for (slot, c) in layout.coords.iter().enumerate() {
            let g = c.generator();
            if f.numer().contains(g) || f.denom().contains(g) {
                partials.push((slot, Compiled::fraction(&f.derivative(g), layout)?));
            }
        }
        Ok(CompiledFlow {
            value: Compiled::fraction(f, layout)?,
            partials,
        })
    }

    pub fn eval(&self, env: &[f64]) -> Result<f64> {
        self.value.eval(env)
    }

    pub fn time_derivative(&self, layout: &Layout, env: &[f64], rates: &[f64]) -> Result<f64> {
        let mut acc = 0.0;
        for (slot, d) in &self.partials {
            acc += d.eval(env)? * layout.generator_rate(*slot, env, rates);
        }
        Ok(acc)
    }
}

/// `expr` at a phase point given in `layout` order.
pub fn evaluate(expr: &Fraction, layout: &Layout, state: &[f64]) -> Result<f64> {
    Compiled::fraction(expr, layout)?.eval(&layout.env(state, 0.0))
}
