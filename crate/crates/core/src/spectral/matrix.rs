use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::form::LinearForm;
use super::scalar::SpectralScalar;
use crate::error::{Error, Result};
use crate::ring::{Coeff, Fraction, Generator, PoissonStructure, RingElement, Spectral};

/// Square matrix of [`SpectralScalar`]s, row-major.
///
/// Dimension 2 is the auxiliary space. Dimension 4 is `a ⊗ b` with row index
/// `(i, k) ↦ 2i + k`, the `a` leg major. Dimension 8 is `a ⊗ b ⊗ c` with
/// `(i, k, m) ↦ 4i + 2k + m`.
#[derive(Clone, PartialEq)]
pub struct SpectralMatrix {
    dim: usize,
    entries: Vec<SpectralScalar>,
}

impl SpectralMatrix {
    pub fn zeros(dim: usize) -> Self {
        SpectralMatrix {
            dim,
            entries: vec![SpectralScalar::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, SpectralScalar::one());
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<SpectralScalar>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(SpectralMatrix { dim, entries })
    }

    pub fn from_2x2(rows: [[SpectralScalar; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = rows;
        SpectralMatrix {
            dim: 2,
            entries: vec![a, b, c, d],
        }
    }

    /// Ring-valued 2x2 matrix.
    pub fn from_ring_2x2(rows: [[RingElement; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = rows;
        Self::from_2x2([[a.into(), b.into()], [c.into(), d.into()]])
    }

    /// Elementary matrix `E_ij` of dimension `dim`.
    pub fn elementary(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(i, j, SpectralScalar::one());
        m
    }

    /// The permutation `P = Σ E_ij ⊗ E_ji` on `a ⊗ b`.
    pub fn permutation() -> Self {
        let mut p = Self::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                p.set(2 * i + j, 2 * j + i, SpectralScalar::one());
            }
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &SpectralScalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: SpectralScalar) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn entries(&self) -> &[SpectralScalar] {
        &self.entries
    }

    pub fn expect_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: dim,
                found: self.dim,
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SpectralScalar::is_zero)
    }

    /// `(row, col, value)` for every nonzero entry.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, &SpectralScalar)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(idx, v)| (idx / self.dim, idx % self.dim, v))
            .collect()
    }

    pub fn map(&self, f: impl Fn(&SpectralScalar) -> SpectralScalar) -> Self {
        SpectralMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&SpectralScalar) -> Result<SpectralScalar>) -> Result<Self> {
        Ok(SpectralMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn scale_scalar(&self, s: &SpectralScalar) -> Self {
        self.map(|e| e * s)
    }

    pub fn scale_fraction(&self, f: &Fraction) -> Self {
        self.map(|e| e.mul_fraction(f))
    }

    pub fn trace(&self) -> SpectralScalar {
        (0..self.dim).fold(SpectralScalar::zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn determinant_2x2(&self) -> Result<SpectralScalar> {
        self.expect_dim(2)?;
        Ok(&(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0)))
    }

    /// Adjugate over determinant. The determinant must be invertible.
    pub fn inverse_2x2(&self) -> Result<Self> {
        let det = self.determinant_2x2()?;
        if det.is_zero() {
            return Err(Error::NotInvertible("determinant vanishes identically".into()));
        }
        let inv = det.inverse()?;
        let adj = Self::from_2x2([
            [self.get(1, 1).clone(), -self.get(0, 1)],
            [-self.get(1, 0), self.get(0, 0).clone()],
        ]);
        Ok(adj.scale_scalar(&inv))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &SpectralMatrix) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &SpectralMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn laurent_coefficient(&self, var: Spectral, k: i32) -> Result<Self> {
        self.try_map(|e| e.laurent_coefficient(var, k))
    }

    pub fn substitute(&self, g: Generator, value: &RingElement) -> Result<Self> {
        self.try_map(|e| e.substitute(g, value))
    }

    pub fn substitute_fraction(&self, g: Generator, value: &Fraction) -> Result<Self> {
        self.try_map(|e| e.substitute_fraction(g, value))
    }

    /// `{self_ij, g}` entrywise.
    pub fn bracket_with(&self, ps: &PoissonStructure, g: &SpectralScalar, left: bool) -> Result<Self> {
        self.try_map(|e| {
            if left {
                SpectralScalar::bracket(ps, g, e)
            } else {
                SpectralScalar::bracket(ps, e, g)
            }
        })
    }

    pub fn evaluate(&self, value: &impl Fn(Generator) -> f64) -> Vec<f64> {
        self.entries.iter().map(|e| e.evaluate(value)).collect()
    }
}

/// `m ⊗ 𝟙`.
pub fn embed_a(m: &SpectralMatrix) -> Result<SpectralMatrix> {
    m.expect_dim(2)?;
    Ok(m.kron(&SpectralMatrix::identity(2)))
}

/// `𝟙 ⊗ m`.
pub fn embed_b(m: &SpectralMatrix) -> Result<SpectralMatrix> {
    m.expect_dim(2)?;
    Ok(SpectralMatrix::identity(2).kron(m))
}

/// `(tr_a M)_kl = Σ_i M_(i,k),(i,l)`.
pub fn partial_trace_a(m: &SpectralMatrix) -> Result<SpectralMatrix> {
    m.expect_dim(4)?;
    let mut out = SpectralMatrix::zeros(2);
    for k in 0..2 {
        for l in 0..2 {
            let s = (0..2).fold(SpectralScalar::zero(), |acc, i| &acc + m.get(2 * i + k, 2 * i + l));
            out.set(k, l, s);
        }
    }
    Ok(out)
}

/// `P X P`: exchanges the two legs of a 4x4 matrix, so `r_ba = swap_legs(r_ab)`.
pub fn swap_legs(m: &SpectralMatrix) -> Result<SpectralMatrix> {
    m.expect_dim(4)?;
    let p = SpectralMatrix::permutation();
    Ok(&(&p * m) * &p)
}

/// The rational r-matrix `r_ab(z) = P / z` evaluated at the linear form `z`.
pub fn rational_r(arg: LinearForm) -> Result<SpectralMatrix> {
    let inv = SpectralScalar::with_pole(RingElement::one(), arg, 1)?;
    Ok(SpectralMatrix::permutation().scale_scalar(&inv))
}

/// Auxiliary-space bracket: entry `((i,k),(j,l)) = {A_ij, B_kl}`.
pub fn tensor_bracket(a: &SpectralMatrix, b: &SpectralMatrix, ps: &PoissonStructure) -> Result<SpectralMatrix> {
    a.expect_dim(2)?;
    b.expect_dim(2)?;
    let mut out = SpectralMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let v = SpectralScalar::bracket(ps, a.get(i, j), b.get(k, l))?;
                    out.set(2 * i + k, 2 * j + l, v);
                }
            }
        }
    }
    Ok(out)
}

/// Legs of the triple tensor space used for the Yang-Baxter equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    A,
    B,
    C,
}

impl Leg {
    fn slot(self) -> usize {
        match self {
            Leg::A => 0,
            Leg::B => 1,
            Leg::C => 2,
        }
    }
}

/// Embeds a two-leg 4x4 matrix into `a ⊗ b ⊗ c`, acting on `first ⊗ second`.
pub fn embed_two_legs(m: &SpectralMatrix, first: Leg, second: Leg) -> Result<SpectralMatrix> {
    m.expect_dim(4)?;
    if first == second {
        return Err(Error::Dimension { expected: 2, found: 1 });
    }
    let (s1, s2) = (first.slot(), second.slot());
    let spectator = 3 - s1 - s2;
    let digits = |idx: usize| [idx >> 2 & 1, idx >> 1 & 1, idx & 1];
    let mut out = SpectralMatrix::zeros(8);
    for row in 0..8 {
        let r = digits(row);
        for col in 0..8 {
            let c = digits(col);
            if r[spectator] != c[spectator] {
                continue;
            }
            let v = m.get(2 * r[s1] + r[s2], 2 * c[s1] + c[s2]);
            if !v.is_zero() {
                out.set(row, col, v.clone());
            }
        }
    }
    Ok(out)
}

impl fmt::Display for SpectralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.dim {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.dim {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for SpectralMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Mul for &SpectralMatrix {
    type Output = SpectralMatrix;
    fn mul(self, rhs: &SpectralMatrix) -> SpectralMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = SpectralMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = &out.entries[i * n + j] + &(a * b);
                    out.entries[i * n + j] = cur;
                }
            }
        }
        out
    }
}

impl Add for &SpectralMatrix {
    type Output = SpectralMatrix;
    fn add(self, rhs: &SpectralMatrix) -> SpectralMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        SpectralMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SpectralMatrix {
    type Output = SpectralMatrix;
    fn sub(self, rhs: &SpectralMatrix) -> SpectralMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        SpectralMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &SpectralMatrix {
    type Output = SpectralMatrix;
    fn neg(self) -> SpectralMatrix {
        self.map(|e| -e)
    }
}

macro_rules! forward_owned_matrix {
    ($tr:ident, $method:ident) => {
        impl $tr<SpectralMatrix> for SpectralMatrix {
            type Output = SpectralMatrix;
            fn $method(self, rhs: SpectralMatrix) -> SpectralMatrix {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&SpectralMatrix> for SpectralMatrix {
            type Output = SpectralMatrix;
            fn $method(self, rhs: &SpectralMatrix) -> SpectralMatrix {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_matrix!(Add, add);
forward_owned_matrix!(Sub, sub);
forward_owned_matrix!(Mul, mul);
