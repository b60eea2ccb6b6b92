use super::form::LinearForm;
use super::matrix::SpectralMatrix;

/// A matrix-valued function of one spectral argument: `k^±(z)`, `r_ab(z)`.
pub trait SpectralFunction: Send + Sync {
    fn at(&self, arg: LinearForm) -> SpectralMatrix;
}

impl<F> SpectralFunction for F
where
    F: Fn(LinearForm) -> SpectralMatrix + Send + Sync,
{
    fn at(&self, arg: LinearForm) -> SpectralMatrix {
        self(arg)
    }
}

/// Site Lax matrices `ℓ(j, z)` for `j = 1..=sites()`.
pub trait LaxFamily: Send + Sync {
    fn sites(&self) -> usize;
    fn lax(&self, site: usize, arg: LinearForm) -> SpectralMatrix;
}

/// Negates one entry of a wrapped function; used to show checks are not vacuous.
#[derive(Clone, Debug)]
pub struct FlipEntry<T> {
    pub inner: T,
    pub row: usize,
    pub col: usize,
    /// For Lax families, only this site is mutated.
    pub site: Option<usize>,
}

impl<T> FlipEntry<T> {
    pub fn new(inner: T, row: usize, col: usize) -> Self {
        FlipEntry {
            inner,
            row,
            col,
            site: None,
        }
    }

    pub fn at_site(mut self, site: usize) -> Self {
        self.site = Some(site);
        self
    }

    fn flip(&self, mut m: SpectralMatrix) -> SpectralMatrix {
        let v = -m.get(self.row, self.col);
        m.set(self.row, self.col, v);
        m
    }
}

impl<T: SpectralFunction> SpectralFunction for FlipEntry<T> {
    fn at(&self, arg: LinearForm) -> SpectralMatrix {
        self.flip(self.inner.at(arg))
    }
}

impl<T: LaxFamily> LaxFamily for FlipEntry<T> {
    fn sites(&self) -> usize {
        self.inner.sites()
    }

    fn lax(&self, site: usize, arg: LinearForm) -> SpectralMatrix {
        let m = self.inner.lax(site, arg);
        match self.site {
            Some(s) if s != site => m,
            _ => self.flip(m),
        }
    }
}
