use crate::error::{Error, Result};
use crate::spectral::{LaxFamily, LinearForm, SpectralMatrix};

/// Partial monodromy `L(n, m, z) = ℓ(n, z) ℓ(n-1, z) ··· ℓ(m, z)`.
#[derive(Clone, Debug)]
pub struct Monodromy {
    pub n: usize,
    pub m: usize,
    pub matrix: SpectralMatrix,
}

/// Ordered product with descending site index from left to right.
/// `n = m - 1` gives the identity; `monodromy(ℓ, N, 1, z)` is the full `L(z)`.
pub fn monodromy(family: &dyn LaxFamily, n: usize, m: usize, arg: LinearForm) -> Result<Monodromy> {
    let sites = family.sites();
    if m == 0 || m > sites + 1 {
        return Err(Error::SiteOutOfRange { index: m, max: sites + 1 });
    }
    if n > sites || n + 1 < m {
        return Err(Error::SiteOutOfRange { index: n, max: sites });
    }
    let mut matrix = SpectralMatrix::identity(2);
    for j in (m..=n).rev() {
        matrix = &matrix * &family.lax(j, arg);
    }
    Ok(Monodromy { n, m, matrix })
}

/// `L(n, m, z)^{-1}`.
pub fn monodromy_inverse(family: &dyn LaxFamily, n: usize, m: usize, arg: LinearForm) -> Result<SpectralMatrix> {
    monodromy(family, n, m, arg)?.matrix.inverse_2x2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toda::TodaLax;

    #[test]
    fn empty_product_is_identity() {
        let f = TodaLax::new(2);
        let l = monodromy(&f, 0, 1, LinearForm::lambda()).unwrap();
        assert_eq!(l.matrix, SpectralMatrix::identity(2));
        let top = monodromy(&f, 2, 3, LinearForm::lambda()).unwrap();
        assert_eq!(top.matrix, SpectralMatrix::identity(2));
    }

    #[test]
    fn single_and_ordered_products() {
        let f = TodaLax::new(2);
        let z = LinearForm::lambda();
        assert_eq!(monodromy(&f, 1, 1, z).unwrap().matrix, f.lax(1, z));
        assert_eq!(monodromy(&f, 2, 1, z).unwrap().matrix, &f.lax(2, z) * &f.lax(1, z));
        assert_ne!(monodromy(&f, 2, 1, z).unwrap().matrix, &f.lax(1, z) * &f.lax(2, z));
    }

    #[test]
    fn out_of_range_sites() {
        let f = TodaLax::new(2);
        let z = LinearForm::lambda();
        assert!(monodromy(&f, 3, 1, z).is_err());
        assert!(monodromy(&f, 0, 2, z).is_err());
        assert!(monodromy(&f, 1, 0, z).is_err());
    }

    #[test]
    fn inverse_undoes_product() {
        let f = TodaLax::new(2);
        let z = -LinearForm::lambda();
        let l = monodromy(&f, 2, 1, z).unwrap().matrix;
        let inv = monodromy_inverse(&f, 2, 1, z).unwrap();
        assert_eq!(&l * &inv, SpectralMatrix::identity(2));
    }
}
