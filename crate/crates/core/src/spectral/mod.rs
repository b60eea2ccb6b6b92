//! Matrices over the phase ring with rational dependence on formal spectral
//! variables, the auxiliary-space tensor calculus, and the rational r-matrix.
//!
//! Spectral variables are central ring generators. Poles are restricted to
//! powers of linear forms such as `λ - μ` or `λ + μ`, so every identity can be
//! checked after clearing denominators.

mod family;
mod form;
mod matrix;
mod scalar;

pub use family::{FlipEntry, LaxFamily, SpectralFunction};
pub use form::LinearForm;
pub use matrix::{
    embed_a, embed_b, embed_two_legs, partial_trace_a, rational_r, swap_legs, tensor_bracket, Leg,
    SpectralMatrix,
};
pub use scalar::SpectralScalar;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{integer, Generator, PoissonStructure, RingElement};

    fn g(x: Generator) -> SpectralScalar {
        x.into()
    }

    fn toda(j: usize, arg: LinearForm) -> SpectralMatrix {
        let u = RingElement::gen(Generator::U(j));
        SpectralMatrix::from_ring_2x2([
            [&arg.to_ring() + &RingElement::gen(Generator::X(j)), -u],
            [RingElement::power_of(Generator::U(j), -1).unwrap(), RingElement::zero()],
        ])
    }

    #[test]
    fn embed_identity() {
        assert_eq!(embed_a(&SpectralMatrix::identity(2)).unwrap(), SpectralMatrix::identity(4));
        assert_eq!(embed_b(&SpectralMatrix::identity(2)).unwrap(), SpectralMatrix::identity(4));
    }

    #[test]
    fn embedded_factors_commute_and_multiply_to_kron() {
        let m = toda(1, LinearForm::lambda());
        let n = toda(2, LinearForm::mu());
        let (ma, nb) = (embed_a(&m).unwrap(), embed_b(&n).unwrap());
        assert!(ma.commutator(&nb).is_zero());
        assert_eq!(&ma * &nb, m.kron(&n));
    }

    #[test]
    fn embed_a_elementary_layout() {
        // Kronecker oracle: (E_12 ⊗ 1)_{(i,k),(j,l)} = δ_{i0} δ_{j1} δ_{kl}.
        let e = embed_a(&SpectralMatrix::elementary(2, 0, 1)).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                for j in 0..2 {
                    for l in 0..2 {
                        let want = i == 0 && j == 1 && k == l;
                        let got = e.get(2 * i + k, 2 * j + l);
                        assert_eq!(*got == SpectralScalar::one(), want);
                        assert_eq!(got.is_zero(), !want);
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_dimension_rejected() {
        assert!(embed_a(&SpectralMatrix::identity(4)).is_err());
        assert!(partial_trace_a(&SpectralMatrix::identity(2)).is_err());
    }

    #[test]
    fn partial_traces() {
        assert_eq!(
            partial_trace_a(&SpectralMatrix::identity(4)).unwrap(),
            SpectralMatrix::identity(2).scale(&integer(2))
        );
        assert_eq!(partial_trace_a(&SpectralMatrix::permutation()).unwrap(), SpectralMatrix::identity(2));
        let m = toda(1, LinearForm::lambda());
        let n = toda(2, LinearForm::mu());
        assert_eq!(partial_trace_a(&m.kron(&n)).unwrap(), n.scale_scalar(&m.trace()));
    }

    #[test]
    fn permutation_squares_to_one() {
        let p = SpectralMatrix::permutation();
        assert_eq!(&p * &p, SpectralMatrix::identity(4));
        let m = toda(1, LinearForm::lambda());
        let n = toda(2, LinearForm::mu());
        assert_eq!(&(&p * &m.kron(&n)) * &p, n.kron(&m));
    }

    #[test]
    fn rational_r_is_permutation_over_difference() {
        let z = LinearForm::lambda() - LinearForm::mu();
        let r = rational_r(z).unwrap();
        let cleared = r.scale_scalar(&SpectralScalar::from(z.to_ring()));
        assert_eq!(cleared, SpectralMatrix::permutation());
        // skew-symmetry r_ab(z) = -r_ba(-z)
        let r_ba_neg = swap_legs(&rational_r(-z).unwrap()).unwrap();
        assert!((&r + &r_ba_neg).is_zero());
    }

    #[test]
    fn toda_determinant_and_inverse() {
        let l = toda(1, LinearForm::lambda());
        assert_eq!(l.determinant_2x2().unwrap(), SpectralScalar::one());
        let lm = toda(1, -LinearForm::lambda());
        let inv = lm.inverse_2x2().unwrap();
        let u = g(Generator::U(1));
        let expected = SpectralMatrix::from_2x2([
            [SpectralScalar::zero(), u.clone()],
            [-u.inverse().unwrap(), &(-LinearForm::lambda()).to_ring().into() + &g(Generator::X(1))],
        ]);
        // adjugate oracle with det = 1: [[0, u], [-1/u, -λ + X]]
        assert_eq!(inv, expected);
        assert_eq!(&lm * &inv, SpectralMatrix::identity(2));
        assert_eq!(SpectralMatrix::identity(2).inverse_2x2().unwrap(), SpectralMatrix::identity(2));
    }

    #[test]
    fn singular_matrix_not_invertible() {
        let m = SpectralMatrix::from_ring_2x2([
            [RingElement::gen(Generator::E), RingElement::gen(Generator::E)],
            [RingElement::gen(Generator::F), RingElement::gen(Generator::F)],
        ]);
        assert!(m.inverse_2x2().is_err());
    }

    #[test]
    fn tensor_bracket_of_toda_lax() {
        let ps = PoissonStructure::canonical(2);
        let a = toda(1, LinearForm::lambda());
        let b = toda(1, LinearForm::mu());
        let t = tensor_bracket(&a, &b, &ps).unwrap();
        // ((1,1),(1,2)) = {λ + X_1, -u_1} = -u_1
        assert_eq!(*t.get(0, 1), -g(Generator::U(1)));
        let off = tensor_bracket(&a, &toda(2, LinearForm::mu()), &ps).unwrap();
        assert!(off.is_zero());
    }

    #[test]
    fn tensor_bracket_antisymmetry() {
        let ps = PoissonStructure::canonical(1).with_sl2();
        let k = |arg: LinearForm| {
            let half = &arg.to_ring().scale(&crate::ring::rational(1, 2));
            SpectralMatrix::from_ring_2x2([
                [half - &RingElement::gen(Generator::H), RingElement::gen(Generator::F)],
                [RingElement::gen(Generator::E), half + &RingElement::gen(Generator::H)],
            ])
        };
        let ab = tensor_bracket(&k(LinearForm::lambda()), &k(LinearForm::mu()), &ps).unwrap();
        let ba = tensor_bracket(&k(LinearForm::mu()), &k(LinearForm::lambda()), &ps).unwrap();
        // {k_a(λ), k_b(μ)} = -P {k_a(μ), k_b(λ)} P
        let swapped = swap_legs(&ba).unwrap();
        assert!((&ab + &swapped).is_zero());
    }

    #[test]
    fn two_leg_embedding_matches_kron() {
        let m = toda(1, LinearForm::lambda());
        let n = toda(2, LinearForm::mu());
        let mn = m.kron(&n);
        let id = SpectralMatrix::identity(2);
        assert_eq!(embed_two_legs(&mn, Leg::A, Leg::B).unwrap(), mn.kron(&id));
        assert_eq!(embed_two_legs(&mn, Leg::B, Leg::C).unwrap(), id.kron(&mn));
        let m_a = m.kron(&id).kron(&id);
        let n_c = id.kron(&id).kron(&n);
        assert_eq!(embed_two_legs(&mn, Leg::A, Leg::C).unwrap(), &m_a * &n_c);
    }
}
