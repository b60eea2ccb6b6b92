use bilax::double_row::monodromy;
use bilax::dynamics::{Dynamics, EomSource, SimulationConfig};
use bilax::ring::{Fraction, Generator, Monomial, Param, PoissonStructure, RingElement};
use bilax::spectral::{LinearForm, SpectralMatrix};
use bilax::toda::{build_bcn, build_dn, parse_value, BcnParams, DnParams, ModelConfig, ModelKind, TodaLax};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const GENERATORS: [Generator; 9] = [
    Generator::U(1),
    Generator::U(2),
    Generator::X(1),
    Generator::X(2),
    Generator::E,
    Generator::F,
    Generator::H,
    Generator::Param(Param::Theta1),
    Generator::Param(Param::C0),
];

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec((0..GENERATORS.len(), -2i32..=2), 0..3).prop_map(|powers| {
        let powers = powers.into_iter().map(|(i, e)| {
            let g = GENERATORS[i];
            (g, if g.allows_negative_exponent() { e } else { e.abs() })
        });
        Monomial::from_powers(powers).unwrap()
    })
}

fn element() -> impl Strategy<Value = RingElement> {
    prop::collection::vec((monomial(), -4i64..=4, 1i64..=3), 0..4).prop_map(|terms| {
        RingElement::from_terms(
            terms
                .into_iter()
                .map(|(m, n, d)| (m, BigRational::new(BigInt::from(n), BigInt::from(d)))),
        )
    })
}

fn ps() -> PoissonStructure {
    PoissonStructure::canonical(2).with_sl2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn no_zero_coefficients_stored(a in element(), b in element()) {
        for x in [&a + &b, &a * &b, &a - &b] {
            prop_assert!(x.terms().all(|(_, c)| *c != BigRational::from_integer(0.into())));
        }
    }

    #[test]
    fn only_exponentials_take_negative_powers(a in element(), b in element()) {
        for (m, _) in (&a * &b).terms() {
            for &(g, e) in m.powers() {
                prop_assert!(e > 0 || g.allows_negative_exponent());
            }
        }
    }

    #[test]
    fn fraction_round_trip(a in element(), b in element()) {
        let fa = Fraction::from(a.clone());
        prop_assert_eq!(fa.as_ring(), Some(&a));
        prop_assume!(!b.is_zero());
        let q = Fraction::new(a.clone(), b.clone()).unwrap();
        prop_assert_eq!(&q * &Fraction::from(b), fa);
    }

    #[test]
    fn bracket_antisymmetric(a in element(), b in element()) {
        let ps = ps();
        prop_assert_eq!(ps.bracket(&a, &b).unwrap(), -ps.bracket(&b, &a).unwrap());
    }

    #[test]
    fn bracket_leibniz(a in element(), b in element(), c in element()) {
        let ps = ps();
        let lhs = ps.bracket(&a, &(&b * &c)).unwrap();
        let rhs = &(&ps.bracket(&a, &b).unwrap() * &c) + &(&b * &ps.bracket(&a, &c).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parameters_and_casimir_are_central(a in element()) {
        let ps = ps();
        for p in [Param::Theta1, Param::BetaN, Param::C0] {
            prop_assert!(ps.bracket(&RingElement::gen(Generator::Param(p)), &a).unwrap().is_zero());
        }
        prop_assert!(ps.bracket(&ps.casimir().unwrap(), &a).unwrap().is_zero());
    }

    #[test]
    fn rational_strings_parse_exactly(n in -1000i64..1000, d in 1i64..1000) {
        let v = parse_value(&serde_json::Value::String(format!("{n}/{d}"))).unwrap();
        prop_assert_eq!(v, BigRational::new(n.into(), d.into()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bracket_jacobi(a in element(), b in element(), c in element()) {
        let ps = ps();
        let br = |x: &RingElement, y: &RingElement| ps.bracket(x, y).unwrap();
        let sum = &(&br(&a, &br(&b, &c)) + &br(&b, &br(&c, &a))) + &br(&c, &br(&a, &b));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn trajectories_sit_on_a_uniform_grid(seed in any::<u64>(), dn in any::<bool>()) {
        let cfg = ModelConfig { model: if dn { ModelKind::Dn } else { ModelKind::Bcn }, n: 2, params: Default::default() };
        let model = cfg.build_numeric().unwrap();
        let d = Dynamics::new(&model, EomSource::Closed).unwrap();
        let p = d.random_point(seed).unwrap();
        prop_assert!(d.point(p.values.clone()).is_ok());
        let sim = SimulationConfig { steps: 20, ..SimulationConfig::default() };
        let traj = d.simulate(&p, &sim).unwrap();
        prop_assert_eq!(traj.times.len(), traj.states.len());
        for (k, t) in traj.times.iter().enumerate() {
            prop_assert!((t - k as f64 * sim.dt).abs() < 1e-12);
        }
        for values in traj.channels.values() {
            prop_assert_eq!(values.len(), traj.times.len());
        }
    }
}

#[test]
fn empty_monodromy_is_identity() {
    let lax = TodaLax::new(3);
    for n in 1..=3 {
        let m = monodromy(&lax, n - 1, n, LinearForm::lambda()).unwrap();
        assert_eq!(m.matrix, SpectralMatrix::identity(2));
    }
}

#[test]
fn permutation_squares_to_one() {
    let p = SpectralMatrix::permutation();
    assert_eq!(&p * &p, SpectralMatrix::identity(4));
}

#[test]
fn transfer_degree_bounds() {
    for n in 1..=3 {
        let b = build_bcn(n, BcnParams::symbolic()).unwrap();
        let deg = b.double_row().expansion().unwrap().degree().unwrap();
        assert!(deg <= 2 * n as i32 + 2, "BC_{n}: {deg}");
    }
    for n in 2..=3 {
        let d = build_dn(n, DnParams::symbolic()).unwrap();
        let deg = d.double_row().expansion().unwrap().degree().unwrap();
        assert!(deg <= 2 * n as i32 + 1, "D_{n}: {deg}");
    }
}
