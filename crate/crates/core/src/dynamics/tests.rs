use super::*;
use crate::ring::{rational, Param};
use crate::toda::{build_bcn, build_dn, BcnParams, DnParams};

fn bcn_with(n: usize, values: &[(Param, i64, i64)]) -> ModelSpec {
    let mut p = BcnParams::zero();
    for &(name, a, b) in values {
        let v = RingElement::constant(rational(a, b));
        match name {
            Param::Theta1 => p.theta_1 = v,
            Param::Alpha1 => p.alpha_1 = v,
            Param::Beta1 => p.beta_1 = v,
            Param::ThetaN => p.theta_n = v,
            Param::AlphaN => p.alpha_n = v,
            Param::BetaN => p.beta_n = v,
            Param::C0 | Param::C1 => unreachable!(),
        }
    }
    build_bcn(n, p).unwrap()
}

fn dn_with(n: usize, c0: (i64, i64), c1: (i64, i64)) -> ModelSpec {
    build_dn(
        n,
        DnParams {
            c_0: RingElement::constant(rational(c0.0, c0.1)),
            c_1: RingElement::constant(rational(c1.0, c1.1)),
        },
    )
    .unwrap()
}

fn confining_bcn(n: usize) -> ModelSpec {
    bcn_with(
        n,
        &[
            (Param::Theta1, 1, 4),
            (Param::Alpha1, 1, 2),
            (Param::Beta1, 1, 1),
            (Param::ThetaN, -1, 3),
            (Param::AlphaN, 1, 3),
            (Param::BetaN, 1, 2),
        ],
    )
}

#[test]
fn evaluate_examples() {
    let layout = Layout::new(vec![Coordinate::Momentum(1)]);
    let x1 = Fraction::from(RingElement::gen(Generator::X(1)));
    assert_eq!(evaluate(&(&x1 * &x1), &layout, &[3.0]).unwrap(), 9.0);

    let layout = Layout::new(vec![Coordinate::E, Coordinate::F, Coordinate::H]);
    let c = Fraction::from(crate::ring::PoissonStructure::canonical(1).with_sl2().casimir().unwrap());
    assert_eq!(evaluate(&c, &layout, &[1.0, 0.0, 0.5]).unwrap(), 0.25);

    let model = build_bcn(1, BcnParams::zero()).unwrap();
    let h = model.paper_hamiltonian().unwrap();
    assert_eq!(evaluate_at(&model, &h, &PhasePoint { values: vec![0.0, 0.0] }).unwrap(), 0.0);
}

#[test]
fn evaluate_needs_every_generator() {
    let layout = Layout::new(vec![Coordinate::Momentum(1)]);
    let u = Fraction::from(RingElement::gen(Generator::U(1)));
    assert_eq!(evaluate(&u, &layout, &[0.0]), Err(Error::Unassigned(Generator::U(1))));
    assert!(Dynamics::new(&build_bcn(1, BcnParams::symbolic()).unwrap(), EomSource::Closed).is_err());
}

#[test]
fn evaluate_guards_small_denominators() {
    let layout = Layout::new(vec![Coordinate::F]);
    let f = Fraction::from(RingElement::gen(Generator::F));
    let inv = f.recip().unwrap();
    assert_eq!(evaluate(&inv, &layout, &[0.5]).unwrap(), 2.0);
    assert!(matches!(evaluate(&inv, &layout, &[1e-13]), Err(Error::Singularity { .. })));
}

#[test]
fn vector_field_examples() {
    let model = build_bcn(2, BcnParams::zero()).unwrap();
    let field = VectorField::new(&model, EomSource::Closed).unwrap();
    let rates = field.at(&PhasePoint { values: vec![0.0; 4] }).unwrap();
    assert_eq!(rates, vec![0.0, 0.0, 1.0, -1.0]);

    // β(e^{2x} - e^{-2x}) = 0 at x = 0.
    let model = bcn_with(1, &[(Param::Beta1, 3, 2), (Param::BetaN, 3, 2)]);
    let field = VectorField::new(&model, EomSource::Closed).unwrap();
    assert_eq!(field.at(&PhasePoint { values: vec![0.0, 0.0] }).unwrap(), vec![0.0, 0.0]);
}

#[test]
fn closed_and_bracket_fields_agree() {
    for model in [confining_bcn(3), dn_with(3, (1, 1), (1, 1))] {
        let d = Dynamics::new(&model, EomSource::Closed).unwrap();
        let closed = d.vector_field();
        let bracket = VectorField::new(&model, EomSource::Bracket).unwrap();
        for seed in 0..100 {
            let p = d.random_point(seed).unwrap();
            let a = closed.at(&p).unwrap();
            let b = bracket.at(&p).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0), "{} seed {seed}: {x} vs {y}", model.kind);
            }
        }
    }
}

#[test]
fn dn_f_minus_u1_is_stationary() {
    let model = dn_with(2, (1, 1), (1, 1));
    let d = Dynamics::new(&model, EomSource::Closed).unwrap();
    let f = d.layout().index(Coordinate::F).unwrap();
    let x1 = d.layout().index(Coordinate::Position(1)).unwrap();
    for seed in 0..20 {
        let p = d.random_point(seed).unwrap();
        let r = d.vector_field().at(&p).unwrap();
        let rate = r[f] - p.values[x1].exp() * r[x1];
        assert!(rate.abs() < 1e-13, "{rate}");
    }
}

#[test]
fn dn_initial_point_respects_constants() {
    let d = Dynamics::new(&dn_with(2, (1, 2), (3, 1)), EomSource::Closed).unwrap();
    let p = d.dn_point(&[0.2, -0.1], &[0.3, 0.0], 0.4).unwrap();
    let [e, f, h] = [p.values[4], p.values[5], p.values[6]];
    assert!((f - 0.2f64.exp() - 0.25).abs() < 1e-15);
    assert!((h * h + e * f - 0.75).abs() < 1e-15);
}

#[test]
fn dn_singular_initial_data() {
    let d = Dynamics::new(&dn_with(2, (1, 10_i64.pow(13)), (1, 1)), EomSource::Closed).unwrap();
    assert!(matches!(d.random_point(0), Err(Error::Singularity { .. })));
    let zero = Dynamics::new(&dn_with(2, (0, 1), (1, 1)), EomSource::Closed).unwrap();
    assert!(matches!(zero.dn_point(&[0.0, 0.0], &[0.0, 0.0], 0.1), Err(Error::Singularity { .. })));
}

#[test]
fn free_chain_conserves_total_momentum() {
    let model = build_bcn(2, BcnParams::zero()).unwrap();
    let d = Dynamics::new(&model, EomSource::Closed).unwrap();
    let traj = d.integrate(&PhasePoint { values: vec![0.0; 4] }, 1e-2, 500, Scheme::Rk4).unwrap();
    for p in &traj.states {
        let v = &p.values;
        assert!((v[2] + v[3]).abs() < 1e-13);
        assert!((v[0] + v[1]).abs() < 1e-13);
    }
    // e^{x_2 - x_1} pushes x_1 up and x_2 down by the same amount.
    let last = &traj.states.last().unwrap().values;
    assert!(last[0] > 0.5 && last[1] < -0.5);
}

fn max_h_drift(d: &Dynamics, p: &PhasePoint, dt: f64, t: f64) -> f64 {
    let steps = (t / dt).round() as usize;
    let traj = d.integrate(p, dt, steps, Scheme::Rk4).unwrap();
    let h0 = d.hamiltonian(p).unwrap();
    traj.states
        .iter()
        .map(|q| (d.hamiltonian(q).unwrap() - h0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn rk4_hamiltonian_drift_is_fourth_order() {
    let d = Dynamics::new(&confining_bcn(2), EomSource::Closed).unwrap();
    let p = d.random_point(3).unwrap();
    let drifts: Vec<f64> = [1e-2, 5e-3, 2.5e-3].iter().map(|&dt| max_h_drift(&d, &p, dt, 2.0)).collect();
    for w in drifts.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((3.7..=4.3).contains(&order), "{drifts:?} order {order}");
    }
}

#[test]
fn bcn_trajectory_diagnostics() {
    let d = Dynamics::new(&confining_bcn(3), EomSource::Closed).unwrap();
    let p = d.random_point(0).unwrap();
    let cfg = SimulationConfig {
        steps: 2000,
        ..SimulationConfig::default()
    };
    let traj = d.simulate(&p, &cfg).unwrap();
    assert!(traj.is_complete());
    assert_eq!(traj.times.len(), 2001);
    for v in check_channels(&traj, &Tolerances::default()) {
        assert!(v.within, "{v:?}");
    }
    assert!(traj.channel("casimir_drift").is_none());
    assert!(traj.channel("b6_drift").is_some());
}

#[test]
fn zero_curvature_is_mu_independent() {
    let d = Dynamics::new(&confining_bcn(2), EomSource::Closed).unwrap();
    let p = d.random_point(7).unwrap();
    for mu in [0.3, 0.7, 1.1, 1.9, 2.3, -4.0] {
        let s = d.zero_curvature_at(&p, mu).unwrap();
        assert!(s.max().absolute < 1e-13, "mu={mu}: {s:?}");
    }
}

#[test]
fn zero_curvature_detects_wrong_flow() {
    // The chain flow with the opposite boundary sign does not fit the Lax pair.
    let model = confining_bcn(2);
    let mut d = Dynamics::new(&model, EomSource::Closed).unwrap();
    let wrong = bcn_with(2, &[(Param::Alpha1, -1, 2)]);
    d.field = VectorField::new(&wrong, EomSource::Closed).unwrap();
    let p = d.random_point(1).unwrap();
    assert!(d.zero_curvature_at(&p, 0.7).unwrap().max().scaled > 1e-3);
}

#[test]
fn dn_trajectory_diagnostics() {
    let d = Dynamics::new(&dn_with(3, (16, 1), (-16, 1)), EomSource::Closed).unwrap();
    let p = d.random_point(0).unwrap();
    let cfg = SimulationConfig {
        steps: 2000,
        ..SimulationConfig::default()
    };
    let traj = d.simulate(&p, &cfg).unwrap();
    assert!(traj.is_complete());
    for v in check_channels(&traj, &Tolerances::default()) {
        assert!(v.within, "{v:?}");
    }
    assert!(traj.max("bc_x0_residual").unwrap() <= 1e-8);
    assert!(traj.max("casimir_drift").unwrap() <= 1e-10);
}

#[test]
fn adaptive_scheme_tracks_energy() {
    let d = Dynamics::new(&confining_bcn(2), EomSource::Closed).unwrap();
    let p = d.random_point(2).unwrap();
    let traj = d.integrate(&p, 1e-2, 200, Scheme::Rk4Adaptive { tol: 1e-11 }).unwrap();
    assert!((traj.times.last().unwrap() - 2.0).abs() < 1e-12);
    let h0 = d.hamiltonian(&p).unwrap();
    let h1 = d.hamiltonian(traj.states.last().unwrap()).unwrap();
    assert!((h1 - h0).abs() < 1e-8);
}

#[test]
fn config_validation() {
    let bad_dt = SimulationConfig {
        dt: 0.0,
        ..SimulationConfig::default()
    };
    assert!(bad_dt.validate().is_err());
    let bad_mu = SimulationConfig {
        mu_samples: vec![0.3, 0.0],
        ..SimulationConfig::default()
    };
    assert!(bad_mu.validate().is_err());
    assert!(SimulationConfig::default().validate().is_ok());
}

#[test]
fn csv_layout_and_determinism() {
    let d = Dynamics::new(&dn_with(2, (1, 1), (1, 1)), EomSource::Closed).unwrap();
    let cfg = SimulationConfig {
        steps: 20,
        ..SimulationConfig::default()
    };
    let run = || {
        let traj = d.simulate(&d.random_point(11).unwrap(), &cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&traj, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    let mut lines = a.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,x_1,x_2,X_1,X_2,E,F,H,H_drift,casimir_drift,zc_residual"
    );
    assert_eq!(lines.count(), 21);
}

#[test]
fn svg_has_one_line_per_channel() {
    let d = Dynamics::new(&confining_bcn(1), EomSource::Closed).unwrap();
    let cfg = SimulationConfig {
        steps: 10,
        ..SimulationConfig::default()
    };
    let traj = d.simulate(&d.random_point(0).unwrap(), &cfg).unwrap();
    let mut buf = Vec::new();
    write_svg(&traj, &mut buf).unwrap();
    let svg = String::from_utf8(buf).unwrap();
    assert_eq!(svg.matches("<polyline").count(), traj.channels.len());
    assert!(svg.starts_with("<svg"));
}

#[test]
fn random_points_depend_on_seed_only() {
    let d = Dynamics::new(&confining_bcn(2), EomSource::Closed).unwrap();
    assert_eq!(d.random_point(5).unwrap(), d.random_point(5).unwrap());
    assert_ne!(d.random_point(5).unwrap(), d.random_point(6).unwrap());
    assert!(d.random_point(5).unwrap().values.iter().all(|v| (-1.0..=1.0).contains(v)));
}
