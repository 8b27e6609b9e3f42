use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use sbgm::classical::bi_elliptic;
use sbgm::newton::{central_difference_jacobian, System};
use sbgm::{assemble_system, solve_chain, AdjustableSet, Chain, Grav, JacobianMode, Orbit, ParamId, Scenario};

fn circular_pair() -> impl Strategy<Value = (f64, f64)> {
    (6700.0..50000.0f64, 6700.0..50000.0f64).prop_filter("distinct radii", |(a, b)| (a - b).abs() > 10.0)
}

fn ellipse() -> impl Strategy<Value = Orbit> {
    (8000.0..40000.0f64, 0.02..0.6f64, 0.0..TAU).prop_map(|(a, e, w)| Orbit::new(a, e, w).unwrap())
}

fn three_impulse(initial: Orbit, target: Orbit, t1: f64, t4: f64, omega2: f64) -> Scenario {
    Scenario::new(
        initial,
        target,
        t1,
        t4,
        3,
        AdjustableSet::single(ParamId::Omega(2), omega2),
        Grav::earth(),
    )
    .unwrap()
}

fn angle_between(a: sbgm::Vec2<f64>, b: sbgm::Vec2<f64>) -> f64 {
    a.cross(b).atan2(a.dot(b)).abs()
}

/// Every junction joins its arcs continuously, smoothly and with a purely
/// tangential burn of the reported size.
fn assert_smooth(chain: &Chain) -> Result<(), TestCaseError> {
    let g = &chain.grav();
    let schedule = chain.schedule();
    for (k, &theta) in chain.junctions().iter().enumerate() {
        let (i, j) = (chain.orbits()[k], chain.orbits()[k + 1]);
        prop_assert!((i.radius_at(theta) - j.radius_at(theta)).abs() < 1e-6);
        prop_assert!((i.slope_at(theta) - j.slope_at(theta)).abs() < 1e-6);
        let (before, after) = (i.state_at(theta, g), j.state_at(theta, g));
        prop_assert!(angle_between(before.velocity, after.velocity) < 1e-9);
        let dv = (after.velocity - before.velocity).norm();
        prop_assert!((dv - schedule.impulses[k].delta_v.abs()).abs() < 1e-9);
        // A circular interior arc may only be joined at an apsis.
        for (idx, neighbour) in [(k, j), (k + 1, i)] {
            let arc = chain.orbits()[idx];
            if idx > 0 && idx + 1 < chain.orbits().len() && arc.is_circular() {
                prop_assert!((neighbour.e() * (theta + neighbour.omega()).sin()).abs() < 1e-9);
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn two_impulse_circles_give_hohmann((r1, r2) in circular_pair(), theta in 0.0..TAU) {
        let s = Scenario::new(
            Orbit::circular(r1).unwrap(),
            Orbit::circular(r2).unwrap(),
            theta,
            theta + PI,
            2,
            AdjustableSet::empty(),
            Grav::earth(),
        )
        .unwrap();
        let sol = solve_chain(&s, None).unwrap();
        let e2 = sol.chain.orbits()[1].e();
        prop_assert!((e2 - (r2 - r1).abs() / (r1 + r2)).abs() < 1e-10);
        let j = sol.chain.junctions();
        prop_assert!((((j[1] - j[0]).rem_euclid(TAU)) - PI).abs() < 1e-9);
        assert_smooth(&sol.chain)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn circles_with_fixed_mid_apsis_give_bi_elliptic(
        r1 in 7000.0..20000.0f64,
        ratio in 1.5..4.0f64,
        mid_ratio in 1.2..3.0f64,
        theta in 0.0..TAU,
    ) {
        let r2 = r1 * ratio;
        let r_mid = r2 * mid_ratio;
        let s = Scenario::new(
            Orbit::circular(r1).unwrap(),
            Orbit::circular(r2).unwrap(),
            theta,
            theta,
            3,
            AdjustableSet::single(ParamId::A(2), (r1 + r_mid) / 2.0),
            Grav::earth(),
        )
        .unwrap();
        let sol = solve_chain(&s, None).unwrap();
        let chain = &sol.chain;
        for (k, &t) in chain.junctions().iter().enumerate() {
            for arc in [k, k + 1] {
                let o = chain.orbits()[arc];
                if !o.is_circular() {
                    prop_assert!((t + o.omega()).sin().abs() < 1e-9, "junction {k}, arc {arc}");
                }
            }
        }
        let reference = bi_elliptic(r1, r_mid, r2, &Grav::earth()).unwrap().schedule();
        prop_assert!((chain.schedule().cost_ce() - reference.cost_ce()).abs() < 1e-9);
        assert_smooth(chain)?;
    }

    #[test]
    fn solved_three_impulse_chains_are_smooth(
        initial in ellipse(),
        target in ellipse(),
        t1 in 0.0..TAU,
        t4 in 0.0..TAU,
        omega2 in 0.0..TAU,
    ) {
        let s = three_impulse(initial, target, t1, t4, omega2);
        if let Ok(sol) = solve_chain(&s, None) {
            assert_smooth(&sol.chain)?;
        }
    }

    #[test]
    fn circular_neighbours_meet_at_apsides(
        initial in ellipse(),
        r in 7000.0..40000.0f64,
        t1 in 0.0..TAU,
        t4 in 0.0..TAU,
        omega2 in 0.0..TAU,
    ) {
        let s = three_impulse(initial, Orbit::circular(r).unwrap(), t1, t4, omega2);
        if let Ok(sol) = solve_chain(&s, None) {
            let arc = sol.chain.orbits()[2];
            let theta = sol.chain.junctions()[2];
            prop_assert!((arc.e() * (theta + arc.omega()).sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn analytic_jacobian_matches_differences(
        initial in ellipse(),
        target in ellipse(),
        t1 in 0.0..TAU,
        t4 in 0.0..TAU,
        omega2 in 0.0..TAU,
        jitter in prop::collection::vec(-0.05..0.05f64, 6),
    ) {
        let s = three_impulse(initial, target, t1, t4, omega2);
        let mut system = assemble_system(&s).unwrap();
        system.set_jacobian_mode(JacobianMode::Analytic);
        let mut x = system.default_guess();
        for (v, d) in x.iter_mut().zip(&jitter) {
            *v += d * v.abs().max(1.0);
        }
        let n = system.dim();
        let (mut analytic, mut fd) = (vec![0.0; n * n], vec![0.0; n * n]);
        system.jacobian(&x, &mut analytic);
        central_difference_jacobian(&system, &x, 1e-7, &mut fd);
        let scale = fd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, f) in analytic.iter().zip(&fd) {
            prop_assert!((a - f).abs() <= 1e-5 * f.abs().max(1e-3 * scale), "{a} vs {f}");
        }
    }
}
