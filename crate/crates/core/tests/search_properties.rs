use std::f64::consts::TAU;

use proptest::prelude::*;
use sbgm::grid::Grid;
use sbgm::lambert::{lambert_scenario_a, lambert_scenario_b, lambert_solve, LambertProblem};
use sbgm::optimize::{sweep_omega2, SweepOptions};
use sbgm::{AdjustableSet, Grav, Orbit, ParamId, Scenario, Vec2};

fn case_one() -> Scenario {
    Scenario::new(
        Orbit::new(13756.0, 0.5, 10f64.to_radians()).unwrap(),
        Orbit::new(13756.0, 0.0, 60f64.to_radians()).unwrap(),
        270f64.to_radians(),
        30f64.to_radians(),
        3,
        AdjustableSet::single(ParamId::Omega(2), 0.0),
        Grav::earth(),
    )
    .unwrap()
}

fn coarse(warm_start: bool) -> SweepOptions<f64> {
    SweepOptions {
        grid: Grid::full_turn(360),
        warm_start,
        ..SweepOptions::default()
    }
}

#[test]
fn sweeps_are_bitwise_repeatable() {
    for warm in [true, false] {
        let a = sweep_omega2(&case_one(), &coarse(warm)).unwrap();
        let b = sweep_omega2(&case_one(), &coarse(warm)).unwrap();
        assert_eq!(a, b);
        let (mut ca, mut cb) = (Vec::new(), Vec::new());
        a.write_csv(&mut ca).unwrap();
        b.write_csv(&mut cb).unwrap();
        assert_eq!(ca, cb);
    }
}

#[test]
fn three_impulse_optimum_never_loses_to_two_impulse() {
    let r = sweep_omega2(&case_one(), &coarse(true)).unwrap();
    assert!(!r.two_impulse.is_empty());
    let (ce, mi) = (r.optimum_ce.unwrap(), r.optimum_mi.unwrap());
    for p in &r.two_impulse {
        let dv = &p.point.schedule.impulses;
        assert!(dv[p.vanishing].delta_v.abs() < 1e-4);
        assert!(ce.report.j_c <= p.point.report.j_c + 1e-9);
        assert!(mi.report.j_m <= p.point.report.j_m + 1e-9);
    }
}

#[test]
fn free_arrival_search_beats_fixed_arrival() {
    let s = case_one();
    let tof = Grid::new(600.0, 30000.0, 60, true).unwrap();
    let a = lambert_scenario_a(&s, &tof).unwrap();
    // 5° steps include the fixed arrival angle of 30°.
    let b = lambert_scenario_b(&s, &tof, &Grid::full_turn(72)).unwrap();
    assert!(b.best_ce.schedule.cost_ce() <= a.best_ce.schedule.cost_ce() + 1e-12);
    assert!(b.best_mi.schedule.cost_mi() <= a.best_mi.schedule.cost_mi() + 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// The returned arc, timed with Kepler's equation, links both endpoints
    /// in the requested time.
    #[test]
    fn lambert_arc_flies_the_requested_time(
        r1 in 6800.0..40000.0f64,
        r2 in 6800.0..40000.0f64,
        t1 in 0.0..TAU,
        sweep in 0.1..6.1f64,
        tof_scale in 0.2..2.0f64,
    ) {
        let g = Grav::earth();
        let t2 = t1 + sweep;
        let (p1, p2) = (Vec2::from_polar(r1, t1), Vec2::from_polar(r2, t2));
        // Scale by the period of a circle of mean radius.
        let mean = (r1 + r2) / 2.0;
        let tof = tof_scale * TAU * (mean.powi(3) / g.mu()).sqrt();
        let Ok(sol) = lambert_solve(&LambertProblem::prograde(p1, p2, tof, g)) else {
            // Hyperbolic or parabolic arcs are out of scope.
            return Ok(());
        };
        let Some(orbit) = sol.transfer_orbit else { return Ok(()); };
        prop_assert!((orbit.radius_at(t1) - r1).abs() < 1e-6 * r1);
        prop_assert!((orbit.radius_at(t2) - r2).abs() < 1e-6 * r2);
        let flown = orbit.time_of_flight(t1, t2, &g);
        prop_assert!((flown - tof).abs() < 1e-6 * tof, "{flown} vs {tof}");
        let start = orbit.state_at(t1, &g);
        prop_assert!((start.velocity - sol.v_start).norm() < 1e-9 * sol.v_start.norm());
    }
}
