use std::f64::consts::TAU;

use proptest::prelude::*;
use sbgm::{conic_intersections, elements_from_state, state_from_elements, Grav, Orbit, Position};

fn orbit() -> impl Strategy<Value = Orbit> {
    (7000.0..60000.0f64, 0.01..0.9f64, 0.0..TAU).prop_map(|(a, e, w)| Orbit::new(a, e, w).unwrap())
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn state_round_trip(o in orbit(), theta in 0.0..TAU) {
        let g = Grav::earth();
        let pos = Position::new(o, theta);
        let back = elements_from_state(&state_from_elements(&pos, &g), &g).unwrap();
        prop_assert!((back.orbit.a() - o.a()).abs() <= 1e-10 * o.a());
        prop_assert!((back.orbit.e() - o.e()).abs() <= 1e-10 * o.e());
        prop_assert!(angle_gap(back.orbit.omega(), o.omega()) <= 1e-10);
        prop_assert!(angle_gap(back.theta, pos.theta) <= 1e-10);
    }
}

proptest! {
    #[test]
    fn slope_matches_finite_difference(o in orbit(), theta in 0.0..TAU) {
        let h = 1e-6;
        let fd = (o.radius_at(theta + h) - o.radius_at(theta - h)) / (2.0 * h);
        let slope = o.slope_at(theta);
        // Relative to the radius scale where the slope itself vanishes.
        prop_assert!((fd - slope).abs() <= 1e-5 * slope.abs().max(1e-3 * o.radius_at(theta)));
    }

    #[test]
    fn energy_is_conserved(o in orbit()) {
        let g = Grav::earth();
        let energy = |theta: f64| {
            let s = o.state_at(theta, &g);
            s.velocity.norm().powi(2) / 2.0 - g.mu() / s.position.norm()
        };
        let reference = -g.mu() / (2.0 * o.a());
        for k in 0..100 {
            let e = energy(k as f64 * TAU / 100.0);
            prop_assert!((e - reference).abs() <= 1e-10 * reference.abs());
        }
    }

    #[test]
    fn flight_time_adds_up(o in orbit(), t1 in 0.0..TAU, d1 in 0.0..3.0f64, d2 in 0.0..3.0f64) {
        let g = Grav::earth();
        let (t2, t3) = (t1 + d1, t1 + d1 + d2);
        let whole = o.time_of_flight(t1, t3, &g);
        let parts = o.time_of_flight(t1, t2, &g) + o.time_of_flight(t2, t3, &g);
        prop_assert!((whole - parts).abs() <= 1e-9 * whole.max(1.0));
    }

    #[test]
    fn intersections_lie_on_both_conics(a in orbit(), b in orbit()) {
        for theta in conic_intersections(&a, &b).unwrap() {
            let (ra, rb) = (a.radius_at(theta), b.radius_at(theta));
            prop_assert!((ra - rb).abs() <= 1e-6 * ra, "{ra} vs {rb}");
        }
    }
}
