//! Dense `(x, y)` samples for plotting.

use std::f64::consts::TAU;
use std::fmt::Write;

use sbgm::lambert::LambertCandidate;
use sbgm::text::format_g;
use sbgm::variational::DecayHistory;
use sbgm::{Chain, Orbit, Schedule};

/// Largest angular step between samples.
pub const STEP: f64 = 0.1 * std::f64::consts::PI / 180.0;

const HEADER: &str = "x_km,y_km,arc_index\n";

fn push(csv: &mut String, r: f64, theta: f64, arc: usize) {
    let (x, y) = (r * theta.cos(), r * theta.sin());
    writeln!(csv, "{},{},{}", format_g(x), format_g(y), arc).expect("writing to a String");
}

/// Samples `orbit` prograde from `from` through `sweep` radians, both ends included.
fn arc(csv: &mut String, orbit: &Orbit, from: f64, sweep: f64, index: usize) {
    let n = ((sweep / STEP).ceil() as usize).max(1);
    for k in 0..=n {
        let theta = from + sweep * k as f64 / n as f64;
        push(csv, orbit.radius_at(theta), theta, index);
    }
}

fn forward(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(TAU);
    if d == 0.0 {
        TAU
    } else {
        d
    }
}

/// Full initial orbit, each transfer arc between its junctions, full final orbit.
pub fn chain_csv(chain: &Chain) -> String {
    let (orbits, junctions) = (chain.orbits(), chain.junctions());
    let mut csv = String::from(HEADER);
    arc(&mut csv, &orbits[0], 0.0, TAU, 0);
    for k in 1..orbits.len() - 1 {
        let (from, to) = (junctions[k - 1], junctions[k]);
        arc(&mut csv, &orbits[k], from, forward(from, to), k);
    }
    arc(&mut csv, &orbits[orbits.len() - 1], 0.0, TAU, orbits.len() - 1);
    csv
}

/// End orbits plus the conic arc of the best Lambert transfer, when elliptic.
pub fn lambert_csv(initial: &Orbit, target: &Orbit, best: &LambertCandidate<f64>) -> String {
    let mut csv = String::from(HEADER);
    arc(&mut csv, initial, 0.0, TAU, 0);
    let mut last = 1;
    if let Some(orbit) = &best.solution.transfer_orbit {
        arc(
            &mut csv,
            orbit,
            best.theta_dep,
            forward(best.theta_dep, best.theta_arr),
            1,
        );
        last = 2;
    }
    arc(&mut csv, target, 0.0, TAU, last);
    csv
}

/// The single-impulse case has no transfer arc: both end orbits only.
pub fn single_csv(initial: &Orbit, target: &Orbit, theta_dep: f64, solutions: &[Schedule]) -> String {
    let mut csv = String::from(HEADER);
    arc(&mut csv, initial, 0.0, TAU, 0);
    // The coast on the initial orbit up to the first crossing.
    if let Some(s) = solutions.first() {
        arc(&mut csv, initial, theta_dep, forward(theta_dep, s.impulses[0].theta), 1);
    }
    arc(&mut csv, target, 0.0, TAU, 2);
    csv
}

pub fn decay_csv(history: &DecayHistory<f64>) -> String {
    let mut csv = String::from(HEADER);
    for s in &history.samples {
        push(&mut csv, s.r, s.theta, 0);
    }
    csv
}
