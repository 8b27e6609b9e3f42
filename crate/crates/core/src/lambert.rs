//! Zero-revolution Lambert arcs (universal variables) and the grid searches
//! that optimise a two-impulse Lambert transfer.

use rayon::prelude::*;

use crate::error::{Error, Result};
pub use crate::grid::Grid;
use crate::orbit::{elements_from_state, GravModel, PlanarOrbit, PlanarState};
use crate::sbgm::{Impulse, ImpulseSchedule, ManeuverScenario};
use crate::scalar::{normalize_angle, prograde_sweep, Scalar};
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Prograde,
    Retrograde,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertProblem<T> {
    pub r_start: Vec2<T>,
    pub r_end: Vec2<T>,
    pub tof: T,
    pub direction: Direction,
    pub grav: GravModel<T>,
}

impl<T: Scalar> LambertProblem<T> {
    pub fn prograde(r_start: Vec2<T>, r_end: Vec2<T>, tof: T, grav: GravModel<T>) -> Self {
        Self {
            r_start,
            r_end,
            tof,
            direction: Direction::Prograde,
            grav,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambertSolution<T> {
    pub v_start: Vec2<T>,
    pub v_end: Vec2<T>,
    /// `None` when the connecting arc is hyperbolic or parabolic.
    pub transfer_orbit: Option<PlanarOrbit<T>>,
}

fn stumpff<T: Scalar>(z: T) -> (T, T) {
    let small = T::lit(1e-3);
    if z > small {
        let s = z.sqrt();
        let h = (s / T::lit(2.0)).sin();
        ((s - s.sin()) / (s * s * s), T::lit(2.0) * h * h / z)
    } else if z < -small {
        let s = (-z).sqrt();
        let h = (s / T::lit(2.0)).sinh();
        ((s.sinh() - s) / (s * s * s), T::lit(2.0) * h * h / (-z))
    } else {
        // Leading terms of the series.
        let z2 = z * z;
        (
            T::one() / T::lit(6.0) - z / T::lit(120.0) + z2 / T::lit(5040.0) - z2 * z / T::lit(362_880.0),
            T::lit(0.5) - z / T::lit(24.0) + z2 / T::lit(720.0) - z2 * z / T::lit(40_320.0),
        )
    }
}

/// Solves the prograde, zero-revolution Lambert problem.
///
/// Universal-variable formulation: bisection on `z` over the range where
/// the auxiliary `y(z)` is positive, up to the elliptic limit `z = 4π²`.
pub fn lambert_solve<T: Scalar>(problem: &LambertProblem<T>) -> Result<LambertSolution<T>> {
    if problem.direction == Direction::Retrograde {
        return Err(Error::RetrogradeTransfer);
    }
    let (p1, p2) = (problem.r_start, problem.r_end);
    let (r1, r2) = (p1.norm(), p2.norm());
    if !(r1 > T::zero()) || !(r2 > T::zero()) || !(problem.tof > T::zero()) || !problem.tof.is_finite() {
        return Err(Error::InvalidScenario(
            "lambert endpoints and time of flight must be positive".into(),
        ));
    }
    let dtheta = prograde_sweep(p1.angle(), p2.angle());
    let cos_d = p1.dot(p2) / (r1 * r2);
    let sin_d = dtheta.sin();
    let tol = T::lit(1e-10).max(T::epsilon().sqrt());
    if sin_d.abs() < tol {
        return Err(Error::DegenerateGeometry);
    }
    let a = sin_d * (r1 * r2 / (T::one() - cos_d)).sqrt();
    let sqrt_mu = problem.grav.mu().sqrt();
    let target = sqrt_mu * problem.tof;

    let y_of = |z: T| {
        let (s, c) = stumpff(z);
        r1 + r2 + a * (z * s - T::one()) / c.sqrt()
    };
    // Negative where y < 0 so the bracket below stays monotone.
    let g = |z: T| {
        let y = y_of(z);
        if !(y > T::zero()) {
            return -T::infinity();
        }
        let (s, c) = stumpff(z);
        (y / c).powf(T::lit(1.5)) * s + a * y.sqrt() - target
    };

    let four_pi2 = T::lit(4.0) * T::PI() * T::PI();
    let mut hi = four_pi2 * (T::one() - T::lit(1e-12).max(T::epsilon() * T::lit(64.0)));
    if !(g(hi) > T::zero()) {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual: g(hi).to_f64_lossy(),
        });
    }
    let mut lo = -four_pi2;
    while g(lo) > T::zero() {
        lo = lo * T::lit(2.0);
        if lo < T::lit(-1e4) || !g(lo).is_finite() {
            return Err(Error::NoConvergence {
                iterations: 0,
                residual: f64::NAN,
            });
        }
    }
    for _ in 0..400 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let z = if y_of(lo) > T::zero() {
        (lo + hi) / T::lit(2.0)
    } else {
        hi
    };
    let y = y_of(z);
    let f = T::one() - y / r1;
    let gg = a * (y / problem.grav.mu()).sqrt();
    let gdot = T::one() - y / r2;
    let v_start = (p2 - p1 * f) * (T::one() / gg);
    let v_end = (p2 * gdot - p1) * (T::one() / gg);
    if !v_start.is_finite() || !v_end.is_finite() {
        return Err(Error::NoConvergence {
            iterations: 400,
            residual: f64::NAN,
        });
    }
    let transfer_orbit = PlanarState::new(p1, v_start)
        .and_then(|s| elements_from_state(&s, &problem.grav))
        .ok()
        .map(|pos| pos.orbit);
    Ok(LambertSolution {
        v_start,
        v_end,
        transfer_orbit,
    })
}

/// One evaluated Lambert transfer.
#[derive(Debug, Clone, PartialEq)]
pub struct LambertCandidate<T> {
    pub theta_dep: T,
    pub theta_arr: T,
    pub tof: T,
    pub solution: LambertSolution<T>,
    pub schedule: ImpulseSchedule<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LambertOptimum<T> {
    /// Least total Δv.
    pub best_ce: LambertCandidate<T>,
    /// Least largest impulse.
    pub best_mi: LambertCandidate<T>,
    pub evaluated: usize,
    pub failed: usize,
}

/// Departure on `initial` at `theta_dep`, arrival on `target` at
/// `theta_arr`, both burns taken as full velocity differences.
pub fn lambert_transfer<T: Scalar>(
    initial: &PlanarOrbit<T>,
    target: &PlanarOrbit<T>,
    theta_dep: T,
    theta_arr: T,
    tof: T,
    grav: &GravModel<T>,
) -> Result<LambertCandidate<T>> {
    let dep = initial.state_at(theta_dep, grav);
    let arr = target.state_at(theta_arr, grav);
    let solution = lambert_solve(&LambertProblem::prograde(dep.position, arr.position, tof, *grav))?;
    let burn = |theta: T, radius: T, dv: Vec2<T>| Impulse {
        theta,
        radius,
        delta_v: dv.norm(),
        tangential: false,
    };
    let schedule = ImpulseSchedule::new(
        vec![
            burn(
                normalize_angle(theta_dep),
                dep.position.norm(),
                solution.v_start - dep.velocity,
            ),
            burn(
                normalize_angle(theta_arr),
                arr.position.norm(),
                arr.velocity - solution.v_end,
            ),
        ],
        vec![tof],
    );
    Ok(LambertCandidate {
        theta_dep: normalize_angle(theta_dep),
        theta_arr: normalize_angle(theta_arr),
        tof,
        solution,
        schedule,
    })
}

// Ties go to the shorter transfer, then the smaller arrival and departure angles.
fn better<T: Scalar>(
    cost: impl Fn(&LambertCandidate<T>) -> T,
    a: &LambertCandidate<T>,
    b: &LambertCandidate<T>,
) -> bool {
    let key = |c: &LambertCandidate<T>| (cost(c), c.tof, c.theta_arr, c.theta_dep);
    let (ka, kb) = (key(a), key(b));
    ka.partial_cmp(&kb) == Some(std::cmp::Ordering::Less)
}

fn reduce<T: Scalar>(results: Vec<Option<LambertCandidate<T>>>) -> Result<LambertOptimum<T>> {
    let evaluated = results.len();
    let ok: Vec<_> = results.into_iter().flatten().collect();
    let failed = evaluated - ok.len();
    let pick = |cost: fn(&LambertCandidate<T>) -> T| {
        ok.iter()
            .filter(|c| cost(c).is_finite())
            .fold(None::<&LambertCandidate<T>>, |best, c| match best {
                Some(b) if !better(cost, c, b) => Some(b),
                _ => Some(c),
            })
            .cloned()
    };
    let best_ce = pick(|c| c.schedule.cost_ce()).ok_or(Error::AllGridPointsFailed)?;
    let best_mi = pick(|c| c.schedule.cost_mi()).ok_or(Error::AllGridPointsFailed)?;
    Ok(LambertOptimum {
        best_ce,
        best_mi,
        evaluated,
        failed,
    })
}

/// Grid search over every `(θ_dep, θ_arr, t_f)` combination, evaluated in
/// parallel and reduced deterministically.
pub fn lambert_search<T: Scalar>(
    initial: &PlanarOrbit<T>,
    target: &PlanarOrbit<T>,
    grav: &GravModel<T>,
    dep_grid: &Grid<T>,
    arr_grid: &Grid<T>,
    tof_grid: &Grid<T>,
) -> Result<LambertOptimum<T>> {
    let (nd, na, nt) = (dep_grid.points, arr_grid.points, tof_grid.points);
    let results: Vec<Option<LambertCandidate<T>>> = (0..nd * na * nt)
        .into_par_iter()
        .map(|k| {
            let (d, rest) = (k / (na * nt), k % (na * nt));
            let (a, t) = (rest / nt, rest % nt);
            lambert_transfer(
                initial,
                target,
                dep_grid.value(d),
                arr_grid.value(a),
                tof_grid.value(t),
                grav,
            )
            .ok()
        })
        .collect();
    reduce(results)
}

/// Scenario (a): both endpoints fixed by the scenario, only `t_f` searched.
pub fn lambert_scenario_a<T: Scalar>(scenario: &ManeuverScenario<T>, tof_grid: &Grid<T>) -> Result<LambertOptimum<T>> {
    lambert_search(
        &scenario.initial,
        &scenario.target,
        &scenario.grav,
        &Grid::single(scenario.theta_first),
        &Grid::single(scenario.theta_last),
        tof_grid,
    )
}

/// Scenario (b): departure fixed at `theta_first`; arrival angle and `t_f`
/// searched.
pub fn lambert_scenario_b<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    tof_grid: &Grid<T>,
    theta_grid: &Grid<T>,
) -> Result<LambertOptimum<T>> {
    lambert_search(
        &scenario.initial,
        &scenario.target,
        &scenario.grav,
        &Grid::single(scenario.theta_first),
        theta_grid,
        tof_grid,
    )
}

/// Compass-search polish of a grid optimum in `(θ_dep, θ_arr, t_f)`.
///
/// Only the coordinates flagged in `free` move. Steps start at one grid
/// cell and halve whenever no move improves the cost.
pub fn refine<T: Scalar>(
    initial: &PlanarOrbit<T>,
    target: &PlanarOrbit<T>,
    grav: &GravModel<T>,
    start: &LambertCandidate<T>,
    free: [bool; 3],
    steps: [T; 3],
    cost: fn(&ImpulseSchedule<T>) -> T,
) -> LambertCandidate<T> {
    let eval = |x: [T; 3]| {
        if !(x[2] > T::zero()) {
            return None;
        }
        lambert_transfer(initial, target, x[0], x[1], x[2], grav)
            .ok()
            .filter(|c| cost(&c.schedule).is_finite())
    };
    let mut best = start.clone();
    let mut x = [start.theta_dep, start.theta_arr, start.tof];
    let mut h = steps;
    let floor = [T::lit(1e-9), T::lit(1e-9), T::lit(1e-6)];
    for _ in 0..10_000 {
        let mut moved = false;
        for k in 0..3 {
            if !free[k] {
                continue;
            }
            for sign in [T::one(), -T::one()] {
                let mut trial = x;
                trial[k] = trial[k] + sign * h[k];
                if let Some(c) = eval(trial) {
                    if cost(&c.schedule) < cost(&best.schedule) {
                        best = c;
                        x = trial;
                        moved = true;
                        break;
                    }
                }
            }
        }
        if !moved {
            let mut done = true;
            for k in 0..3 {
                h[k] = h[k] / T::lit(2.0);
                done &= !free[k] || h[k] < floor[k];
            }
            if done {
                break;
            }
        }
    }
    best
}

/// Alternative reading of scenario (b): the departure angle on the initial
/// orbit is searched as well, on the same angle grid as the arrival.
pub fn lambert_free_departure<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    tof_grid: &Grid<T>,
    theta_grid: &Grid<T>,
) -> Result<LambertOptimum<T>> {
    let (o1, o2, g) = (&scenario.initial, &scenario.target, &scenario.grav);
    let coarse = lambert_search(o1, o2, g, theta_grid, theta_grid, tof_grid)?;
    let cell = |grid: &Grid<T>| {
        if grid.points > 1 {
            grid.value(1) - grid.value(0)
        } else {
            T::lit(1e-3)
        }
    };
    let steps = [cell(theta_grid), cell(theta_grid), cell(tof_grid)];
    Ok(LambertOptimum {
        best_ce: refine(o1, o2, g, &coarse.best_ce, [true; 3], steps, |s| s.cost_ce()),
        best_mi: refine(o1, o2, g, &coarse.best_mi, [true; 3], steps, |s| s.cost_mi()),
        ..coarse
    })
}
