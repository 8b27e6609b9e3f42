//! Cost functions and the one-parameter sweep over the second arc's
//! perigee rotation ω₂ for three-impulse chains.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::orbit::golden_min;
use crate::sbgm::{
    solve_chain_with, two_impulse_shape_based, ChainSolution, FreeEnd, ImpulseSchedule, ManeuverScenario, ParamId,
    SolveOptions, TransferChain,
};
use crate::scalar::{angle_difference, deg, normalize_angle, prograde_sweep, Scalar};
use crate::text::format_g;

/// Sum and maximum of the impulse magnitudes of one maneuver.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport<T> {
    pub j_c: T,
    pub j_m: T,
    pub per_impulse: Vec<T>,
    pub total_time: T,
}

impl<T: Scalar> CostReport<T> {
    pub fn from_schedule(schedule: &ImpulseSchedule<T>) -> Self {
        Self {
            j_c: cost_ce(schedule),
            j_m: cost_mi(schedule),
            per_impulse: schedule.magnitudes(),
            total_time: schedule.total_time,
        }
    }
}

/// Control effort `Σ |Δv_j|`.
pub fn cost_ce<T: Scalar>(schedule: &ImpulseSchedule<T>) -> T {
    schedule.cost_ce()
}

/// Largest impulse `max |Δv_j|`.
pub fn cost_mi<T: Scalar>(schedule: &ImpulseSchedule<T>) -> T {
    schedule.cost_mi()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cost {
    ControlEffort,
    MaxImpulse,
}

impl Cost {
    pub fn of<T: Scalar>(self, schedule: &ImpulseSchedule<T>) -> T {
        match self {
            Cost::ControlEffort => schedule.cost_ce(),
            Cost::MaxImpulse => schedule.cost_mi(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions<T> {
    /// ω₂ values (rad).
    pub grid: Grid<T>,
    /// Seed each sample from the previous converged root (sequential);
    /// otherwise every sample starts from the default guess (parallel).
    pub warm_start: bool,
    /// Golden-section polish of each grid argmin, to this width (rad).
    pub refine_tol: Option<T>,
    pub solve: SolveOptions<T>,
}

impl<T: Scalar> Default for SweepOptions<T> {
    fn default() -> Self {
        Self {
            grid: Grid::full_turn(1440),
            warm_start: true,
            refine_tol: Some(T::lit(1e-4_f64.to_radians())),
            solve: SolveOptions::default(),
        }
    }
}

impl<T: Scalar> SweepOptions<T> {
    /// Full-turn grid with the given step in degrees.
    pub fn with_step_deg(step_deg: T) -> Result<Self> {
        if !(step_deg > T::zero()) || !(step_deg <= T::lit(360.0)) {
            return Err(Error::InvalidGrid(format!(
                "ω₂ step must lie in (0, 360] degrees, got {step_deg}"
            )));
        }
        let points = (T::lit(360.0) / step_deg).round().to_usize().unwrap_or(1).max(1);
        Ok(Self {
            grid: Grid::full_turn(points),
            ..Self::default()
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSample<T> {
    pub omega2: T,
    /// Signed impulses; empty when the solve failed.
    pub delta_v: Vec<T>,
    pub report: Option<CostReport<T>>,
    pub unknowns: Option<Vec<T>>,
}

impl<T: Scalar> SweepSample<T> {
    pub fn converged(&self) -> bool {
        self.report.is_some()
    }
}

/// A solved chain picked out of the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T> {
    pub omega2: T,
    pub chain: TransferChain<T>,
    pub schedule: ImpulseSchedule<T>,
    pub report: CostReport<T>,
}

impl<T: Scalar> SweepPoint<T> {
    fn from_chain(omega2: T, chain: TransferChain<T>) -> Self {
        let schedule = chain.schedule();
        Self {
            omega2,
            report: CostReport::from_schedule(&schedule),
            schedule,
            chain,
        }
    }
}

/// A member of the three-impulse family with one vanishing end impulse.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoImpulsePoint<T> {
    /// Index (0-based) of the vanishing impulse: 0 or 2.
    pub vanishing: usize,
    pub point: SweepPoint<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub samples: Vec<SweepSample<T>>,
    /// Grid index of the least control effort.
    pub argmin_ce: Option<usize>,
    /// Grid index of the least maximum impulse.
    pub argmin_mi: Option<usize>,
    pub optimum_ce: Option<SweepPoint<T>>,
    pub optimum_mi: Option<SweepPoint<T>>,
    pub two_impulse: Vec<TwoImpulsePoint<T>>,
}

impl<T: Scalar> SweepResult<T> {
    pub fn converged_count(&self) -> usize {
        self.samples.iter().filter(|s| s.converged()).count()
    }

    /// Writes `omega2_deg,dv1,dv2,dv3,jc,jm,time_s,converged` rows with six
    /// significant digits; failed samples carry `nan`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "omega2_deg,dv1,dv2,dv3,jc,jm,time_s,converged")?;
        for s in &self.samples {
            let dv = |k: usize| s.delta_v.get(k).map_or(f64::NAN, |v| v.to_f64_lossy());
            let (jc, jm, t) = s.report.as_ref().map_or((f64::NAN, f64::NAN, f64::NAN), |r| {
                (r.j_c.to_f64_lossy(), r.j_m.to_f64_lossy(), r.total_time.to_f64_lossy())
            });
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                format_g(deg(s.omega2).to_f64_lossy()),
                format_g(dv(0)),
                format_g(dv(1)),
                format_g(dv(2)),
                format_g(jc),
                format_g(jm),
                format_g(t),
                s.converged()
            )?;
        }
        Ok(())
    }
}

fn solve_at<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    omega2: T,
    guess: Option<&[T]>,
    opts: &SolveOptions<T>,
) -> Result<ChainSolution<T>> {
    solve_chain_with(&scenario.with_omega2(omega2), guess, opts)
}

// Warm guess first, default guess as the fallback.
fn solve_seeded<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    omega2: T,
    seed: Option<&[T]>,
    opts: &SolveOptions<T>,
) -> Result<ChainSolution<T>> {
    match seed {
        Some(g) => solve_at(scenario, omega2, Some(g), opts).or_else(|_| solve_at(scenario, omega2, None, opts)),
        None => solve_at(scenario, omega2, None, opts),
    }
}

fn sample_from<T: Scalar>(omega2: T, solved: Result<ChainSolution<T>>) -> SweepSample<T> {
    match solved {
        Ok(sol) => {
            let schedule = sol.chain.schedule();
            SweepSample {
                omega2,
                delta_v: schedule.impulses.iter().map(|i| i.delta_v).collect(),
                report: Some(CostReport::from_schedule(&schedule)),
                unknowns: Some(sol.unknowns),
            }
        }
        Err(_) => SweepSample {
            omega2,
            delta_v: Vec::new(),
            report: None,
            unknowns: None,
        },
    }
}

fn argmin<T: Scalar>(samples: &[SweepSample<T>], key: impl Fn(&CostReport<T>) -> T) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (k, s) in samples.iter().enumerate() {
        if let Some(r) = &s.report {
            let v = key(r);
            if v.is_finite() && best.is_none_or(|(_, b)| v < b) {
                best = Some((k, v));
            }
        }
    }
    best.map(|(k, _)| k)
}

/// Sweeps ω₂ for a three-impulse scenario.
///
/// Each grid value is solved (warm-started from the previous converged root
/// by default), the grid argmins for both costs are polished by golden
/// section between their neighbours, and sign changes of the first or last
/// impulse are bisected and then re-solved as exact two-impulse chains.
/// Failed samples are recorded, never fatal.
pub fn sweep_omega2<T: Scalar>(scenario: &ManeuverScenario<T>, opts: &SweepOptions<T>) -> Result<SweepResult<T>> {
    if scenario.n_impulses != 3 {
        return Err(Error::InvalidScenario(
            "the ω₂ sweep needs a three-impulse scenario".into(),
        ));
    }
    let grid = opts.grid.values();
    let samples: Vec<SweepSample<T>> = if opts.warm_start {
        let mut seed: Option<Vec<T>> = None;
        let mut out = Vec::with_capacity(grid.len());
        for &w in &grid {
            let sample = sample_from(w, solve_seeded(scenario, w, seed.as_deref(), &opts.solve));
            if let Some(u) = &sample.unknowns {
                seed = Some(u.clone());
            }
            out.push(sample);
        }
        out
    } else {
        grid.par_iter()
            .map(|&w| sample_from(w, solve_at(scenario, w, None, &opts.solve)))
            .collect()
    };

    let argmin_ce = argmin(&samples, |r| r.j_c);
    let argmin_mi = argmin(&samples, |r| r.j_m);
    let cyclic = !opts.grid.endpoint && (opts.grid.end - opts.grid.start - T::TAU()).abs() < T::lit(1e-9);
    let two_impulse = find_two_impulse_points(scenario, &samples, cyclic, &opts.solve);

    let polish = |k: Option<usize>, cost: Cost| -> Option<SweepPoint<T>> {
        let k = k?;
        let mut best = solve_at(scenario, samples[k].omega2, samples[k].unknowns.as_deref(), &opts.solve)
            .ok()
            .map(|s| SweepPoint::from_chain(samples[k].omega2, s.chain))?;
        if let Some(tol) = opts.refine_tol {
            if let Some(p) = golden_polish(scenario, &samples, k, cyclic, cost, tol, &opts.solve) {
                if cost.of(&p.schedule) < cost.of(&best.schedule) {
                    best = p;
                }
            }
        }
        // Two-impulse chains belong to the same family and may sit exactly
        // on the optimum, where |Δv| has a kink.
        for t in &two_impulse {
            if cost.of(&t.point.schedule) < cost.of(&best.schedule) {
                best = t.point.clone();
            }
        }
        Some(best)
    };
    let optimum_ce = polish(argmin_ce, Cost::ControlEffort);
    let optimum_mi = polish(argmin_mi, Cost::MaxImpulse);

    Ok(SweepResult {
        samples,
        argmin_ce,
        argmin_mi,
        optimum_ce,
        optimum_mi,
        two_impulse,
    })
}

fn neighbour(k: usize, step: isize, len: usize, cyclic: bool) -> Option<usize> {
    let j = k as isize + step;
    if (0..len as isize).contains(&j) {
        Some(j as usize)
    } else if cyclic && len > 2 {
        Some(j.rem_euclid(len as isize) as usize)
    } else {
        None
    }
}

fn golden_polish<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    samples: &[SweepSample<T>],
    k: usize,
    cyclic: bool,
    cost: Cost,
    tol: T,
    opts: &SolveOptions<T>,
) -> Option<SweepPoint<T>> {
    let len = samples.len();
    let seed = samples[k].unknowns.clone()?;
    let w = samples[k].omega2;
    // One grid step either side; failed solves inside count as +∞.
    let span = |j: Option<usize>| -> T {
        j.map(|j| angle_difference(w, samples[j].omega2).abs())
            .unwrap_or(T::zero())
    };
    let (lo, hi) = (
        w - span(neighbour(k, -1, len, cyclic)),
        w + span(neighbour(k, 1, len, cyclic)),
    );
    if !(hi - lo > tol) {
        return None;
    }
    let f = |x: T| {
        solve_at(scenario, x, Some(&seed), opts)
            .map(|s| cost.of(&s.chain.schedule()))
            .unwrap_or(T::infinity())
    };
    let x = golden_min(f, lo, hi, tol);
    let sol = solve_at(scenario, x, Some(&seed), opts).ok()?;
    Some(SweepPoint::from_chain(normalize_angle(x), sol.chain))
}

/// Brackets sign changes of the first and last impulses between adjacent
/// converged samples, bisects them, and re-solves each as a two-impulse
/// chain with a free terminal junction.
fn find_two_impulse_points<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    samples: &[SweepSample<T>],
    cyclic: bool,
    opts: &SolveOptions<T>,
) -> Vec<TwoImpulsePoint<T>> {
    let len = samples.len();
    let mut found: Vec<TwoImpulsePoint<T>> = Vec::new();
    let pairs = (0..len).filter_map(|k| neighbour(k, 1, len, cyclic).map(|j| (k, j)));
    for (k, j) in pairs {
        let (s0, s1) = (&samples[k], &samples[j]);
        if !s0.converged() || !s1.converged() {
            continue;
        }
        for idx in [0usize, 2] {
            let (d0, d1) = (s0.delta_v[idx], s1.delta_v[idx]);
            let point = if d1 == T::zero() {
                // Landed exactly on the zero (e.g. an arc equal to an end orbit).
                let sol = solve_at(scenario, s1.omega2, s1.unknowns.as_deref(), opts).ok();
                sol.and_then(|sol| exact_two_impulse(scenario, sol.chain, idx))
            } else if d0 != T::zero() && (d0 < T::zero()) != (d1 < T::zero()) {
                bisect_vanishing(scenario, s0, s1, idx, opts)
            } else {
                None
            };
            let Some(point) = point else {
                continue;
            };
            let duplicate = found
                .iter()
                .any(|p| p.vanishing == idx && angle_difference(p.point.omega2, point.omega2).abs() < T::lit(1e-6));
            if !duplicate {
                found.push(TwoImpulsePoint { vanishing: idx, point });
            }
        }
    }
    found
}

fn bisect_vanishing<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    s0: &SweepSample<T>,
    s1: &SweepSample<T>,
    idx: usize,
    opts: &SolveOptions<T>,
) -> Option<SweepPoint<T>> {
    let mut lo = s0.omega2;
    let mut hi = lo + prograde_sweep(s0.omega2, s1.omega2);
    let mut seed = s0.unknowns.clone()?;
    let sign_lo = s0.delta_v[idx].signum();
    let mut last: Option<ChainSolution<T>> = None;
    for _ in 0..60 {
        let mid = (lo + hi) / T::lit(2.0);
        let sol = solve_at(scenario, mid, Some(&seed), opts).ok()?;
        let dv = sol.chain.schedule().impulses[idx].delta_v;
        if dv.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        seed = sol.unknowns.clone();
        last = Some(sol);
        if hi - lo < T::lit(1e-12).max(T::epsilon() * T::lit(8.0)) {
            break;
        }
    }
    exact_two_impulse(scenario, last?.chain, idx)
}

// Re-solves a chain whose impulse `idx` nearly vanishes as an exact
// two-impulse chain; keeps the three-impulse chain if that fails.
fn exact_two_impulse<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    chain: TransferChain<T>,
    idx: usize,
) -> Option<SweepPoint<T>> {
    // A sign flip across a branch jump is not a zero.
    if chain.schedule().impulses[idx].delta_v.abs() > T::lit(1e-4) {
        return None;
    }
    let orbits = chain.orbits();
    let junctions = chain.junctions();
    let (free_end, kept) = if idx == 0 {
        (FreeEnd::Departure, orbits[2])
    } else {
        (FreeEnd::Arrival, orbits[1])
    };
    let guess = [kept.a(), kept.e(), kept.omega(), junctions[1]];
    match two_impulse_shape_based(scenario, free_end, Some(&guess)) {
        Ok(exact) => {
            let omega2 = exact.chain.orbits()[1].omega();
            Some(SweepPoint::from_chain(omega2, exact.chain))
        }
        Err(_) => Some(SweepPoint::from_chain(chain.orbits()[1].omega(), chain)),
    }
}

/// Convenience for the `ω₂` adjustable id.
pub const OMEGA2: ParamId = ParamId::Omega(2);
