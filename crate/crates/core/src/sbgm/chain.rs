use crate::error::{Error, Result};
use crate::newton::{self, NewtonOptions, NewtonReport};
use crate::orbit::{vis_viva, GravModel, PlanarOrbit};
use crate::scalar::Scalar;

use super::scenario::{AdjustableSet, ManeuverScenario};
use super::schedule::{Impulse, ImpulseSchedule};
use super::system::{assemble_free_end, assemble_system, f1, f2, ApsidalSystem, FreeEnd, JacobianMode, JunctionSystem};

/// Consecutive confocal arcs `1..=N+1` joined at polar angles θ_{i(i+1)}.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferChain<T> {
    orbits: Vec<PlanarOrbit<T>>,
    junctions: Vec<T>,
    grav: GravModel<T>,
}

impl<T: Scalar> TransferChain<T> {
    pub fn new(orbits: Vec<PlanarOrbit<T>>, junctions: Vec<T>, grav: GravModel<T>) -> Result<Self> {
        if junctions.is_empty() || orbits.len() != junctions.len() + 1 {
            return Err(Error::InvalidScenario(format!(
                "{} orbits cannot be joined at {} junctions",
                orbits.len(),
                junctions.len()
            )));
        }
        let junctions = junctions.into_iter().map(crate::scalar::normalize_angle).collect();
        Ok(Self {
            orbits,
            junctions,
            grav,
        })
    }

    pub fn orbits(&self) -> &[PlanarOrbit<T>] {
        &self.orbits
    }

    pub fn junctions(&self) -> &[T] {
        &self.junctions
    }

    pub fn grav(&self) -> GravModel<T> {
        self.grav
    }

    pub fn n_impulses(&self) -> usize {
        self.junctions.len()
    }

    /// `(|f₁|, |f₂|/a_i)` at every junction.
    pub fn junction_residuals(&self) -> Vec<(T, T)> {
        self.junctions
            .iter()
            .enumerate()
            .map(|(k, &th)| {
                let (i, j) = (self.orbits[k], self.orbits[k + 1]);
                (
                    f1(i.into(), j.into(), th).abs(),
                    f2(i.into(), j.into(), th).abs() / i.a(),
                )
            })
            .collect()
    }

    /// Largest scaled junction residual.
    pub fn max_residual(&self) -> T {
        self.junction_residuals()
            .into_iter()
            .fold(T::zero(), |m, (r1, r2)| m.max(r1).max(r2))
    }

    /// A circular interior arc can only meet its neighbours at their apsides.
    pub(crate) fn check_circular_interior(&self) -> Result<()> {
        let tol = T::lit(1e-8).max(T::epsilon().sqrt());
        for k in 1..self.orbits.len() - 1 {
            if !self.orbits[k].is_circular() {
                continue;
            }
            let before = self.orbits[k - 1];
            let after = self.orbits[k + 1];
            let off_before = before.e() * (self.junctions[k - 1] + before.omega()).sin();
            let off_after = after.e() * (self.junctions[k] + after.omega()).sin();
            if off_before.abs() > tol || off_after.abs() > tol {
                return Err(Error::CircularInteriorArc { orbit: k + 1 });
            }
        }
        Ok(())
    }

    /// Tangential speed changes at each junction and coast times on the
    /// interior arcs.
    pub fn schedule(&self) -> ImpulseSchedule<T> {
        let impulses = self
            .junctions
            .iter()
            .enumerate()
            .map(|(k, &theta)| {
                let r = self.orbits[k].radius_at(theta);
                let before = vis_viva(self.orbits[k].a(), r, &self.grav);
                let after = vis_viva(self.orbits[k + 1].a(), r, &self.grav);
                Impulse {
                    theta,
                    radius: r,
                    delta_v: after - before,
                    tangential: true,
                }
            })
            .collect();
        let arc_times = (1..self.orbits.len() - 1)
            .map(|i| self.orbits[i].time_of_flight(self.junctions[i - 1], self.junctions[i], &self.grav))
            .collect();
        ImpulseSchedule::new(impulses, arc_times)
    }
}

pub fn impulse_schedule<T: Scalar>(chain: &TransferChain<T>) -> ImpulseSchedule<T> {
    chain.schedule()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    pub newton: NewtonOptions<T>,
    pub jacobian: JacobianMode,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            newton: NewtonOptions::default(),
            jacobian: JacobianMode::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveDiagnostics<T> {
    pub iterations: usize,
    /// Final `‖F‖∞` of the scaled system.
    pub residual: T,
    pub relaxations: usize,
}

/// A solved chain plus the root it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSolution<T> {
    pub chain: TransferChain<T>,
    /// Converged unknown vector, in the system's ordering.
    pub unknowns: Vec<T>,
    pub diagnostics: SolveDiagnostics<T>,
}

fn finish<T: Scalar>(system: &JunctionSystem<T>, report: NewtonReport<T>) -> Result<ChainSolution<T>> {
    let chain = system.build_chain(&report.x)?;
    Ok(ChainSolution {
        unknowns: system.unknowns_of(&chain),
        chain,
        diagnostics: SolveDiagnostics {
            iterations: report.iterations,
            residual: report.residual,
            relaxations: report.relaxations,
        },
    })
}

fn run<T: Scalar>(system: JunctionSystem<T>, guess: Option<&[T]>, opts: &SolveOptions<T>) -> Result<ChainSolution<T>> {
    let mut system = system;
    system.set_jacobian_mode(opts.jacobian);
    let x0 = match guess {
        Some(g) if g.len() == newton::System::dim(&system) => g.to_vec(),
        Some(g) => {
            return Err(Error::DimensionMismatch {
                unknowns: g.len(),
                equations: newton::System::dim(&system),
            })
        }
        None => {
            let first = newton::solve(&system, &system.default_guess(), &opts.newton)
                .and_then(|report| finish(&system, report));
            return first.or_else(|err| {
                system
                    .fallback_guesses()
                    .iter()
                    .find_map(|x0| {
                        newton::solve(&system, x0, &opts.newton)
                            .and_then(|report| finish(&system, report))
                            .ok()
                    })
                    .ok_or(err)
            });
        }
    };
    let report = newton::solve(&system, &x0, &opts.newton)?;
    finish(&system, report)
}

/// Solves the junction system of `scenario` from `guess` (or the default
/// guess) with the default options.
pub fn solve_chain<T: Scalar>(scenario: &ManeuverScenario<T>, guess: Option<&[T]>) -> Result<ChainSolution<T>> {
    solve_chain_with(scenario, guess, &SolveOptions::default())
}

pub fn solve_chain_with<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    guess: Option<&[T]>,
    opts: &SolveOptions<T>,
) -> Result<ChainSolution<T>> {
    run(assemble_system(scenario)?, guess, opts)
}

/// Two-impulse transfer whose first impulse sits at the perigee of
/// `initial`.
pub fn two_impulse_perigee<T: Scalar>(
    initial: &PlanarOrbit<T>,
    target: &PlanarOrbit<T>,
    grav: &GravModel<T>,
) -> Result<ChainSolution<T>> {
    let system = ApsidalSystem::new(*initial, *target, initial.perigee_angle(), *grav)?;
    run(JunctionSystem::Apsidal(system), None, &SolveOptions::default())
}

/// A two-impulse member of the three-impulse family: one terminal impulse
/// vanishes, so one end orbit is simply extended.
///
/// With [`FreeEnd::Departure`] the spacecraft coasts on the initial orbit to
/// a solved departure angle (`Δv₁ = 0`); with [`FreeEnd::Arrival`] it joins
/// the target early and coasts to `theta_last` (`Δv₃ = 0`). The returned
/// chain has three junctions so its schedule and times line up with a
/// three-impulse sweep. `guess` is `(a₂, e₂, ω₂, θ_free)`.
pub fn two_impulse_shape_based<T: Scalar>(
    scenario: &ManeuverScenario<T>,
    free_end: FreeEnd,
    guess: Option<&[T]>,
) -> Result<ChainSolution<T>> {
    let reduced = ManeuverScenario {
        n_impulses: 2,
        adjustables: AdjustableSet::empty(),
        ..scenario.clone()
    };
    let system = JunctionSystem::Full(assemble_free_end(&reduced, free_end)?);
    let solution = run(system, guess, &SolveOptions::default())?;
    let c = &solution.chain;
    let (o, th) = (c.orbits(), c.junctions());
    let chain = match free_end {
        FreeEnd::Departure => TransferChain::new(
            vec![o[0], o[0], o[1], o[2]],
            vec![scenario.theta_first, th[0], th[1]],
            c.grav(),
        )?,
        FreeEnd::Arrival => TransferChain::new(
            vec![o[0], o[1], o[2], o[2]],
            vec![th[0], th[1], scenario.theta_last],
            c.grav(),
        )?,
    };
    Ok(ChainSolution { chain, ..solution })
}
