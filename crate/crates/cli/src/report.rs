//! Serializable views of solver results. Floats keep full precision so a
//! report can be reloaded and re-checked.

use serde::{Deserialize, Serialize};

use sbgm::lambert::{LambertCandidate, LambertOptimum};
use sbgm::optimize::{SweepPoint, SweepResult};
use sbgm::sbgm::SolveDiagnostics;
use sbgm::variational::DecayHistory;
use sbgm::{Chain, Orbit, Schedule};

use crate::input::{Method, ScenarioFile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitOut {
    pub a_km: f64,
    pub e: f64,
    pub omega_deg: f64,
    pub omega_rad: f64,
}

impl From<&Orbit> for OrbitOut {
    fn from(o: &Orbit) -> Self {
        Self {
            a_km: o.a(),
            e: o.e(),
            omega_deg: o.omega().to_degrees(),
            omega_rad: o.omega(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpulseOut {
    pub theta_deg: f64,
    pub radius_km: f64,
    /// Signed along the velocity for tangential burns, magnitude otherwise.
    pub delta_v_kms: f64,
    pub tangential: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleOut {
    pub impulses: Vec<ImpulseOut>,
    pub arc_times_s: Vec<f64>,
    pub total_time_s: f64,
    pub j_c: f64,
    pub j_m: f64,
}

impl From<&Schedule> for ScheduleOut {
    fn from(s: &Schedule) -> Self {
        Self {
            impulses: s
                .impulses
                .iter()
                .map(|i| ImpulseOut {
                    theta_deg: i.theta.to_degrees(),
                    radius_km: i.radius,
                    delta_v_kms: i.delta_v,
                    tangential: i.tangential,
                })
                .collect(),
            arc_times_s: s.arc_times.clone(),
            total_time_s: s.total_time,
            j_c: s.cost_ce(),
            j_m: s.cost_mi(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOut {
    pub orbits: Vec<OrbitOut>,
    pub junctions_deg: Vec<f64>,
    pub junctions_rad: Vec<f64>,
    pub schedule: ScheduleOut,
    /// Largest of `|f₁|` and `|f₂|/a` over the junctions.
    pub max_junction_residual: f64,
    pub smooth: bool,
}

impl From<&Chain> for ChainOut {
    fn from(c: &Chain) -> Self {
        let schedule = c.schedule();
        Self {
            orbits: c.orbits().iter().map(OrbitOut::from).collect(),
            junctions_deg: c.junctions().iter().map(|j| j.to_degrees()).collect(),
            junctions_rad: c.junctions().to_vec(),
            smooth: schedule.is_smooth(),
            schedule: ScheduleOut::from(&schedule),
            max_junction_residual: c.max_residual(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsOut {
    pub iterations: usize,
    pub residual: f64,
    pub relaxations: usize,
}

impl From<&SolveDiagnostics<f64>> for DiagnosticsOut {
    fn from(d: &SolveDiagnostics<f64>) -> Self {
        Self {
            iterations: d.iterations,
            residual: d.residual,
            relaxations: d.relaxations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointOut {
    pub omega2_deg: f64,
    pub chain: ChainOut,
}

impl From<&SweepPoint<f64>> for PointOut {
    fn from(p: &SweepPoint<f64>) -> Self {
        Self {
            omega2_deg: p.omega2.to_degrees(),
            chain: ChainOut::from(&p.chain),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoImpulseOut {
    /// 1-based index of the impulse that vanishes.
    pub vanishing_impulse: usize,
    pub point: PointOut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOut {
    pub grid_points: usize,
    pub converged: usize,
    pub optimum_ce: Option<PointOut>,
    pub optimum_mi: Option<PointOut>,
    pub two_impulse: Vec<TwoImpulseOut>,
}

impl From<&SweepResult<f64>> for SweepOut {
    fn from(r: &SweepResult<f64>) -> Self {
        Self {
            grid_points: r.samples.len(),
            converged: r.converged_count(),
            optimum_ce: r.optimum_ce.as_ref().map(PointOut::from),
            optimum_mi: r.optimum_mi.as_ref().map(PointOut::from),
            two_impulse: r
                .two_impulse
                .iter()
                .map(|t| TwoImpulseOut {
                    vanishing_impulse: t.vanishing + 1,
                    point: PointOut::from(&t.point),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateOut {
    pub theta_dep_deg: f64,
    pub theta_arr_deg: f64,
    pub tof_s: f64,
    pub transfer_orbit: Option<OrbitOut>,
    pub schedule: ScheduleOut,
}

impl From<&LambertCandidate<f64>> for CandidateOut {
    fn from(c: &LambertCandidate<f64>) -> Self {
        Self {
            theta_dep_deg: c.theta_dep.to_degrees(),
            theta_arr_deg: c.theta_arr.to_degrees(),
            tof_s: c.tof,
            transfer_orbit: c.solution.transfer_orbit.as_ref().map(OrbitOut::from),
            schedule: ScheduleOut::from(&c.schedule),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambertOut {
    pub best_ce: CandidateOut,
    pub best_mi: CandidateOut,
    pub evaluated: usize,
    pub failed: usize,
    /// Lambert arcs are joined by arbitrary burns, never smooth.
    pub smooth: bool,
}

impl From<&LambertOptimum<f64>> for LambertOut {
    fn from(o: &LambertOptimum<f64>) -> Self {
        Self {
            best_ce: CandidateOut::from(&o.best_ce),
            best_mi: CandidateOut::from(&o.best_mi),
            evaluated: o.evaluated,
            failed: o.failed,
            smooth: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayOut {
    pub samples: usize,
    pub final_theta_rad: f64,
    pub final_a_km: f64,
    pub final_e: f64,
    pub final_omega_rad: f64,
    pub stopped_early: bool,
    pub pole_crossings: usize,
}

impl From<&DecayHistory<f64>> for DecayOut {
    fn from(h: &DecayHistory<f64>) -> Self {
        let last = h.last();
        Self {
            samples: h.samples.len(),
            final_theta_rad: last.theta,
            final_a_km: last.a,
            final_e: last.e,
            final_omega_rad: last.omega,
            stopped_early: h.stopped_early,
            pole_crossings: h.pole_crossings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Chain {
        chain: ChainOut,
        diagnostics: Option<DiagnosticsOut>,
    },
    Sweep(SweepOut),
    Lambert(LambertOut),
    Single {
        solutions: Vec<ScheduleOut>,
    },
    Decay(DecayOut),
    Compare {
        rows: Vec<CompareRow>,
        skipped: Vec<Skipped>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub method: String,
    /// Which optimum or solution this row is.
    pub variant: String,
    pub impulses: usize,
    pub j_c: f64,
    pub j_m: f64,
    pub time_s: f64,
    pub smooth: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub method: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub method: Method,
    pub scenario: ScenarioFile,
    pub outcome: Outcome,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
