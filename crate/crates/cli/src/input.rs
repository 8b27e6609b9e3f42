//! Scenario files: degrees and km on disk, radians inside.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use sbgm::grid::Grid;
use sbgm::variational::DecayProfile;
use sbgm::{AdjustableSet, Grav, Orbit, ParamId, Scenario};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Sbgm,
    LambertA,
    LambertB,
    Hohmann,
    Bielliptic,
    Single,
    TwoImpulsePerigee,
    Variational,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialOrbit {
    pub a_km: f64,
    pub e: f64,
    pub omega_deg: f64,
    #[serde(default)]
    pub theta_dep_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinalOrbit {
    pub a_km: f64,
    pub e: f64,
    pub omega_deg: f64,
    #[serde(default)]
    pub theta_arr_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Adjustable {
    Value(f64),
    Marker(SweepMarker),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMarker {
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeEndOption {
    Departure,
    Arrival,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayOptions {
    pub alpha: f64,
    /// Defaults to ten turns.
    pub span_rad: Option<f64>,
    pub step_rad: Option<f64>,
}

/// Method-specific knobs; every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub grid_omega2_deg: Option<f64>,
    pub warm_start: Option<bool>,
    pub tof_points: Option<usize>,
    /// Time-of-flight grid bounds as multiples of the initial period.
    pub tof_min_periods: Option<f64>,
    pub tof_max_periods: Option<f64>,
    pub theta_points: Option<usize>,
    /// Coarse grids for the free-departure Lambert search.
    pub free_departure_theta_points: Option<usize>,
    pub free_departure_tof_points: Option<usize>,
    /// Also run the free-departure reading of Lambert scenario (b).
    pub lambert_free_departure: Option<bool>,
    pub r_mid_km: Option<f64>,
    /// Two-impulse shape-based transfer with a free terminal junction.
    pub free_end: Option<FreeEndOption>,
    pub decay: Option<DecayOptions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub mu_km3s2: Option<f64>,
    pub initial: InitialOrbit,
    #[serde(rename = "final")]
    pub target: Option<FinalOrbit>,
    pub impulses: Option<usize>,
    #[serde(default)]
    pub adjustables: BTreeMap<String, Adjustable>,
    pub method: Method,
    #[serde(default)]
    pub options: Options,
}

/// Command-line overrides of file options.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub grid_omega2_deg: Option<f64>,
    pub tof_points: Option<usize>,
    pub theta_points: Option<usize>,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.grid_omega2_deg.is_some() {
            self.options.grid_omega2_deg = o.grid_omega2_deg;
        }
        if o.tof_points.is_some() {
            self.options.tof_points = o.tof_points;
        }
        if o.theta_points.is_some() {
            self.options.theta_points = o.theta_points;
        }
    }

    pub fn grav(&self) -> Result<Grav, CliError> {
        match self.mu_km3s2 {
            Some(mu) => Grav::new(mu).map_err(|e| parse_err(e.to_string())),
            None => Ok(Grav::earth()),
        }
    }

    pub fn initial_orbit(&self) -> Result<Orbit, CliError> {
        let i = &self.initial;
        Orbit::new(i.a_km, i.e, i.omega_deg.to_radians()).map_err(|e| parse_err(format!("initial: {e}")))
    }

    pub fn final_orbit(&self) -> Result<Orbit, CliError> {
        let f = self
            .target
            .as_ref()
            .ok_or_else(|| parse_err("this method needs a `final` orbit"))?;
        Orbit::new(f.a_km, f.e, f.omega_deg.to_radians()).map_err(|e| parse_err(format!("final: {e}")))
    }

    pub fn theta_dep(&self) -> f64 {
        self.initial.theta_dep_deg.to_radians()
    }

    pub fn theta_arr(&self) -> f64 {
        self.target.map_or(0.0, |f| f.theta_arr_deg.to_radians())
    }

    /// Parsed adjustables, angles converted to radians. Swept entries are
    /// returned separately and get a placeholder value of zero.
    pub fn adjustables(&self) -> Result<(AdjustableSet<f64>, Vec<ParamId>), CliError> {
        let mut set = AdjustableSet::empty();
        let mut swept = Vec::new();
        for (key, value) in &self.adjustables {
            let id: ParamId = key.parse().map_err(|e: sbgm::Error| parse_err(e.to_string()))?;
            let v = match value {
                Adjustable::Value(v) if id.is_angle() => v.to_radians(),
                Adjustable::Value(v) => *v,
                Adjustable::Marker(SweepMarker::Sweep) => {
                    swept.push(id);
                    0.0
                }
            };
            set = set.with(id, v);
        }
        Ok((set, swept))
    }

    /// The shape-based scenario; swept adjustables hold zero.
    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let n = self.impulses.ok_or_else(|| parse_err("this method needs `impulses`"))?;
        let (adjustables, _) = self.adjustables()?;
        Scenario::new(
            self.initial_orbit()?,
            self.final_orbit()?,
            self.theta_dep(),
            self.theta_arr(),
            n,
            adjustables,
            self.grav()?,
        )
        .map_err(|e| parse_err(e.to_string()))
    }

    /// Same end orbits and angles as a three-impulse ω₂ family, whatever
    /// the file's own impulse count; used by `compare`.
    pub fn omega2_family(&self) -> Result<Scenario, CliError> {
        Scenario::new(
            self.initial_orbit()?,
            self.final_orbit()?,
            self.theta_dep(),
            self.theta_arr(),
            3,
            AdjustableSet::single(ParamId::Omega(2), 0.0),
            self.grav()?,
        )
        .map_err(|e| parse_err(e.to_string()))
    }

    pub fn tof_grid(&self) -> Result<Grid<f64>, CliError> {
        let initial = self.initial_orbit()?;
        let grav = self.grav()?;
        let base = Grid::default_tof(&initial, &grav);
        let period = initial.period(&grav);
        let o = &self.options;
        let start = o.tof_min_periods.map_or(base.start, |k| k * period);
        let end = o.tof_max_periods.map_or(base.end, |k| k * period);
        Grid::new(start, end, o.tof_points.unwrap_or(base.points), true).map_err(|e| parse_err(e.to_string()))
    }

    pub fn theta_grid(&self) -> Result<Grid<f64>, CliError> {
        positive(self.options.theta_points.unwrap_or(720), "theta_points").map(Grid::full_turn)
    }

    pub fn free_departure_grids(&self) -> Result<(Grid<f64>, Grid<f64>), CliError> {
        let o = &self.options;
        let tof = Grid {
            points: positive(o.free_departure_tof_points.unwrap_or(100), "free_departure_tof_points")?,
            ..self.tof_grid()?
        };
        let theta = Grid::full_turn(positive(
            o.free_departure_theta_points.unwrap_or(72),
            "free_departure_theta_points",
        )?);
        Ok((tof, theta))
    }

    pub fn sweep_options(&self) -> Result<sbgm::optimize::SweepOptions<f64>, CliError> {
        let mut opts = match self.options.grid_omega2_deg {
            Some(step) => sbgm::optimize::SweepOptions::with_step_deg(step).map_err(|e| parse_err(e.to_string()))?,
            None => sbgm::optimize::SweepOptions::default(),
        };
        if let Some(warm) = self.options.warm_start {
            opts.warm_start = warm;
        }
        Ok(opts)
    }

    pub fn decay(&self) -> Result<(DecayProfile<f64>, f64, f64), CliError> {
        let d = self
            .options
            .decay
            .ok_or_else(|| parse_err("variational runs need `options.decay`"))?;
        let profile = DecayProfile::new(self.initial.e, d.alpha).map_err(|e| parse_err(e.to_string()))?;
        Ok((
            profile,
            d.span_rad.unwrap_or(20.0 * std::f64::consts::PI),
            d.step_rad.unwrap_or(1e-3),
        ))
    }
}

fn positive(n: usize, name: &str) -> Result<usize, CliError> {
    if n == 0 {
        Err(parse_err(format!("{name} must be positive")))
    } else {
        Ok(n)
    }
}
