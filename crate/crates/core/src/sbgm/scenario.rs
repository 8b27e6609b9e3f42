use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::orbit::{GravModel, PlanarOrbit};
use crate::scalar::Scalar;

/// Names one interior parameter of an N-impulse chain.
///
/// Orbits are numbered `1..=N+1`; `Theta(i)` is the junction angle between
/// orbits `i` and `i + 1` (written `theta{i}{i+1}`, e.g. `theta23`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamId {
    A(usize),
    E(usize),
    Omega(usize),
    Theta(usize),
}

impl ParamId {
    /// Whether the parameter is an interior unknown of an `n`-impulse chain.
    pub fn is_interior(self, n: usize) -> bool {
        match self {
            ParamId::A(i) | ParamId::E(i) | ParamId::Omega(i) => (2..=n).contains(&i),
            ParamId::Theta(i) => i >= 2 && i < n,
        }
    }

    pub fn is_angle(self) -> bool {
        matches!(self, ParamId::Omega(_) | ParamId::Theta(_))
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ParamId::A(i) => write!(f, "a{i}"),
            ParamId::E(i) => write!(f, "e{i}"),
            ParamId::Omega(i) => write!(f, "omega{i}"),
            ParamId::Theta(i) => write!(f, "theta{i}{}", i + 1),
        }
    }
}

impl FromStr for ParamId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidScenario(format!("unknown parameter id `{s}`"));
        let index = |digits: &str| -> Result<usize> {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            digits.parse().map_err(|_| bad())
        };
        if let Some(rest) = s.strip_prefix("theta") {
            // "theta23", "theta910", "theta1011": split where the tail is head + 1.
            for cut in 1..rest.len() {
                let (head, tail) = rest.split_at(cut);
                if let (Ok(i), Ok(j)) = (index(head), index(tail)) {
                    if j == i + 1 && !tail.starts_with('0') {
                        return Ok(ParamId::Theta(i));
                    }
                }
            }
            return Err(bad());
        }
        if let Some(rest) = s.strip_prefix("omega") {
            return index(rest).map(ParamId::Omega);
        }
        if let Some(rest) = s.strip_prefix('a') {
            return index(rest).map(ParamId::A);
        }
        if let Some(rest) = s.strip_prefix('e') {
            return index(rest).map(ParamId::E);
        }
        Err(bad())
    }
}

/// Interior parameters pinned to user-chosen values (radians for angles).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdjustableSet<T> {
    assignments: Vec<(ParamId, T)>,
}

impl<T: Scalar> AdjustableSet<T> {
    pub fn new(assignments: Vec<(ParamId, T)>) -> Result<Self> {
        for (k, (id, value)) in assignments.iter().enumerate() {
            if assignments[..k].iter().any(|(other, _)| other == id) {
                return Err(Error::InvalidScenario(format!("parameter {id} assigned twice")));
            }
            if !value.is_finite() {
                return Err(Error::InvalidScenario(format!("parameter {id} is not finite")));
            }
        }
        Ok(Self { assignments })
    }

    pub fn empty() -> Self {
        Self {
            assignments: Vec::new(),
        }
    }

    pub fn single(id: ParamId, value: T) -> Self {
        Self {
            assignments: vec![(id, value)],
        }
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn get(&self, id: ParamId) -> Option<T> {
        self.assignments.iter().find(|(k, _)| *k == id).map(|&(_, v)| v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(ParamId, T)> {
        self.assignments.iter()
    }

    /// Copy with `id` set to `value` (added if absent).
    pub fn with(&self, id: ParamId, value: T) -> Self {
        let mut assignments = self.assignments.clone();
        match assignments.iter_mut().find(|(k, _)| *k == id) {
            Some(slot) => slot.1 = value,
            None => assignments.push((id, value)),
        }
        Self { assignments }
    }
}

/// Problem statement for an N-impulse smooth transfer.
#[derive(Debug, Clone, PartialEq)]
pub struct ManeuverScenario<T> {
    pub initial: PlanarOrbit<T>,
    pub target: PlanarOrbit<T>,
    /// Departure junction angle θ₁₂ (rad).
    pub theta_first: T,
    /// Arrival junction angle θ_{N(N+1)} (rad).
    pub theta_last: T,
    pub n_impulses: usize,
    pub adjustables: AdjustableSet<T>,
    pub grav: GravModel<T>,
}

impl<T: Scalar> ManeuverScenario<T> {
    pub fn new(
        initial: PlanarOrbit<T>,
        target: PlanarOrbit<T>,
        theta_first: T,
        theta_last: T,
        n_impulses: usize,
        adjustables: AdjustableSet<T>,
        grav: GravModel<T>,
    ) -> Result<Self> {
        let scenario = Self {
            initial,
            target,
            theta_first,
            theta_last,
            n_impulses,
            adjustables,
            grav,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_impulses;
        if n < 2 {
            return Err(Error::InvalidScenario(format!("need at least 2 impulses, got {n}")));
        }
        if !self.theta_first.is_finite() || !self.theta_last.is_finite() {
            return Err(Error::InvalidScenario("junction angles must be finite".into()));
        }
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        let same_point = crate::scalar::angle_difference(self.theta_first, self.theta_last).abs() <= tol;
        if same_point && self.initial.approx_eq(&self.target, tol) {
            return Err(Error::IdenticalOrbits);
        }
        for (id, _) in self.adjustables.iter() {
            if !id.is_interior(n) {
                return Err(Error::InvalidScenario(format!(
                    "{id} is not an interior parameter of a {n}-impulse chain"
                )));
            }
        }
        Ok(())
    }

    /// Same scenario with `ω₂` pinned to `omega2` (the case-study sweep).
    pub fn with_omega2(&self, omega2: T) -> Self {
        Self {
            adjustables: self.adjustables.with(ParamId::Omega(2), omega2),
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ids() {
        assert_eq!("a2".parse::<ParamId>().unwrap(), ParamId::A(2));
        assert_eq!("e3".parse::<ParamId>().unwrap(), ParamId::E(3));
        assert_eq!("omega2".parse::<ParamId>().unwrap(), ParamId::Omega(2));
        assert_eq!("theta23".parse::<ParamId>().unwrap(), ParamId::Theta(2));
        assert_eq!("theta910".parse::<ParamId>().unwrap(), ParamId::Theta(9));
        assert_eq!("theta1011".parse::<ParamId>().unwrap(), ParamId::Theta(10));
        for bad in ["", "b2", "a", "omega", "theta24", "theta2", "e-1", "a2x"] {
            assert!(bad.parse::<ParamId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for id in [ParamId::A(2), ParamId::E(4), ParamId::Omega(3), ParamId::Theta(12)] {
            assert_eq!(id.to_string().parse::<ParamId>().unwrap(), id);
        }
    }

    #[test]
    fn interior_ranges() {
        assert!(ParamId::Omega(2).is_interior(3));
        assert!(ParamId::Theta(2).is_interior(3));
        assert!(!ParamId::Theta(3).is_interior(3));
        assert!(!ParamId::A(1).is_interior(3));
        assert!(!ParamId::A(4).is_interior(3));
    }

    #[test]
    fn rejects_duplicates_and_exterior_ids() {
        assert!(AdjustableSet::new(vec![(ParamId::A(2), 1.0), (ParamId::A(2), 2.0)]).is_err());
        let o = PlanarOrbit::new(7000.0, 0.1, 0.0).unwrap();
        let t = PlanarOrbit::new(9000.0, 0.0, 0.0).unwrap();
        let bad = AdjustableSet::single(ParamId::A(1), 7000.0);
        assert!(ManeuverScenario::new(o, t, 0.0, 1.0, 3, bad, GravModel::earth()).is_err());
        assert!(ManeuverScenario::new(o, o, 1.0, 1.0, 3, AdjustableSet::empty(), GravModel::earth()).is_err());
        assert!(ManeuverScenario::new(o, t, 0.0, 1.0, 1, AdjustableSet::empty(), GravModel::earth()).is_err());
    }
}
