use crate::scalar::Scalar;

/// One impulse of a maneuver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Impulse<T> {
    /// Polar angle of the burn (rad).
    pub theta: T,
    pub radius: T,
    /// Signed speed change for tangential burns; vector magnitude otherwise.
    pub delta_v: T,
    pub tangential: bool,
}

/// Impulses of a maneuver in order, with the coasts between them.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseSchedule<T> {
    pub impulses: Vec<Impulse<T>>,
    pub arc_times: Vec<T>,
    pub total_time: T,
}

impl<T: Scalar> ImpulseSchedule<T> {
    pub fn new(impulses: Vec<Impulse<T>>, arc_times: Vec<T>) -> Self {
        let total_time = arc_times.iter().copied().sum();
        Self {
            impulses,
            arc_times,
            total_time,
        }
    }

    pub fn magnitudes(&self) -> Vec<T> {
        self.impulses.iter().map(|i| i.delta_v.abs()).collect()
    }

    /// Control effort: sum of impulse magnitudes.
    pub fn cost_ce(&self) -> T {
        self.impulses.iter().map(|i| i.delta_v.abs()).sum()
    }

    /// Largest single impulse magnitude.
    pub fn cost_mi(&self) -> T {
        self.impulses.iter().fold(T::zero(), |m, i| m.max(i.delta_v.abs()))
    }

    pub fn is_smooth(&self) -> bool {
        self.impulses.iter().all(|i| i.tangential)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_schedule_costs_nothing() {
        let s = ImpulseSchedule::<f64>::new(vec![], vec![]);
        assert_eq!(s.cost_ce(), 0.0);
        assert_eq!(s.cost_mi(), 0.0);
        assert_eq!(s.total_time, 0.0);
    }

    #[test]
    fn costs_use_magnitudes() {
        let imp = |dv| Impulse {
            theta: 0.0,
            radius: 7000.0,
            delta_v: dv,
            tangential: true,
        };
        let s = ImpulseSchedule::new(vec![imp(0.5), imp(-1.25)], vec![100.0, 50.0]);
        assert_eq!(s.cost_ce(), 1.75);
        assert_eq!(s.cost_mi(), 1.25);
        assert_eq!(s.total_time, 150.0);
    }
}
