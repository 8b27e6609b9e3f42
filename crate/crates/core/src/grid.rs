use crate::error::{Error, Result};
use crate::orbit::{GravModel, PlanarOrbit};
use crate::scalar::Scalar;

/// Evenly spaced samples of `[start, end]` (or `[start, end)` without the
/// endpoint).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub start: T,
    pub end: T,
    pub points: usize,
    pub endpoint: bool,
}

impl<T: Scalar> Grid<T> {
    pub fn new(start: T, end: T, points: usize, endpoint: bool) -> Result<Self> {
        if points == 0 {
            return Err(Error::InvalidGrid("grid needs at least one point".into()));
        }
        if !start.is_finite() || !end.is_finite() || (points > 1 && !(end > start)) {
            return Err(Error::InvalidGrid("grid bounds must be finite and increasing".into()));
        }
        Ok(Self {
            start,
            end,
            points,
            endpoint,
        })
    }

    pub fn single(value: T) -> Self {
        Self {
            start: value,
            end: value,
            points: 1,
            endpoint: true,
        }
    }

    /// Transfer times over `[0.05, 3]` initial-orbit periods, 500 samples.
    pub fn default_tof(initial: &PlanarOrbit<T>, grav: &GravModel<T>) -> Self {
        let period = initial.period(grav);
        Self {
            start: T::lit(0.05) * period,
            end: T::lit(3.0) * period,
            points: 500,
            endpoint: true,
        }
    }

    /// Polar angles over a full turn, `[0, 2π)`.
    pub fn full_turn(points: usize) -> Self {
        Self {
            start: T::zero(),
            end: T::TAU(),
            points: points.max(1),
            endpoint: false,
        }
    }

    pub fn value(&self, k: usize) -> T {
        if self.points == 1 {
            return self.start;
        }
        let intervals = if self.endpoint { self.points - 1 } else { self.points };
        self.start + (self.end - self.start) * T::from_usize(k).unwrap() / T::from_usize(intervals).unwrap()
    }

    pub fn values(&self) -> Vec<T> {
        (0..self.points).map(|k| self.value(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_values() {
        let g = Grid::new(0.0, 1.0, 5, true).unwrap();
        assert_eq!(g.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let t = Grid::<f64>::full_turn(4);
        assert!((t.value(3) - 1.5 * PI).abs() < 1e-15);
        assert!(Grid::new(1.0, 0.0, 3, true).is_err());
        assert!(Grid::<f64>::new(0.0, 1.0, 0, true).is_err());
        assert_eq!(Grid::single(2.0).values(), vec![2.0]);
    }
}
