//! Floating point abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the geometry and solvers are written against (`f32` or `f64`).
///
/// The associated constants carry the precision-dependent thresholds used by
/// the solvers, so the same code path can run at either width.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Scaled residual below which a junction system counts as solved.
    const NEWTON_TOL: f64;
    /// Relative step for central-difference Jacobians.
    const FD_STEP: f64;
    /// Eccentricity below which a conic is treated as a circle.
    const CIRCULAR_E: f64;
    /// Width at which angle bisections stop (rad).
    const ANGLE_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const NEWTON_TOL: f64 = 1e-10;
    const FD_STEP: f64 = 1e-7;
    const CIRCULAR_E: f64 = 1e-12;
    const ANGLE_TOL: f64 = 1e-12;
}

impl Scalar for f32 {
    const NEWTON_TOL: f64 = 2e-4;
    const FD_STEP: f64 = 5e-3;
    const CIRCULAR_E: f64 = 1e-6;
    const ANGLE_TOL: f64 = 1e-6;
}

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle<T: Scalar>(angle: T) -> T {
    let tau = T::TAU();
    let mut r = angle % tau;
    if r < T::zero() {
        r = r + tau;
    }
    if r >= tau {
        r = r - tau;
    }
    r
}

/// Signed difference `b - a` wrapped into `(-π, π]`.
pub fn angle_difference<T: Scalar>(a: T, b: T) -> T {
    let d = normalize_angle(b - a);
    if d > T::PI() {
        d - T::TAU()
    } else {
        d
    }
}

/// Prograde sweep from `from` to `to`, in `[0, 2π)`.
pub fn prograde_sweep<T: Scalar>(from: T, to: T) -> T {
    normalize_angle(to - from)
}

pub fn deg<T: Scalar>(radians: T) -> T {
    radians.to_degrees()
}

pub fn rad<T: Scalar>(degrees: T) -> T {
    degrees.to_radians()
}
