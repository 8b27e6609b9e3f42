//! Two-body planar conic geometry.
//!
//! Orbits are described in polar form about the attracting focus,
//!
//! ```text
//! r(θ) = a (1 - e²) / (1 + e cos(θ + ω))
//! ```
//!
//! where θ is the polar angle measured from the inertial x-axis and
//! `θ + ω` is the true anomaly. Note the sign: perigee sits at `θ = -ω`.
//! Motion is always prograde (counterclockwise).

use crate::error::{Error, Result};
use crate::scalar::{normalize_angle, prograde_sweep, Scalar};
use crate::vec2::Vec2;

/// Earth gravitational parameter (km³/s²).
pub const EARTH_MU: f64 = 398_600.441_8;
/// Earth equatorial radius (km).
pub const EARTH_RADIUS_KM: f64 = 6378.137;

const INTERSECTION_SCAN_POINTS: usize = 3600;

/// Central-body gravitational parameter μ (km³/s²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravModel<T> {
    mu: T,
}

impl<T: Scalar> GravModel<T> {
    pub fn new(mu: T) -> Result<Self> {
        if !(mu > T::zero()) || !mu.is_finite() {
            return Err(Error::InvalidGravity(mu.to_f64_lossy()));
        }
        Ok(Self { mu })
    }

    pub fn earth() -> Self {
        Self { mu: T::lit(EARTH_MU) }
    }

    pub fn mu(&self) -> T {
        self.mu
    }
}

impl<T: Scalar> Default for GravModel<T> {
    fn default() -> Self {
        Self::earth()
    }
}

/// A coplanar ellipse with the attracting body at one focus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarOrbit<T> {
    a: T,
    e: T,
    omega: T,
}

impl<T: Scalar> PlanarOrbit<T> {
    /// Builds an orbit, wrapping `omega` into `[0, 2π)`.
    pub fn new(a: T, e: T, omega: T) -> Result<Self> {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(Error::InvalidOrbit(format!(
                "semi-major axis must be positive, got {a}"
            )));
        }
        if !(e >= T::zero()) || !(e < T::one()) {
            return Err(Error::InvalidOrbit(format!("eccentricity must lie in [0, 1), got {e}")));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidOrbit("argument of perigee is not finite".into()));
        }
        Ok(Self {
            a,
            e,
            omega: normalize_angle(omega),
        })
    }

    pub fn circular(radius: T) -> Result<Self> {
        Self::new(radius, T::zero(), T::zero())
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn e(&self) -> T {
        self.e
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn is_circular(&self) -> bool {
        self.e < T::lit(T::CIRCULAR_E)
    }

    pub fn semi_latus_rectum(&self) -> T {
        self.a * (T::one() - self.e * self.e)
    }

    pub fn periapsis(&self) -> T {
        self.a * (T::one() - self.e)
    }

    pub fn apoapsis(&self) -> T {
        self.a * (T::one() + self.e)
    }

    pub fn period(&self, grav: &GravModel<T>) -> T {
        T::TAU() * (self.a.powi(3) / grav.mu).sqrt()
    }

    pub fn mean_motion(&self, grav: &GravModel<T>) -> T {
        (grav.mu / self.a.powi(3)).sqrt()
    }

    /// True anomaly at polar angle `theta`.
    pub fn true_anomaly(&self, theta: T) -> T {
        normalize_angle(theta + self.omega)
    }

    /// Polar angle of the perigee.
    pub fn perigee_angle(&self) -> T {
        normalize_angle(-self.omega)
    }

    pub fn radius_at(&self, theta: T) -> T {
        self.semi_latus_rectum() / (T::one() + self.e * (theta + self.omega).cos())
    }

    /// `dr/dθ` of the polar curve.
    pub fn slope_at(&self, theta: T) -> T {
        let u = theta + self.omega;
        self.e * u.sin() * self.radius_at(theta) / (T::one() + self.e * u.cos())
    }

    /// Vis-viva speed at radius `r`, which must lie between the apsides.
    pub fn speed_at(&self, r: T, grav: &GravModel<T>) -> Result<T> {
        let slack = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        let (lo, hi) = (self.periapsis(), self.apoapsis());
        if !(r >= lo * (T::one() - slack)) || !(r <= hi * (T::one() + slack)) {
            return Err(Error::RadiusOutsideOrbit {
                radius: r.to_f64_lossy(),
                min: lo.to_f64_lossy(),
                max: hi.to_f64_lossy(),
            });
        }
        Ok(vis_viva(self.a, r, grav))
    }

    /// Position and velocity at polar angle `theta`.
    pub fn state_at(&self, theta: T, grav: &GravModel<T>) -> PlanarState<T> {
        let p = self.semi_latus_rectum();
        let (s, c) = (theta + self.omega).sin_cos();
        let r = p / (T::one() + self.e * c);
        let k = (grav.mu / p).sqrt();
        let radial = k * self.e * s;
        let transverse = k * (T::one() + self.e * c);
        let (st, ct) = theta.sin_cos();
        PlanarState {
            position: Vec2::new(r * ct, r * st),
            velocity: Vec2::new(radial * ct - transverse * st, radial * st + transverse * ct),
        }
    }

    /// Coast time from `theta_from` to `theta_to`, moving prograde, for a
    /// single pass: the result is in `[0, period)`.
    pub fn time_of_flight(&self, theta_from: T, theta_to: T, grav: &GravModel<T>) -> T {
        let sweep = prograde_sweep(theta_from, theta_to);
        let nu0 = self.true_anomaly(theta_from);
        let m0 = mean_anomaly_unwrapped(nu0, self.e);
        let m1 = mean_anomaly_unwrapped(nu0 + sweep, self.e);
        ((m1 - m0) / self.mean_motion(grav)).max(T::zero())
    }

    /// True when both orbits describe the same conic within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let same_shape = (self.a - other.a).abs() <= tol * self.a.max(other.a) && (self.e - other.e).abs() <= tol;
        if !same_shape {
            return false;
        }
        if self.is_circular() && other.is_circular() {
            return true;
        }
        crate::scalar::angle_difference(self.omega, other.omega).abs() <= tol
    }
}

/// √(μ (2/r − 1/a)), clamped at zero.
pub fn vis_viva<T: Scalar>(a: T, r: T, grav: &GravModel<T>) -> T {
    (grav.mu * (T::lit(2.0) / r - T::one() / a)).max(T::zero()).sqrt()
}

/// Mean anomaly for a true anomaly that may exceed 2π; monotone in `nu`.
fn mean_anomaly_unwrapped<T: Scalar>(nu: T, e: T) -> T {
    let tau = T::TAU();
    let turns = (nu / tau).floor();
    let base = nu - turns * tau;
    let half = base / T::lit(2.0);
    let mut ecc = T::lit(2.0) * ((T::one() - e).sqrt() * half.sin()).atan2((T::one() + e).sqrt() * half.cos());
    if ecc < T::zero() {
        ecc = ecc + tau;
    }
    ecc - e * ecc.sin() + turns * tau
}

/// Inertial position and velocity in the orbit plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarState<T> {
    pub position: Vec2<T>,
    pub velocity: Vec2<T>,
}

impl<T: Scalar> PlanarState<T> {
    pub fn new(position: Vec2<T>, velocity: Vec2<T>) -> Result<Self> {
        let state = Self { position, velocity };
        state.validate()?;
        Ok(state)
    }

    fn validate(&self) -> Result<()> {
        if !self.position.is_finite() || !self.velocity.is_finite() {
            return Err(Error::InvalidState("non-finite component".into()));
        }
        if !(self.position.norm() > T::zero()) {
            return Err(Error::InvalidState("position is zero".into()));
        }
        if !(self.velocity.norm() > T::zero()) {
            return Err(Error::InvalidState("velocity is zero".into()));
        }
        Ok(())
    }

    pub fn angular_momentum(&self) -> T {
        self.position.cross(self.velocity)
    }
}

/// A point on an orbit, located by its polar angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPosition<T> {
    pub orbit: PlanarOrbit<T>,
    pub theta: T,
}

impl<T: Scalar> OrbitPosition<T> {
    pub fn new(orbit: PlanarOrbit<T>, theta: T) -> Self {
        Self {
            orbit,
            theta: normalize_angle(theta),
        }
    }

    pub fn radius(&self) -> T {
        self.orbit.radius_at(self.theta)
    }
}

/// Recovers `(a, e, ω, θ)` from a prograde state vector.
///
/// The arccos branch for the true anomaly is picked by the sign of the
/// radial velocity, which is equivalent to taking
/// `atan2(e sin ν, e cos ν)` with `e cos ν = p/r − 1` and
/// `e sin ν = v_r √(p/μ)`.
pub fn elements_from_state<T: Scalar>(state: &PlanarState<T>, grav: &GravModel<T>) -> Result<OrbitPosition<T>> {
    state.validate()?;
    let r = state.position.norm();
    let v = state.velocity.norm();
    let h = state.angular_momentum();
    // Relative to the circular-orbit scale r·v.
    if h.abs() <= T::lit(1e-12).max(T::epsilon() * T::lit(64.0)) * r * v {
        return Err(Error::DegenerateOrbit);
    }
    if h < T::zero() {
        return Err(Error::InvalidState("retrograde motion".into()));
    }
    let p = h * h / grav.mu;
    let radial_speed = state.position.dot(state.velocity) / r;
    let e_cos = p / r - T::one();
    let e_sin = radial_speed * (p / grav.mu).sqrt();
    let e = e_cos.hypot(e_sin);
    if e >= T::one() {
        return Err(Error::HyperbolicOrParabolic {
            eccentricity: e.to_f64_lossy(),
        });
    }
    let theta = normalize_angle(state.position.angle());
    let omega = if e < T::lit(T::CIRCULAR_E) {
        T::zero()
    } else {
        normalize_angle(e_sin.atan2(e_cos) - theta)
    };
    let a = p / (T::one() - e * e);
    Ok(OrbitPosition::new(PlanarOrbit::new(a, e, omega)?, theta))
}

pub fn state_from_elements<T: Scalar>(pos: &OrbitPosition<T>, grav: &GravModel<T>) -> PlanarState<T> {
    pos.orbit.state_at(pos.theta, grav)
}

/// All polar angles in `[0, 2π)` where the two conics share a radius.
///
/// A 3600-point scan of `r_a − r_b` brackets sign changes, which are
/// bisected to `ANGLE_TOL`. Touching points without a sign change are
/// picked up as near-zero local minima of `|r_a − r_b|`.
pub fn conic_intersections<T: Scalar>(orbit_a: &PlanarOrbit<T>, orbit_b: &PlanarOrbit<T>) -> Result<Vec<T>> {
    if orbit_a.approx_eq(orbit_b, T::lit(1e-12).max(T::epsilon() * T::lit(16.0))) {
        return Err(Error::IdenticalOrbits);
    }
    let diff = |theta: T| orbit_a.radius_at(theta) - orbit_b.radius_at(theta);
    let accept = T::lit(1e-9).max(T::epsilon() * T::lit(64.0));
    let n = INTERSECTION_SCAN_POINTS;
    let step = T::TAU() / T::from_usize(n).unwrap();
    let angles: Vec<T> = (0..n).map(|k| T::from_usize(k).unwrap() * step).collect();
    let values: Vec<T> = angles.iter().map(|&t| diff(t)).collect();

    let mut roots = Vec::new();
    for k in 0..n {
        let (d0, d1) = (values[k], values[(k + 1) % n]);
        if d0 == T::zero() {
            roots.push(angles[k]);
        } else if d0 * d1 < T::zero() {
            roots.push(bisect_root(&diff, angles[k], angles[k] + step));
        }
    }
    for k in 0..n {
        let prev = values[(k + n - 1) % n].abs();
        let here = values[k].abs();
        let next = values[(k + 1) % n].abs();
        if here <= prev && here <= next && here > T::zero() {
            let lo = angles[k] - step;
            let theta = golden_min(|t| diff(t).abs(), lo, lo + step + step, T::lit(T::ANGLE_TOL));
            let r = orbit_a.radius_at(theta);
            if diff(theta).abs() < accept * r {
                roots.push(theta);
            }
        }
    }

    let mut roots: Vec<T> = roots
        .into_iter()
        .map(normalize_angle)
        .filter(|&t| diff(t).abs() < accept * orbit_a.radius_at(t))
        .collect();
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let merge = T::lit(1e-7).max(T::epsilon().sqrt() * T::lit(4.0));
    let mut unique: Vec<T> = Vec::with_capacity(roots.len());
    for t in roots {
        if unique.last().is_none_or(|&u| (t - u).abs() > merge) {
            unique.push(t);
        }
    }
    if unique.len() > 1 {
        let first = unique[0];
        let last = *unique.last().unwrap();
        if T::TAU() - last + first <= merge {
            unique.pop();
        }
    }
    Ok(unique)
}

fn bisect_root<T: Scalar>(f: &impl Fn(T) -> T, mut lo: T, mut hi: T) -> T {
    let mut f_lo = f(lo);
    let tol = T::lit(T::ANGLE_TOL);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return mid;
        }
        if f_lo * f_mid < T::zero() {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    (lo + hi) / T::lit(2.0)
}

/// Golden-section minimisation of `f` on `[lo, hi]`, down to width `tol`.
pub(crate) fn golden_min<T: Scalar>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let ratio = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..300 {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / T::lit(2.0)
}
