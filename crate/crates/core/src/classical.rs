//! Textbook baselines: Hohmann, bi-elliptic, and a single burn where the
//! initial and final orbits cross.

use crate::error::{Error, Result};
use crate::orbit::{conic_intersections, GravModel, PlanarOrbit};
use crate::sbgm::{Impulse, ImpulseSchedule, TransferChain};
use crate::scalar::Scalar;

// Half ellipse with apsides `r_from` at θ = 0 and `r_to` at θ = π.
fn apse_arc<T: Scalar>(r_from: T, r_to: T) -> Result<PlanarOrbit<T>> {
    let a = (r_from + r_to) / T::lit(2.0);
    let e = (r_to - r_from).abs() / (r_to + r_from);
    let omega = if r_to >= r_from { T::zero() } else { T::PI() };
    PlanarOrbit::new(a, e, omega)
}

/// Circle `r1` → tangent half ellipse → circle `r2`, burning at θ = 0 and π.
pub fn hohmann<T: Scalar>(r1: T, r2: T, grav: &GravModel<T>) -> Result<TransferChain<T>> {
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
    if (r1 - r2).abs() <= tol * r1.max(r2) {
        return Err(Error::IdenticalOrbits);
    }
    let orbits = vec![
        PlanarOrbit::circular(r1)?,
        apse_arc(r1, r2)?,
        PlanarOrbit::circular(r2)?,
    ];
    TransferChain::new(orbits, vec![T::zero(), T::PI()], *grav)
}

/// Three-burn transfer through the apsis radius `r_mid`, with every
/// junction on the x-axis (θ = 0, π, 0).
pub fn bi_elliptic<T: Scalar>(r1: T, r_mid: T, r2: T, grav: &GravModel<T>) -> Result<TransferChain<T>> {
    if !(r_mid > T::zero()) || !r_mid.is_finite() {
        return Err(Error::InvalidIntermediate(r_mid.to_f64_lossy()));
    }
    let leg1 = apse_arc(r1, r_mid).map_err(|_| Error::InvalidIntermediate(r_mid.to_f64_lossy()))?;
    let leg2 = apse_arc(r2, r_mid).map_err(|_| Error::InvalidIntermediate(r_mid.to_f64_lossy()))?;
    let orbits = vec![PlanarOrbit::circular(r1)?, leg1, leg2, PlanarOrbit::circular(r2)?];
    TransferChain::new(orbits, vec![T::zero(), T::PI(), T::zero()], *grav)
}

/// One burn at each crossing of `initial` and `target`.
///
/// The burn is the full velocity-vector difference, so it is generally not
/// tangential. The coast time runs along `initial` from `theta_dep` to the
/// crossing.
pub fn single_impulse<T: Scalar>(
    initial: &PlanarOrbit<T>,
    target: &PlanarOrbit<T>,
    grav: &GravModel<T>,
    theta_dep: T,
) -> Result<Vec<ImpulseSchedule<T>>> {
    let crossings = conic_intersections(initial, target)?;
    if crossings.is_empty() {
        return Err(Error::NoIntersection);
    }
    Ok(crossings
        .into_iter()
        .map(|theta| {
            let before = initial.state_at(theta, grav);
            let after = target.state_at(theta, grav);
            let dv = after.velocity - before.velocity;
            let parallel = before.velocity.cross(after.velocity).abs()
                <= T::lit(1e-12) * before.velocity.norm() * after.velocity.norm();
            let delta_v = if parallel {
                after.velocity.norm() - before.velocity.norm()
            } else {
                dv.norm()
            };
            let impulse = Impulse {
                theta,
                radius: before.position.norm(),
                delta_v,
                tangential: parallel,
            };
            ImpulseSchedule::new(vec![impulse], vec![initial.time_of_flight(theta_dep, theta, grav)])
        })
        .collect())
}
