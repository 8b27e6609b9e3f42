//! Continuous tangential thrust as the limit of infinitely many small
//! smooth impulses: the linearized junction conditions turn into rates
//! `da/dθ`, `dω/dθ` for a prescribed `de/dθ`.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::orbit::PlanarOrbit;
use crate::scalar::Scalar;
use crate::text::format_g;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementRates<T> {
    /// km per rad.
    pub d_a: T,
    pub d_e: T,
    /// rad per rad.
    pub d_omega: T,
}

/// Linearized slope-continuity residual, `e(e + cos u)·δω + sin u·δe`
/// with `u = θ + ω`.
pub fn slope_variation<T: Scalar>(orbit: &PlanarOrbit<T>, theta: T, d: &ElementRates<T>) -> T {
    let (e, u) = (orbit.e(), theta + orbit.omega());
    e * (e + u.cos()) * d.d_omega + u.sin() * d.d_e
}

/// Linearized radius-continuity residual,
/// `e sin u·δω − ((1+e²)cos u + 2e)/(1−e²)·δe + (1 + e cos u)/a·δa`.
pub fn radius_variation<T: Scalar>(orbit: &PlanarOrbit<T>, theta: T, d: &ElementRates<T>) -> T {
    let (a, e, u) = (orbit.a(), orbit.e(), theta + orbit.omega());
    let one = T::one();
    e * u.sin() * d.d_omega - ((one + e * e) * u.cos() + T::lit(2.0) * e) / (one - e * e) * d.d_e
        + (one + e * u.cos()) / a * d.d_a
}

/// Rates that keep the path smooth for a prescribed `de/dθ`.
pub fn rates_from_de<T: Scalar>(orbit: &PlanarOrbit<T>, theta: T, de_dtheta: T) -> Result<ElementRates<T>> {
    let (a, e, u) = (orbit.a(), orbit.e(), theta + orbit.omega());
    let one = T::one();
    if de_dtheta == T::zero() {
        return Ok(ElementRates {
            d_a: T::zero(),
            d_e: T::zero(),
            d_omega: T::zero(),
        });
    }
    let coefficient = e * (e + u.cos());
    if e <= T::epsilon() || coefficient.abs() <= T::lit(1e-12) {
        return Err(Error::CircularSingularity {
            coefficient: coefficient.to_f64_lossy(),
        });
    }
    let d_omega = -u.sin() * de_dtheta / coefficient;
    let d_a = a / (one + e * u.cos())
        * (((one + e * e) * u.cos() + T::lit(2.0) * e) / (one - e * e) * de_dtheta - e * u.sin() * d_omega);
    Ok(ElementRates {
        d_a,
        d_e: de_dtheta,
        d_omega,
    })
}

/// `e(θ) = e₀·exp(−αθ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayProfile<T> {
    pub e0: T,
    /// Per radian.
    pub alpha: T,
}

impl<T: Scalar> DecayProfile<T> {
    pub fn new(e0: T, alpha: T) -> Result<Self> {
        if !(e0 > T::zero() && e0 < T::one()) {
            return Err(Error::InvalidScenario(format!(
                "initial eccentricity must lie in (0, 1), got {e0}"
            )));
        }
        if !(alpha >= T::zero()) || !alpha.is_finite() {
            return Err(Error::InvalidScenario(format!(
                "decay rate must be non-negative, got {alpha}"
            )));
        }
        Ok(Self { e0, alpha })
    }

    pub fn e(&self, theta: T) -> T {
        self.e0 * (-self.alpha * theta).exp()
    }

    pub fn de(&self, theta: T) -> T {
        -self.alpha * self.e(theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySample<T> {
    pub theta: T,
    pub a: T,
    pub e: T,
    pub omega: T,
    pub r: T,
}

impl<T: Scalar> DecaySample<T> {
    pub fn orbit(&self) -> Result<PlanarOrbit<T>> {
        PlanarOrbit::new(self.a, self.e, self.omega)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayHistory<T> {
    pub samples: Vec<DecaySample<T>>,
    /// Set when `e` dropped below the circular guard before the span ended.
    pub stopped_early: bool,
    /// Steps across which `e + cos(θ + ω)` changed sign. The rate `dω/dθ`
    /// has a pole there, so the fixed-step integrator jumps across it
    /// rather than resolving it.
    pub pole_crossings: usize,
}

impl<T: Scalar> DecayHistory<T> {
    pub fn last(&self) -> &DecaySample<T> {
        self.samples.last().expect("history is never empty")
    }

    /// `theta_rad,a_km,e,omega_rad,r_km` rows, six significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "theta_rad,a_km,e,omega_rad,r_km")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{}",
                format_g(s.theta.to_f64_lossy()),
                format_g(s.a.to_f64_lossy()),
                format_g(s.e.to_f64_lossy()),
                format_g(s.omega.to_f64_lossy()),
                format_g(s.r.to_f64_lossy())
            )?;
        }
        Ok(())
    }
}

const CIRCULAR_GUARD: f64 = 1e-6;

/// Integrates `(a, ω)` with classical RK4 in θ while `e` follows the
/// profile exactly. θ starts at 0.
pub fn propagate_decay<T: Scalar>(
    initial: &PlanarOrbit<T>,
    profile: &DecayProfile<T>,
    theta_span: T,
    step: T,
) -> Result<DecayHistory<T>> {
    if (initial.e() - profile.e0).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(4.0)) {
        return Err(Error::InvalidScenario(
            "initial eccentricity must equal the profile's e0".into(),
        ));
    }
    if !(theta_span > T::zero()) || !(step > T::zero()) || !theta_span.is_finite() {
        return Err(Error::InvalidScenario("span and step must be positive".into()));
    }
    let steps = (theta_span / step).ceil().to_usize().unwrap_or(usize::MAX);
    let h = theta_span / T::from_usize(steps).unwrap();

    let rhs = |theta: T, a: T, omega: T| -> Result<(T, T)> {
        let orbit = PlanarOrbit::new(a, profile.e(theta), omega)?;
        let r = rates_from_de(&orbit, theta, profile.de(theta))?;
        Ok((r.d_a, r.d_omega))
    };
    let sample = |theta: T, a: T, omega: T| {
        let e = profile.e(theta);
        let u = theta + omega;
        DecaySample {
            theta,
            a,
            e,
            omega,
            r: a * (T::one() - e * e) / (T::one() + e * u.cos()),
        }
    };

    let (mut a, mut omega) = (initial.a(), initial.omega());
    let mut samples = vec![sample(T::zero(), a, omega)];
    let mut stopped_early = false;
    let mut pole_crossings = 0;
    let half = T::lit(0.5);
    for k in 0..steps {
        let theta = h * T::from_usize(k).unwrap();
        if profile.e(theta) < T::lit(CIRCULAR_GUARD) {
            stopped_early = true;
            break;
        }
        let k1 = rhs(theta, a, omega)?;
        let k2 = rhs(theta + half * h, a + half * h * k1.0, omega + half * h * k1.1)?;
        let k3 = rhs(theta + half * h, a + half * h * k2.0, omega + half * h * k2.1)?;
        let k4 = rhs(theta + h, a + h * k3.0, omega + h * k3.1)?;
        let six = T::lit(6.0);
        let g_before = profile.e(theta) + (theta + omega).cos();
        a = a + h / six * (k1.0 + T::lit(2.0) * (k2.0 + k3.0) + k4.0);
        omega = omega + h / six * (k1.1 + T::lit(2.0) * (k2.1 + k3.1) + k4.1);
        let next = theta + h;
        if (g_before < T::zero()) != (profile.e(next) + (next + omega).cos() < T::zero()) {
            pole_crossings += 1;
        }
        samples.push(sample(next, a, omega));
    }
    Ok(DecayHistory {
        samples,
        stopped_early,
        pole_crossings,
    })
}

/// Largest linearization error when consecutive history samples are
/// treated as two conics meeting at the earlier sample's θ: `(max |f₁|,
/// max |f₂|/a)` over the samples with `θ ≤ theta_max`.
pub fn junction_defect<T: Scalar>(history: &DecayHistory<T>, theta_max: T) -> Result<(T, T)> {
    let mut worst = (T::zero(), T::zero());
    for pair in history.samples.windows(2) {
        if pair[1].theta > theta_max {
            break;
        }
        let (i, j) = (pair[0].orbit()?, pair[1].orbit()?);
        let f1 = crate::sbgm::residual_f1(&i, &j, pair[0].theta).abs();
        let f2 = crate::sbgm::residual_f2(&i, &j, pair[0].theta).abs() / i.a();
        worst = (worst.0.max(f1), worst.1.max(f2));
    }
    Ok(worst)
}

/// Largest residual of the two linearized constraints when the realized
/// element differences between consecutive samples stand in for the
/// variations: `(max |slope|, max |radius|)` over `θ ≤ theta_max`.
pub fn variation_defect<T: Scalar>(history: &DecayHistory<T>, theta_max: T) -> Result<(T, T)> {
    let mut worst = (T::zero(), T::zero());
    for pair in history.samples.windows(2) {
        if pair[1].theta > theta_max {
            break;
        }
        let orbit = pair[0].orbit()?;
        let d = ElementRates {
            d_a: pair[1].a - pair[0].a,
            d_e: pair[1].e - pair[0].e,
            d_omega: pair[1].omega - pair[0].omega,
        };
        let slope = slope_variation(&orbit, pair[0].theta, &d).abs();
        let radius = radius_variation(&orbit, pair[0].theta, &d).abs();
        worst = (worst.0.max(slope), worst.1.max(radius));
    }
    Ok(worst)
}
