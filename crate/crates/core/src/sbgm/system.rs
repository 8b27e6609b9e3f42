//! Smooth-join conditions and the square systems built from them.

use crate::error::{Error, Result};
use crate::newton::{central_difference_jacobian, System};
use crate::orbit::{GravModel, PlanarOrbit};
use crate::scalar::{normalize_angle, prograde_sweep, Scalar};

use super::chain::TransferChain;
use super::scenario::{ManeuverScenario, ParamId};

/// Raw `(a, e, ω)` without validation; iterates may leave the elliptic range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Elements<T> {
    pub a: T,
    pub e: T,
    pub omega: T,
}

impl<T: Scalar> From<PlanarOrbit<T>> for Elements<T> {
    fn from(o: PlanarOrbit<T>) -> Self {
        Self {
            a: o.a(),
            e: o.e(),
            omega: o.omega(),
        }
    }
}

/// Partial derivatives of one residual with respect to the junction inputs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JunctionGradient<T> {
    pub a_i: T,
    pub e_i: T,
    pub omega_i: T,
    pub a_j: T,
    pub e_j: T,
    pub omega_j: T,
    pub theta: T,
}

/// Tangency (slope continuity) residual between consecutive arcs.
pub fn residual_f1<T: Scalar>(orbit_i: &PlanarOrbit<T>, orbit_j: &PlanarOrbit<T>, theta: T) -> T {
    f1((*orbit_i).into(), (*orbit_j).into(), theta)
}

/// Radius continuity residual between consecutive arcs (km).
pub fn residual_f2<T: Scalar>(orbit_i: &PlanarOrbit<T>, orbit_j: &PlanarOrbit<T>, theta: T) -> T {
    f2((*orbit_i).into(), (*orbit_j).into(), theta)
}

pub fn f1<T: Scalar>(i: Elements<T>, j: Elements<T>, theta: T) -> T {
    i.e * (theta + i.omega).sin() + i.e * j.e * (i.omega - j.omega).sin() - j.e * (theta + j.omega).sin()
}

pub fn f2<T: Scalar>(i: Elements<T>, j: Elements<T>, theta: T) -> T {
    let one = T::one();
    i.a * (one - i.e * i.e) * (one + j.e * (theta + j.omega).cos())
        - j.a * (one - j.e * j.e) * (one + i.e * (theta + i.omega).cos())
}

pub fn f1_gradient<T: Scalar>(i: Elements<T>, j: Elements<T>, theta: T) -> JunctionGradient<T> {
    let (si, ci) = (theta + i.omega).sin_cos();
    let (sj, cj) = (theta + j.omega).sin_cos();
    let (sd, cd) = (i.omega - j.omega).sin_cos();
    JunctionGradient {
        a_i: T::zero(),
        e_i: si + j.e * sd,
        omega_i: i.e * ci + i.e * j.e * cd,
        a_j: T::zero(),
        e_j: i.e * sd - sj,
        omega_j: -i.e * j.e * cd - j.e * cj,
        theta: i.e * ci - j.e * cj,
    }
}

pub fn f2_gradient<T: Scalar>(i: Elements<T>, j: Elements<T>, theta: T) -> JunctionGradient<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let (si, ci) = (theta + i.omega).sin_cos();
    let (sj, cj) = (theta + j.omega).sin_cos();
    let pi = i.a * (one - i.e * i.e);
    let pj = j.a * (one - j.e * j.e);
    JunctionGradient {
        a_i: (one - i.e * i.e) * (one + j.e * cj),
        e_i: -two * i.a * i.e * (one + j.e * cj) - pj * ci,
        omega_i: pj * i.e * si,
        a_j: -(one - j.e * j.e) * (one + i.e * ci),
        e_j: pi * cj + two * j.a * j.e * (one + i.e * ci),
        omega_j: -pi * j.e * sj,
        theta: -pi * j.e * sj + pj * i.e * si,
    }
}

/// How the Jacobian of a junction system is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JacobianMode {
    #[default]
    CentralDifference,
    Analytic,
}

/// Which terminal junction of a two-impulse chain is left free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeEnd {
    /// θ₁₂ is solved for; the arrival junction stays at `theta_last`.
    Departure,
    /// θ₂₃ is solved for; the departure junction stays at `theta_first`.
    Arrival,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot<T> {
    Fixed(T),
    Unknown(usize),
}

/// Fixed/unknown bookkeeping for every chain parameter.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Layout<T> {
    n: usize,
    // Indexed by orbit number − 1 (0..=n).
    a: Vec<Slot<T>>,
    e: Vec<Slot<T>>,
    omega: Vec<Slot<T>>,
    // Indexed by junction number − 1: theta[k] is θ_{(k+1)(k+2)}.
    theta: Vec<Slot<T>>,
    labels: Vec<ParamId>,
}

impl<T: Scalar> Layout<T> {
    fn build(scenario: &ManeuverScenario<T>, free_end: Option<FreeEnd>) -> Self {
        let n = scenario.n_impulses;
        let adj = &scenario.adjustables;
        let mut labels = Vec::new();
        let slot = |id: ParamId, labels: &mut Vec<ParamId>| match adj.get(id) {
            Some(v) => Slot::Fixed(v),
            None => {
                labels.push(id);
                Slot::Unknown(labels.len() - 1)
            }
        };
        let mut a = vec![Slot::Fixed(scenario.initial.a())];
        let mut e = vec![Slot::Fixed(scenario.initial.e())];
        let mut omega = vec![Slot::Fixed(scenario.initial.omega())];
        for i in 2..=n {
            a.push(slot(ParamId::A(i), &mut labels));
            e.push(slot(ParamId::E(i), &mut labels));
            omega.push(slot(ParamId::Omega(i), &mut labels));
        }
        a.push(Slot::Fixed(scenario.target.a()));
        e.push(Slot::Fixed(scenario.target.e()));
        omega.push(Slot::Fixed(scenario.target.omega()));

        let mut theta = Vec::with_capacity(n);
        if free_end == Some(FreeEnd::Departure) {
            labels.push(ParamId::Theta(1));
            theta.push(Slot::Unknown(labels.len() - 1));
        } else {
            theta.push(Slot::Fixed(scenario.theta_first));
        }
        for i in 2..n {
            theta.push(slot(ParamId::Theta(i), &mut labels));
        }
        if free_end == Some(FreeEnd::Arrival) {
            labels.push(ParamId::Theta(n));
            theta.push(Slot::Unknown(labels.len() - 1));
        } else {
            theta.push(Slot::Fixed(scenario.theta_last));
        }
        Self {
            n,
            a,
            e,
            omega,
            theta,
            labels,
        }
    }

    fn value(slot: Slot<T>, x: &[T]) -> T {
        match slot {
            Slot::Fixed(v) => v,
            Slot::Unknown(k) => x[k],
        }
    }

    fn elements(&self, orbit: usize, x: &[T]) -> Elements<T> {
        Elements {
            a: Self::value(self.a[orbit], x),
            e: Self::value(self.e[orbit], x),
            omega: Self::value(self.omega[orbit], x),
        }
    }

    fn theta(&self, junction: usize, x: &[T]) -> T {
        Self::value(self.theta[junction], x)
    }

    /// Semi-major axis of `orbit` interpolated between the nearest orbits
    /// on either side whose axis is known.
    fn interpolated_a(&self, orbit: usize) -> T {
        let known = |k: usize| match self.a[k] {
            Slot::Fixed(v) => Some(v),
            Slot::Unknown(_) => None,
        };
        // Orbit 0 and orbit n are always fixed.
        let (lo, a_lo) = (0..orbit).rev().find_map(|k| known(k).map(|v| (k, v))).unwrap();
        let (hi, a_hi) = (orbit + 1..=self.n).find_map(|k| known(k).map(|v| (k, v))).unwrap();
        let s = T::from_usize(orbit - lo).unwrap() / T::from_usize(hi - lo).unwrap();
        a_lo + (a_hi - a_lo) * s
    }

    fn unknown_count(&self) -> usize {
        self.labels.len()
    }

    fn equation_count(&self) -> usize {
        2 * self.n
    }
}

/// The full junction system: `f₁`, `f₂/a₁` stacked over every junction.
#[derive(Debug, Clone, PartialEq)]
pub struct FullSystem<T> {
    layout: Layout<T>,
    scale: T,
    grav: GravModel<T>,
    initial: PlanarOrbit<T>,
    target: PlanarOrbit<T>,
    scenario_theta: (T, T),
    pub jacobian_mode: JacobianMode,
}

impl<T: Scalar> FullSystem<T> {
    fn new(scenario: &ManeuverScenario<T>, free_end: Option<FreeEnd>) -> Result<Self> {
        let layout = Layout::build(scenario, free_end);
        if layout.unknown_count() != layout.equation_count() {
            return Err(Error::DimensionMismatch {
                unknowns: layout.unknown_count(),
                equations: layout.equation_count(),
            });
        }
        Ok(Self {
            layout,
            scale: scenario.initial.a(),
            grav: scenario.grav,
            initial: scenario.initial,
            target: scenario.target,
            scenario_theta: (scenario.theta_first, scenario.theta_last),
            jacobian_mode: JacobianMode::default(),
        })
    }

    pub fn labels(&self) -> &[ParamId] {
        &self.layout.labels
    }

    /// Starting point that avoids circular interior arcs.
    ///
    /// `a` is interpolated linearly between the nearest known axes (end
    /// orbits or fixed adjustables), `e` between the end orbits but
    /// clamped to `[0.05, 0.9]`, `ω` along the shorter arc, and interior
    /// junction angles are spread evenly along the prograde sweep from θ₁₂
    /// to θ_{N(N+1)}.
    pub fn default_guess(&self) -> Vec<T> {
        let n = self.layout.n;
        let nf = T::from_usize(n).unwrap();
        let (e1, en) = (self.initial.e(), self.target.e());
        let (w1, wn) = (self.initial.omega(), self.target.omega());
        let dw = crate::scalar::angle_difference(w1, wn);
        let (t1, tn) = self.scenario_theta;
        let mut sweep = prograde_sweep(t1, tn);
        if sweep <= T::lit(T::ANGLE_TOL) {
            sweep = T::TAU();
        }
        self.layout
            .labels
            .iter()
            .map(|id| match *id {
                ParamId::A(i) => self.layout.interpolated_a(i - 1),
                ParamId::E(i) => {
                    let s = T::from_usize(i - 1).unwrap() / nf;
                    (e1 + (en - e1) * s).max(T::lit(0.05)).min(T::lit(0.9))
                }
                ParamId::Omega(i) => {
                    let s = T::from_usize(i - 1).unwrap() / nf;
                    normalize_angle(w1 + dw * s)
                }
                ParamId::Theta(1) => t1,
                ParamId::Theta(i) if i == n => tn,
                ParamId::Theta(i) => {
                    let s = T::from_usize(i - 1).unwrap() / T::from_usize(n - 1).unwrap();
                    normalize_angle(t1 + sweep * s)
                }
            })
            .collect()
    }

    /// Default guess reshaped so each unknown arc next to an end orbit
    /// reaches that orbit's radius at their shared junction from an apsis,
    /// with `ω` turned by `offset` off the exact apsis.
    fn apsis_guess(&self, offset: T) -> Vec<T> {
        let n = self.layout.n;
        let base = self.default_guess();
        // Junction angle and radius fixed by an end orbit, if orbit k touches one.
        let anchor = |k: usize| -> Option<(T, T)> {
            let junction = |j: usize| match self.layout.theta[j] {
                Slot::Fixed(t) => Some(t),
                Slot::Unknown(_) => None,
            };
            if k == 1 {
                junction(0).map(|t| (t, self.initial.radius_at(t)))
            } else if k + 1 == n {
                junction(n - 1).map(|t| (t, self.target.radius_at(t)))
            } else {
                None
            }
        };
        let a_of = |k: usize| match self.layout.a[k] {
            Slot::Fixed(v) => v,
            Slot::Unknown(idx) => base[idx],
        };
        self.layout
            .labels
            .iter()
            .zip(&base)
            .map(|(id, &x)| match *id {
                ParamId::E(i) => anchor(i - 1).map_or(x, |(_, r)| {
                    let a = a_of(i - 1);
                    ((a - r).abs() / a).max(T::lit(0.05)).min(T::lit(0.9))
                }),
                ParamId::Omega(i) => anchor(i - 1).map_or(x, |(t, r)| {
                    // Perigee at the junction when the arc is larger than the radius there.
                    let apsis = if a_of(i - 1) > r { T::zero() } else { T::PI() };
                    normalize_angle(apsis - t + offset)
                }),
                _ => x,
            })
            .collect()
    }

    /// Turns a root into a validated chain, folding negative eccentricities
    /// into a half-turn of the perigee where `ω` was free.
    pub fn build_chain(&self, x: &[T]) -> Result<TransferChain<T>> {
        let n = self.layout.n;
        let mut orbits = vec![self.initial];
        for orbit in 1..n {
            let mut el = self.layout.elements(orbit, x);
            if el.e < T::zero() {
                if matches!(self.layout.omega[orbit], Slot::Unknown(_)) {
                    el.e = -el.e;
                    el.omega = el.omega + T::PI();
                } else {
                    return Err(non_elliptic(orbit + 1, el));
                }
            }
            if !(el.e < near_parabolic::<T>()) || !(el.a > T::zero()) || !el.a.is_finite() {
                return Err(non_elliptic(orbit + 1, el));
            }
            orbits.push(PlanarOrbit::new(el.a, el.e, el.omega).map_err(|_| non_elliptic(orbit + 1, el))?);
        }
        orbits.push(self.target);
        let junctions = (0..n).map(|k| normalize_angle(self.layout.theta(k, x))).collect();
        let chain = TransferChain::new(orbits, junctions, self.grav)?;
        chain.check_circular_interior()?;
        Ok(chain)
    }

    /// Unknown vector of an existing chain (inverse of `build_chain`).
    pub fn unknowns_of(&self, chain: &TransferChain<T>) -> Vec<T> {
        self.layout
            .labels
            .iter()
            .map(|id| match *id {
                ParamId::A(i) => chain.orbits()[i - 1].a(),
                ParamId::E(i) => chain.orbits()[i - 1].e(),
                ParamId::Omega(i) => chain.orbits()[i - 1].omega(),
                ParamId::Theta(i) => chain.junctions()[i - 1],
            })
            .collect()
    }

    fn analytic_jacobian(&self, x: &[T], out: &mut [T]) {
        let n = self.layout.n;
        let dim = self.dim();
        out.iter_mut().for_each(|v| *v = T::zero());
        for k in 0..n {
            let (i, j) = (self.layout.elements(k, x), self.layout.elements(k + 1, x));
            let theta = self.layout.theta(k, x);
            let g1 = f1_gradient(i, j, theta);
            let g2 = f2_gradient(i, j, theta);
            for (row, g, scale) in [(2 * k, g1, T::one()), (2 * k + 1, g2, self.scale)] {
                let entries = [
                    (self.layout.a[k], g.a_i),
                    (self.layout.e[k], g.e_i),
                    (self.layout.omega[k], g.omega_i),
                    (self.layout.a[k + 1], g.a_j),
                    (self.layout.e[k + 1], g.e_j),
                    (self.layout.omega[k + 1], g.omega_j),
                    (self.layout.theta[k], g.theta),
                ];
                for (slot, d) in entries {
                    if let Slot::Unknown(col) = slot {
                        out[row * dim + col] = out[row * dim + col] + d / scale;
                    }
                }
            }
        }
    }
}

// Above this the conic equation loses every digit near apoapsis and the
// junction residuals vanish trivially.
fn near_parabolic<T: Scalar>() -> T {
    T::one() - T::epsilon().sqrt()
}

fn non_elliptic<T: Scalar>(orbit: usize, el: Elements<T>) -> Error {
    Error::NonEllipticSolution {
        orbit,
        a: el.a.to_f64_lossy(),
        e: el.e.to_f64_lossy(),
    }
}

impl<T: Scalar> System<T> for FullSystem<T> {
    fn dim(&self) -> usize {
        self.layout.unknown_count()
    }

    fn residual(&self, x: &[T], out: &mut [T]) {
        for k in 0..self.layout.n {
            let (i, j) = (self.layout.elements(k, x), self.layout.elements(k + 1, x));
            let theta = self.layout.theta(k, x);
            out[2 * k] = f1(i, j, theta);
            out[2 * k + 1] = f2(i, j, theta) / self.scale;
        }
    }

    fn jacobian(&self, x: &[T], out: &mut [T]) {
        match self.jacobian_mode {
            JacobianMode::Analytic => self.analytic_jacobian(x, out),
            JacobianMode::CentralDifference => central_difference_jacobian(self, x, T::lit(T::FD_STEP), out),
        }
    }
}

/// Two-impulse system with the first impulse at an apsis of the initial
/// orbit.
///
/// Working in a frame rotated so that the departure lies on `θ' = 0`, the
/// transfer arc has its apse line there too, so its state reduces to a
/// signed eccentricity (`e₂ < 0` puts its apogee at departure) and
/// `a₂ = r_dep / (1 − e₂)`. The unknowns are `(e₂, θ'₂₃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApsidalSystem<T> {
    initial: PlanarOrbit<T>,
    target: PlanarOrbit<T>,
    theta_dep: T,
    r_dep: T,
    // Target perigee rotation in the departure frame.
    omega3: T,
    grav: GravModel<T>,
}

impl<T: Scalar> ApsidalSystem<T> {
    pub fn new(initial: PlanarOrbit<T>, target: PlanarOrbit<T>, theta_dep: T, grav: GravModel<T>) -> Result<Self> {
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(16.0));
        if initial.approx_eq(&target, tol) {
            return Err(Error::IdenticalOrbits);
        }
        let off_apsis = initial.e() * (theta_dep + initial.omega()).sin();
        if off_apsis.abs() > T::lit(1e-9).max(T::epsilon().sqrt()) {
            return Err(Error::InvalidScenario(
                "a two-impulse chain must depart from an apsis of the initial orbit".into(),
            ));
        }
        Ok(Self {
            initial,
            target,
            theta_dep: normalize_angle(theta_dep),
            r_dep: initial.radius_at(theta_dep),
            omega3: normalize_angle(target.omega() + theta_dep),
            grav,
        })
    }

    /// `θ' = π` with the transfer apse spanning departure radius and the
    /// target radius opposite.
    pub fn default_guess(&self) -> Vec<T> {
        let r_far = self.target.radius_at(self.theta_dep + T::PI());
        vec![(r_far - self.r_dep) / (r_far + self.r_dep), T::PI()]
    }

    pub fn build_chain(&self, x: &[T]) -> Result<TransferChain<T>> {
        let e2 = x[0];
        let a2 = self.r_dep / (T::one() - e2);
        if !(e2.abs() < near_parabolic::<T>()) || !(a2 > T::zero()) || !a2.is_finite() {
            return Err(Error::NonEllipticSolution {
                orbit: 2,
                a: a2.to_f64_lossy(),
                e: e2.to_f64_lossy(),
            });
        }
        let omega2 = if e2 < T::zero() {
            T::PI() - self.theta_dep
        } else {
            -self.theta_dep
        };
        let transfer = PlanarOrbit::new(a2, e2.abs(), omega2)?;
        let junctions = vec![self.theta_dep, normalize_angle(x[1] + self.theta_dep)];
        let chain = TransferChain::new(vec![self.initial, transfer, self.target], junctions, self.grav)?;
        chain.check_circular_interior()?;
        Ok(chain)
    }

    pub fn unknowns_of(&self, chain: &TransferChain<T>) -> Vec<T> {
        let o = chain.orbits()[1];
        let e = if (o.omega() + self.theta_dep).cos() < T::zero() {
            -o.e()
        } else {
            o.e()
        };
        vec![e, normalize_angle(chain.junctions()[1] - self.theta_dep)]
    }
}

impl<T: Scalar> System<T> for ApsidalSystem<T> {
    fn dim(&self) -> usize {
        2
    }

    fn residual(&self, x: &[T], out: &mut [T]) {
        let (e2, th) = (x[0], x[1]);
        let one = T::one();
        let e3 = self.target.e();
        let c3 = (th + self.omega3).cos();
        let p3 = self.target.semi_latus_rectum();
        out[0] =
            (self.r_dep * (one + e2) * (one + e3 * c3) - p3 * (one + e2 * th.cos())) / (self.target.a() * (one - e3));
        out[1] = e2 * th.sin() - e2 * e3 * self.omega3.sin() - e3 * (th + self.omega3).sin();
    }
}

/// A square junction system ready for Newton iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum JunctionSystem<T> {
    Full(FullSystem<T>),
    Apsidal(ApsidalSystem<T>),
}

impl<T: Scalar> JunctionSystem<T> {
    pub fn default_guess(&self) -> Vec<T> {
        match self {
            JunctionSystem::Full(s) => s.default_guess(),
            JunctionSystem::Apsidal(s) => s.default_guess(),
        }
    }

    pub fn build_chain(&self, x: &[T]) -> Result<TransferChain<T>> {
        match self {
            JunctionSystem::Full(s) => s.build_chain(x),
            JunctionSystem::Apsidal(s) => s.build_chain(x),
        }
    }

    pub fn unknowns_of(&self, chain: &TransferChain<T>) -> Vec<T> {
        match self {
            JunctionSystem::Full(s) => s.unknowns_of(chain),
            JunctionSystem::Apsidal(s) => s.unknowns_of(chain),
        }
    }

    /// Backup starting points: the default guess with every free `ω`
    /// turned by ±0.25 rad, then also with every free `e` set to 0.3 and
    /// 0.6. A default guess whose apse lines all sit on junctions can start
    /// Newton on a singular Jacobian. Last come guesses that put the arcs
    /// next to the end orbits on an apsis at their junction.
    pub fn fallback_guesses(&self) -> Vec<Vec<T>> {
        let JunctionSystem::Full(s) = self else {
            return Vec::new();
        };
        let base = s.default_guess();
        let mut out = Vec::new();
        for e in [None, Some(T::lit(0.3)), Some(T::lit(0.6))] {
            for offset in [T::lit(0.25), T::lit(-0.25)] {
                let guess = base
                    .iter()
                    .zip(s.labels())
                    .map(|(&x, id)| match id {
                        ParamId::Omega(_) => normalize_angle(x + offset),
                        ParamId::E(_) => e.unwrap_or(x),
                        _ => x,
                    })
                    .collect();
                out.push(guess);
            }
        }
        out.extend([T::zero(), T::lit(0.25), T::lit(-0.25)].map(|offset| s.apsis_guess(offset)));
        out
    }

    pub fn set_jacobian_mode(&mut self, mode: JacobianMode) {
        if let JunctionSystem::Full(s) = self {
            s.jacobian_mode = mode;
        }
    }
}

impl<T: Scalar> System<T> for JunctionSystem<T> {
    fn dim(&self) -> usize {
        match self {
            JunctionSystem::Full(s) => s.dim(),
            JunctionSystem::Apsidal(s) => s.dim(),
        }
    }

    fn residual(&self, x: &[T], out: &mut [T]) {
        match self {
            JunctionSystem::Full(s) => s.residual(x, out),
            JunctionSystem::Apsidal(s) => s.residual(x, out),
        }
    }

    fn jacobian(&self, x: &[T], out: &mut [T]) {
        match self {
            JunctionSystem::Full(s) => s.jacobian(x, out),
            JunctionSystem::Apsidal(s) => s.jacobian(x, out),
        }
    }
}

/// Builds the square system for `scenario`.
///
/// Two-impulse scenarios have four junction conditions but only three
/// interior unknowns once both junction angles are fixed, so they are posed
/// with the first impulse at an apsis of the initial orbit: the departure
/// angle is honoured and the arrival angle becomes an output.
pub fn assemble_system<T: Scalar>(scenario: &ManeuverScenario<T>) -> Result<JunctionSystem<T>> {
    scenario.validate()?;
    if scenario.n_impulses == 2 && scenario.adjustables.is_empty() {
        return ApsidalSystem::new(scenario.initial, scenario.target, scenario.theta_first, scenario.grav)
            .map(JunctionSystem::Apsidal);
    }
    FullSystem::new(scenario, None).map(JunctionSystem::Full)
}

/// Two-impulse system with one terminal junction angle left free.
pub fn assemble_free_end<T: Scalar>(scenario: &ManeuverScenario<T>, free_end: FreeEnd) -> Result<FullSystem<T>> {
    scenario.validate()?;
    if scenario.n_impulses != 2 {
        return Err(Error::InvalidScenario(
            "a free terminal junction is only posed for two impulses".into(),
        ));
    }
    FullSystem::new(scenario, Some(free_end))
}
