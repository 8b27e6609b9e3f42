use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised by the geometry, solvers and searches.
///
/// Numeric payloads are widened to `f64` so the enum stays independent of
/// the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),
    #[error("invalid state vector: {0}")]
    InvalidState(String),
    #[error("gravitational parameter must be positive and finite, got {0}")]
    InvalidGravity(f64),
    #[error("state describes a hyperbolic or parabolic conic (e = {eccentricity})")]
    HyperbolicOrParabolic { eccentricity: f64 },
    #[error("state has (near) zero angular momentum")]
    DegenerateOrbit,
    #[error("radius {radius} km lies outside the orbit's range [{min}, {max}] km")]
    RadiusOutsideOrbit { radius: f64, min: f64, max: f64 },
    #[error("orbits are identical")]
    IdenticalOrbits,
    #[error("orbits do not intersect")]
    NoIntersection,
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("system is not square: {unknowns} unknowns for {equations} equations")]
    DimensionMismatch { unknowns: usize, equations: usize },
    #[error("jacobian became singular at iteration {iteration} (circular interior arc?)")]
    SingularJacobian { iteration: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("solved arc {orbit} is not an ellipse (a = {a}, e = {e})")]
    NonEllipticSolution { orbit: usize, a: f64, e: f64 },
    #[error("interior arc {orbit} came out circular away from an apsis")]
    CircularInteriorArc { orbit: usize },
    #[error("intermediate radius {0} km does not give elliptic transfer arcs")]
    InvalidIntermediate(f64),
    #[error("lambert endpoints are collinear with the focus")]
    DegenerateGeometry,
    #[error("only prograde transfers are supported")]
    RetrogradeTransfer,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("every grid point failed to produce a transfer")]
    AllGridPointsFailed,
    #[error("variational rates are singular (e(e + cos u) = {coefficient:e})")]
    CircularSingularity { coefficient: f64 },
}
