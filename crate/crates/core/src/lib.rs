//! Shape-based design of smooth multi-impulse coplanar orbit transfers.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix the double-precision types most callers want.
//!
//! ```
//! use sbgm::{Orbit, Scenario, AdjustableSet, Grav, solve_chain};
//!
//! let scenario = Scenario::new(
//!     Orbit::circular(7000.0).unwrap(),
//!     Orbit::circular(14000.0).unwrap(),
//!     0.0,
//!     std::f64::consts::PI,
//!     2,
//!     AdjustableSet::empty(),
//!     Grav::earth(),
//! )
//! .unwrap();
//! let sol = solve_chain(&scenario, None).unwrap();
//! assert!((sol.chain.orbits()[1].e() - 1.0 / 3.0).abs() < 1e-12);
//! ```

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod error;
pub mod grid;
pub mod lambert;
pub mod newton;
pub mod optimize;
pub mod orbit;
pub mod sbgm;
pub mod scalar;
pub mod text;
pub mod variational;
pub mod vec2;

pub use error::{Error, Result};
pub use orbit::{
    conic_intersections, elements_from_state, state_from_elements, vis_viva, GravModel, OrbitPosition, PlanarOrbit,
    PlanarState, EARTH_MU, EARTH_RADIUS_KM,
};
pub use sbgm::{
    assemble_system, impulse_schedule, residual_f1, residual_f2, solve_chain, solve_chain_with, two_impulse_perigee,
    two_impulse_shape_based, AdjustableSet, ChainSolution, FreeEnd, Impulse, ImpulseSchedule, JacobianMode,
    ManeuverScenario, ParamId, SolveOptions, TransferChain,
};
pub use scalar::Scalar;
pub use vec2::Vec2;

pub type Orbit = PlanarOrbit<f64>;
pub type State = PlanarState<f64>;
pub type Position = OrbitPosition<f64>;
pub type Grav = GravModel<f64>;
pub type Scenario = ManeuverScenario<f64>;
pub type Chain = TransferChain<f64>;
pub type Schedule = ImpulseSchedule<f64>;
pub type Adjustables = AdjustableSet<f64>;
