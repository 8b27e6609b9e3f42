//! Smooth multi-impulse chains of confocal elliptic arcs.
//!
//! Consecutive arcs must meet with equal radius and equal slope `dr/dθ`, so
//! every impulse is tangential. Stacking the two conditions over all
//! junctions gives a square nonlinear system once enough interior
//! parameters are pinned; it is solved with damped Newton.

mod chain;
mod scenario;
mod schedule;
mod system;

pub use chain::{
    impulse_schedule, solve_chain, solve_chain_with, two_impulse_perigee, two_impulse_shape_based, ChainSolution,
    SolveDiagnostics, SolveOptions, TransferChain,
};
pub use scenario::{AdjustableSet, ManeuverScenario, ParamId};
pub use schedule::{Impulse, ImpulseSchedule};
pub use system::{
    assemble_free_end, assemble_system, f1_gradient, f2_gradient, residual_f1, residual_f2, ApsidalSystem, Elements,
    FreeEnd, FullSystem, JacobianMode, JunctionGradient, JunctionSystem,
};
