//! Double-power nonlinearity `f(u) = −ωu + u^p − u^q` (`ω > 0`, `q > p > 1`).
//!
//! The crate provides
//!
//! * [`power_algebra`]: exact arithmetic on finite sums of real-exponent
//!   powers, including the tilde operator `h ↦ (u·h)′·H − u·h²` and sign
//!   analysis on `(0, ∞)`;
//! * [`nonlinearity`]: validated parameters, the functions `f`, `F`, `f′`,
//!   `f̃`, `F̃` and the critical frequencies `ω_{p,q}` and `η_{p,q}`;
//! * [`conditions`]: the existence and uniqueness conditions evaluated both
//!   through the closed-form thresholds and through numeric sign analysis,
//!   with equivalence checks and phase-diagram sweeps;
//! * [`shooting`]: positive radial ground states of
//!   `u_rr + (n−1)/r·u_r + f(u) = 0`, `u_r(0) = 0`, `u(∞) = 0`;
//! * [`format`]: the fixed 17-significant-digit CSV/JSON encodings.

pub mod conditions;
pub mod format;
pub mod nonlinearity;
pub mod power_algebra;
pub mod shooting;

pub use conditions::{
    check_existence, check_potential_tilde, check_uniqueness, sweep, verify_corollary,
    verify_theorem, ConditionError, ConditionId, ConditionReport, Method, PhaseRow, PhaseTable,
};
pub use nonlinearity::{ParamError, Params, PositiveZeros, Thresholds};
pub use power_algebra::{AlgebraError, PowerSum, PowerTerm, Sign, SignVerdict};
pub use shooting::{
    count_ground_states, find_ground_state, integrate_radial, Controls, GroundState, OrbitClass,
    RadialState, ShootingError, Trajectory,
};
