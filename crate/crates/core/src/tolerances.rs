//! Numerical tolerances used across the crate.
//!
//! These are contract values, not tuning knobs: state and operator
//! invariants are checked against them at runtime and in the test suites.

/// Normalization defect allowed for a state marked normalized.
pub const NORMALIZATION: f64 = 1e-12;

/// Max |rho - rho^dagger| entry for a valid density operator.
pub const HERMITICITY: f64 = 1e-12;

/// Trace defect allowed for a valid density operator.
pub const TRACE: f64 = 1e-12;

/// Eigenvalue floor for positivity of analytically constructed channels.
/// Small negative round-off is expected and tolerated down to this value.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Convergence threshold on relative off-diagonal mass for the Jacobi
/// SVD/eigenvalue sweeps.
pub const JACOBI: f64 = 1e-14;

/// Defect allowed when checking unitarity of an operator.
pub const UNITARITY: f64 = 1e-12;

/// Two states are equal up to a global phase iff |<a|b>| >= 1 - this.
pub const GLOBAL_PHASE: f64 = 1e-10;

/// Schmidt coefficients of a normalized state satisfy sum(l_i^2) = 1
/// within this, and reconstruction matches the input within this.
pub const SCHMIDT: f64 = 1e-10;

/// Amplitude magnitude below which a mode counts as unoccupied when
/// checking window-overflow and routing preconditions.
pub const OCCUPANCY: f64 = 1e-12;

/// Max deviation accepted by gate verification before reporting failure.
pub const GATE_DEVIATION: f64 = 1e-8;
