//! Numerical tolerances used across the crate, in one place.

/// Elementwise tolerance for `RᵀR = I` and `det R = 1`.
pub const ORTHONORMAL: f64 = 1e-12;

/// Skew-symmetry tolerance accepted by `vee`.
pub const SKEW: f64 = 1e-12;

/// Default distance from pi below which `log_so3` refuses.
pub const LOG_BOUNDARY: f64 = 1e-9;

/// Angles below this use Taylor expansions in exp/log.
pub const SMALL_ANGLE: f64 = 1e-6;

/// Trace comparisons: two traces closer than this are a tie.
pub const TRACE: f64 = 1e-12;

/// Frobenius distance under which two group elements are identified.
pub const DEDUP: f64 = 1e-9;

/// Frobenius distance used for intersection tests between groups.
pub const INTERSECTION: f64 = 1e-6;

/// Half-space test slack for wedge planes.
pub const PLANE: f64 = 1e-12;

/// Band around a wedge plane treated as "on the plane" when counting multiplicity.
pub const PLANE_BAND: f64 = 1e-9;
