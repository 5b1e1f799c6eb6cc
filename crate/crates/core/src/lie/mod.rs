//! Group operations, exponential coordinates and metrics for SO(3), SE(2),
//! SE(3) and PCG(3).

pub mod se2;
pub mod se3;
pub mod so3;

pub use se2::{compose_se2, inverse_se2, rho_se2, wrap_angle, PlanarMotion, Se2Metric};
pub use se3::{compose_pcg, compose_se3, inverse_pcg, inverse_se3, SpatialMotion};
pub use so3::{
    angle_from_trace, compare_rho, exp_so3, hat, log_so3, log_so3_with_tol, random_rotation,
    rho_so3, vee, AxisAngleVector, Nearer, Rotation,
};
