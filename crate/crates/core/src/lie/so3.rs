//! The rotation group SO(3): exponential coordinates, the bi-invariant
//! metric and its arccos-free comparison form.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tol;

/// A proper rotation matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct Rotation(Matrix3<f64>);

impl fmt::Debug for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "Rotation[[{:.6}, {:.6}, {:.6}], [{:.6}, {:.6}, {:.6}], [{:.6}, {:.6}, {:.6}]]",
            m[(0, 0)],
            m[(0, 1)],
            m[(0, 2)],
            m[(1, 0)],
            m[(1, 1)],
            m[(1, 2)],
            m[(2, 0)],
            m[(2, 1)],
            m[(2, 2)]
        )
    }
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation(Matrix3::identity())
    }

    /// Validates `mᵀm = I` and `det m = 1` within [`tol::ORTHONORMAL`].
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        if !m.iter().all(|v| v.is_finite()) {
            return Err(Error::Validation("rotation matrix has non-finite entries".into()));
        }
        let gram = m.transpose() * m - Matrix3::identity();
        if gram.amax() > tol::ORTHONORMAL {
            return Err(Error::Validation(format!(
                "matrix is not orthonormal (max |MᵀM - I| = {:e})",
                gram.amax()
            )));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > tol::ORTHONORMAL {
            return Err(Error::Validation(format!("determinant {det} != 1")));
        }
        Ok(Rotation(m))
    }

    /// Wraps a matrix the caller knows to be a rotation.
    pub fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        Rotation(m)
    }

    /// Row-major entries.
    pub fn from_row_major(rows: &[f64; 9]) -> Result<Self> {
        Rotation::new(Matrix3::from_row_slice(rows))
    }

    /// Column-major entries.
    #[inline]
    pub(crate) fn as_flat(&self) -> &[f64; 9] {
        self.0.as_slice().try_into().expect("3x3 storage")
    }

    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.0;
        [
            m[(0, 0)],
            m[(0, 1)],
            m[(0, 2)],
            m[(1, 0)],
            m[(1, 1)],
            m[(1, 2)],
            m[(2, 0)],
            m[(2, 1)],
            m[(2, 2)],
        ]
    }

    /// Rotation by `angle` about `axis` (normalized internally).
    pub fn about_axis(axis: &Vector3<f64>, angle: f64) -> Self {
        let n = axis.norm();
        if n == 0.0 {
            return Rotation::identity();
        }
        exp_so3(&(axis * (angle / n)))
    }

    pub fn rx(angle: f64) -> Self {
        Rotation::about_axis(&Vector3::x(), angle)
    }

    pub fn ry(angle: f64) -> Self {
        Rotation::about_axis(&Vector3::y(), angle)
    }

    pub fn rz(angle: f64) -> Self {
        Rotation::about_axis(&Vector3::z(), angle)
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    #[inline]
    pub fn inverse(&self) -> Self {
        Rotation(self.0.transpose())
    }

    /// `tr(selfᵀ · other)`, computed as the elementwise product sum.
    #[inline]
    pub fn trace_with(&self, other: &Rotation) -> f64 {
        trace_dot(self.as_flat(), other.as_flat())
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        angle_from_trace(self.0.trace())
    }

    pub fn frobenius_distance(&self, other: &Rotation) -> f64 {
        (self.0 - other.0).norm()
    }

    /// One Gram–Schmidt pass over the columns, removing accumulated drift.
    pub fn orthonormalized(&self) -> Self {
        let c0 = self.0.column(0).normalize();
        let c1 = self.0.column(1) - c0 * c0.dot(&self.0.column(1));
        let c1 = c1.normalize();
        let c2 = c0.cross(&c1);
        Rotation(Matrix3::from_columns(&[c0, c1, c2]))
    }

    pub fn transform(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    /// `vee(R - Rᵀ)`, which equals `2 sin θ · axis`. Its direction is the
    /// axis of the logarithm whenever θ < π.
    #[inline]
    pub fn skew_direction(&self) -> Vector3<f64> {
        let m = &self.0;
        Vector3::new(
            m[(2, 1)] - m[(1, 2)],
            m[(0, 2)] - m[(2, 0)],
            m[(1, 0)] - m[(0, 1)],
        )
    }
}

impl Mul for Rotation {
    type Output = Rotation;
    #[inline]
    fn mul(self, rhs: Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

impl Mul<Rotation> for &Rotation {
    type Output = Rotation;
    #[inline]
    fn mul(self, rhs: Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

impl Mul<&Rotation> for Rotation {
    type Output = Rotation;
    #[inline]
    fn mul(self, rhs: &Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

impl Mul<&Rotation> for &Rotation {
    type Output = Rotation;
    #[inline]
    fn mul(self, rhs: &Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

/// A point of the Lie algebra in exponential coordinates: direction is the
/// rotation axis, norm is the angle. Confined to the closed ball of radius π.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngleVector(Vector3<f64>);

impl AxisAngleVector {
    pub fn new(x: Vector3<f64>) -> Result<Self> {
        let n = x.norm();
        if !n.is_finite() || n > PI * (1.0 + 1e-12) {
            return Err(Error::Validation(format!(
                "axis-angle norm {n} exceeds pi"
            )));
        }
        Ok(AxisAngleVector(x))
    }

    pub fn zero() -> Self {
        AxisAngleVector(Vector3::zeros())
    }

    #[inline]
    pub fn vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn angle(&self) -> f64 {
        self.0.norm()
    }

    pub fn exp(&self) -> Rotation {
        exp_so3(&self.0)
    }
}

/// Skew-symmetric matrix of `x`.
pub fn hat(x: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -x.z, x.y, x.z, 0.0, -x.x, -x.y, x.x, 0.0)
}

/// Inverse of [`hat`]; rejects matrices that are not skew-symmetric.
pub fn vee(m: &Matrix3<f64>) -> Result<Vector3<f64>> {
    let asym = (m + m.transpose()).amax();
    if asym > tol::SKEW {
        return Err(Error::Validation(format!(
            "matrix is not skew-symmetric (max |X + Xᵀ| = {asym:e})"
        )));
    }
    Ok(Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]))
}

/// Rodrigues' formula. Valid for every `x`; small angles use Taylor limits.
pub fn exp_so3(x: &Vector3<f64>) -> Rotation {
    let theta2 = x.norm_squared();
    let theta = theta2.sqrt();
    let (a, b) = if theta < tol::SMALL_ANGLE {
        (1.0 - theta2 / 6.0, 0.5 - theta2 / 24.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    let k = hat(x);
    Rotation(Matrix3::identity() + k * a + k * k * b)
}

/// Matrix logarithm with the default boundary tolerance.
pub fn log_so3(r: &Rotation) -> Result<AxisAngleVector> {
    log_so3_with_tol(r, tol::LOG_BOUNDARY)
}

/// Matrix logarithm; refuses rotations within `tol_boundary` of angle π.
pub fn log_so3_with_tol(r: &Rotation, tol_boundary: f64) -> Result<AxisAngleVector> {
    let m = r.matrix();
    let s = r.skew_direction() * 0.5; // sin θ · axis
    let sin_t = s.norm();
    let cos_t = 0.5 * (m.trace() - 1.0);
    let theta = sin_t.atan2(cos_t);
    if theta >= PI - tol_boundary {
        return Err(Error::BoundaryAngle {
            angle: theta,
            tol: tol_boundary,
        });
    }
    if theta < tol::SMALL_ANGLE {
        return Ok(AxisAngleVector(s * (1.0 + theta * theta / 6.0)));
    }
    if theta < PI - 1e-3 {
        return Ok(AxisAngleVector(s * (theta / sin_t)));
    }
    // Near π the skew part is tiny; read the axis off the symmetric part
    // (R + Rᵀ)/2 - cos θ I = (1 - cos θ) a aᵀ and take its sign from the skew part.
    let sym = (m + m.transpose()) * 0.5 - Matrix3::identity() * cos_t;
    let scale = 1.0 - cos_t;
    let diag = [sym[(0, 0)], sym[(1, 1)], sym[(2, 2)]];
    let k = (0..3)
        .max_by(|&i, &j| diag[i].total_cmp(&diag[j]))
        .unwrap_or(0);
    let mut axis: Vector3<f64> = sym.column(k).into_owned() / (diag[k] * scale).sqrt();
    axis.normalize_mut();
    if axis.dot(&s) < 0.0 {
        axis = -axis;
    }
    Ok(AxisAngleVector(axis * theta))
}

#[inline]
pub(crate) fn trace_dot(a: &[f64; 9], b: &[f64; 9]) -> f64 {
    // three short chains instead of one long one; the order is fixed so that
    // every decoder sees bit-identical traces
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
        + (a[3] * b[3] + a[4] * b[4] + a[5] * b[5])
        + (a[6] * b[6] + a[7] * b[7] + a[8] * b[8])
}

/// `arccos((t - 1) / 2)` with the argument clamped to `[-1, 1]`.
#[inline]
pub fn angle_from_trace(trace: f64) -> f64 {
    (0.5 * (trace - 1.0)).clamp(-1.0, 1.0).acos()
}

/// Bi-invariant distance `‖log∨(R1ᵀR2)‖`, equal to π at the cut locus.
pub fn rho_so3(r1: &Rotation, r2: &Rotation) -> f64 {
    angle_from_trace(r1.trace_with(r2))
}

/// Outcome of [`compare_rho`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nearer {
    First,
    Second,
    Tie,
}

/// Which of `a`, `b` is closer to `r`, decided on traces alone.
pub fn compare_rho(r: &Rotation, a: &Rotation, b: &Rotation) -> Nearer {
    let ta = r.trace_with(a);
    let tb = r.trace_with(b);
    if (ta - tb).abs() <= tol::TRACE {
        Nearer::Tie
    } else if ta > tb {
        Nearer::First
    } else {
        Nearer::Second
    }
}

/// Haar-uniform rotation: a normalized 4D standard normal read as a unit quaternion.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation {
    loop {
        let w: f64 = rng.sample(StandardNormal);
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n > 1e-12 {
            let q = UnitQuaternion::new_unchecked(Quaternion::new(w / n, x / n, y / n, z / n));
            return Rotation(q.to_rotation_matrix().into_inner());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &Matrix3<f64>, b: &Matrix3<f64>, eps: f64) -> bool {
        (a - b).amax() <= eps
    }

    #[test]
    fn hat_pattern() {
        assert_eq!(hat(&Vector3::zeros()), Matrix3::zeros());
        let m = hat(&Vector3::new(1.0, 2.0, 3.0));
        let expected = Matrix3::new(0.0, -3.0, 2.0, 3.0, 0.0, -1.0, -2.0, 1.0, 0.0);
        assert_eq!(m, expected);
        let x = Vector3::new(0.3, -0.4, 0.5);
        assert_eq!(vee(&hat(&x)).unwrap(), x);
    }

    #[test]
    fn vee_rejects_non_skew() {
        let m = Matrix3::identity();
        assert!(matches!(vee(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(exp_so3(&Vector3::zeros()).matrix(), &Matrix3::identity());
        let r = exp_so3(&Vector3::new(PI / 2.0, 0.0, 0.0));
        let expected = Matrix3::new(1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0);
        assert!(close(r.matrix(), &expected, 1e-15));
        let x = Vector3::new(0.3, -0.4, 0.5);
        let back = log_so3(&exp_so3(&x)).unwrap();
        assert!((back.vector() - x).norm() < 1e-12);
    }

    #[test]
    fn exp_is_a_rotation() {
        let r = exp_so3(&Vector3::new(1.1, -2.0, 0.7));
        assert!(Rotation::new(*r.matrix()).is_ok());
    }

    #[test]
    fn log_examples() {
        assert_eq!(log_so3(&Rotation::identity()).unwrap().vector(), &Vector3::zeros());
        let y = Vector3::new(0.0, 1.0, 0.0);
        assert!((log_so3(&exp_so3(&y)).unwrap().vector() - y).norm() < 1e-14);
        let flip = exp_so3(&Vector3::new(PI, 0.0, 0.0));
        assert!(matches!(log_so3(&flip), Err(Error::BoundaryAngle { .. })));
    }

    #[test]
    fn log_near_pi_uses_symmetric_part() {
        let x = Vector3::new(-0.2, 0.9, 0.4).normalize() * (PI - 1e-6);
        let back = log_so3(&exp_so3(&x)).unwrap();
        assert!((back.vector() - x).norm() < 1e-9 * PI);
    }

    #[test]
    fn small_angles_use_taylor() {
        let x = Vector3::new(1e-8, -2e-8, 3e-9);
        let r = exp_so3(&x);
        let back = log_so3(&r).unwrap();
        assert!((back.vector() - x).norm() < 1e-20);
    }

    #[test]
    fn rho_examples() {
        let i = Rotation::identity();
        assert_eq!(rho_so3(&i, &i), 0.0);
        let flip = exp_so3(&Vector3::new(PI, 0.0, 0.0));
        assert!((rho_so3(&i, &flip) - PI).abs() < 1e-12);
    }

    #[test]
    fn rho_is_bi_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = random_rotation(&mut rng);
            let b = random_rotation(&mut rng);
            let q = random_rotation(&mut rng);
            let d = rho_so3(&a, &b);
            assert!((d - rho_so3(&(q * a), &(q * b))).abs() < 1e-10);
            assert!((d - rho_so3(&(a * q), &(b * q))).abs() < 1e-10);
        }
    }

    #[test]
    fn compare_rho_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_rotation(&mut rng);
        let b = random_rotation(&mut rng);
        assert_eq!(compare_rho(&r, &r, &b), Nearer::First);
        // A = RQ, B = RQ' with equal angles
        let q = Rotation::about_axis(&Vector3::new(1.0, 2.0, 0.5), 0.7);
        let q2 = Rotation::about_axis(&Vector3::new(-0.3, 0.1, 1.0), 0.7);
        assert_eq!(compare_rho(&r, &(r * q), &(r * q2)), Nearer::Tie);
        for _ in 0..1000 {
            let r = random_rotation(&mut rng);
            let a = random_rotation(&mut rng);
            let b = random_rotation(&mut rng);
            let (da, db) = (rho_so3(&r, &a), rho_so3(&r, &b));
            match compare_rho(&r, &a, &b) {
                Nearer::First => assert!(da <= db),
                Nearer::Second => assert!(db <= da),
                Nearer::Tie => assert!((da - db).abs() < 1e-5),
            }
        }
    }

    #[test]
    fn rotation_validation() {
        assert!(Rotation::new(Matrix3::identity() * 2.0).is_err());
        let reflect = Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(Rotation::new(reflect).is_err());
        assert!(AxisAngleVector::new(Vector3::new(4.0, 0.0, 0.0)).is_err());
    }

    #[test]
    fn random_rotations_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let r = random_rotation(&mut rng);
            assert!(Rotation::new(*r.matrix()).is_ok());
        }
    }
}
