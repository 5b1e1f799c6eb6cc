//! Planar rigid motions.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// A planar motion `(θ, t)` with θ kept in `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarMotion {
    theta: f64,
    pub t: Vector2<f64>,
}

impl PlanarMotion {
    pub fn new(theta: f64, t: Vector2<f64>) -> Self {
        PlanarMotion {
            theta: wrap_angle(theta),
            t,
        }
    }

    pub fn identity() -> Self {
        PlanarMotion::new(0.0, Vector2::zeros())
    }

    pub fn rotation(theta: f64) -> Self {
        PlanarMotion::new(theta, Vector2::zeros())
    }

    pub fn translation(t: Vector2<f64>) -> Self {
        PlanarMotion::new(0.0, t)
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rotation_matrix(&self) -> Matrix2<f64> {
        rot2(self.theta)
    }

    /// `(θ1 + θ2, R(θ1) t2 + t1)`.
    pub fn compose(&self, other: &PlanarMotion) -> PlanarMotion {
        PlanarMotion::new(self.theta + other.theta, rot2(self.theta) * other.t + self.t)
    }

    pub fn inverse(&self) -> PlanarMotion {
        PlanarMotion::new(-self.theta, -(rot2(-self.theta) * self.t))
    }
}

pub(crate) fn rot2(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

pub fn compose_se2(a: &PlanarMotion, b: &PlanarMotion) -> PlanarMotion {
    a.compose(b)
}

pub fn inverse_se2(a: &PlanarMotion) -> PlanarMotion {
    a.inverse()
}

/// Weighted distance on ℝ² × S¹: `sqrt(‖t1 - t2‖² + w² dθ²)` with dθ wrapped.
/// Left-invariant, not right-invariant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Se2Metric {
    weight: f64,
}

impl Default for Se2Metric {
    fn default() -> Self {
        Se2Metric { weight: 1.0 }
    }
}

impl Se2Metric {
    pub fn new(weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::Validation(format!("metric weight must be > 0, got {weight}")));
        }
        Ok(Se2Metric { weight })
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn distance(&self, a: &PlanarMotion, b: &PlanarMotion) -> f64 {
        let dth = wrap_angle(a.theta - b.theta);
        ((a.t - b.t).norm_squared() + self.weight * self.weight * dth * dth).sqrt()
    }
}

/// [`Se2Metric::distance`] with weight `w`.
pub fn rho_se2(a: &PlanarMotion, b: &PlanarMotion, w: f64) -> Result<f64> {
    Ok(Se2Metric::new(w)?.distance(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_keeps_pi() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn wrap_around_distance() {
        let a = PlanarMotion::rotation(3.0);
        let b = PlanarMotion::rotation(-3.0);
        let d = rho_se2(&a, &b, 1.0).unwrap();
        assert!((d - (2.0 * PI - 6.0)).abs() < 1e-12);
        assert_eq!(rho_se2(&a, &a, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn weight_must_be_positive() {
        assert!(Se2Metric::new(0.0).is_err());
        assert!(Se2Metric::new(-1.0).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = PlanarMotion::new(2.5, Vector2::new(1.0, -3.0));
        let e = p.compose(&p.inverse());
        assert!(e.theta().abs() < 1e-15 && e.t.norm() < 1e-14);
    }
}
