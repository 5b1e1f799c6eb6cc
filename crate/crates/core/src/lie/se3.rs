//! Spatial rigid motions, composed either as SE(3) (semi-direct) or as the
//! pose change group PCG(3) (direct product).

use nalgebra::Vector3;

use super::so3::Rotation;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialMotion {
    pub rotation: Rotation,
    pub translation: Vector3<f64>,
}

impl SpatialMotion {
    pub fn new(rotation: Rotation, translation: Vector3<f64>) -> Self {
        SpatialMotion {
            rotation,
            translation,
        }
    }

    pub fn identity() -> Self {
        SpatialMotion::new(Rotation::identity(), Vector3::zeros())
    }
}

/// `(R1 R2, R1 t2 + t1)`.
pub fn compose_se3(a: &SpatialMotion, b: &SpatialMotion) -> SpatialMotion {
    SpatialMotion::new(
        a.rotation * b.rotation,
        a.rotation.transform(&b.translation) + a.translation,
    )
}

/// `(Rᵀ, -Rᵀ t)`.
pub fn inverse_se3(g: &SpatialMotion) -> SpatialMotion {
    let rt = g.rotation.inverse();
    SpatialMotion::new(rt, -rt.transform(&g.translation))
}

/// `(R1 R2, t1 + t2)`.
pub fn compose_pcg(a: &SpatialMotion, b: &SpatialMotion) -> SpatialMotion {
    SpatialMotion::new(a.rotation * b.rotation, a.translation + b.translation)
}

/// `(Rᵀ, -t)`.
pub fn inverse_pcg(g: &SpatialMotion) -> SpatialMotion {
    SpatialMotion::new(g.rotation.inverse(), -g.translation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn se3_hand_evaluation() {
        let a = SpatialMotion::new(Rotation::rx(FRAC_PI_2), Vector3::new(1.0, 0.0, 0.0));
        let b = SpatialMotion::new(Rotation::identity(), Vector3::new(0.0, 1.0, 0.0));
        let c = compose_se3(&a, &b);
        assert!((c.translation - Vector3::new(1.0, 0.0, 1.0)).norm() < 1e-15);
        assert_eq!(c.rotation, a.rotation);
        assert_eq!(compose_se3(&a, &SpatialMotion::identity()), a);
    }

    #[test]
    fn pcg_componentwise() {
        let a = SpatialMotion::new(Rotation::rx(FRAC_PI_2), Vector3::new(1.0, 0.0, 0.0));
        let b = SpatialMotion::new(Rotation::identity(), Vector3::new(0.0, 1.0, 0.0));
        let c = compose_pcg(&a, &b);
        assert_eq!(c.translation, Vector3::new(1.0, 1.0, 0.0));
        assert_eq!(compose_pcg(&b, &a).translation, c.translation);
        assert_eq!(compose_pcg(&a, &SpatialMotion::identity()), a);
    }
}
