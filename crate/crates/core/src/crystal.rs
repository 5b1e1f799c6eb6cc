//! Symmorphic crystallographic groups: the wallpaper groups p1, p2, p3, p4,
//! p6 inside SE(2), and the cubic space group P432 inside SE(3).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{generate_platonic, FiniteRotationGroup, PlatonicKind};
use crate::lie::{wrap_angle, PlanarMotion, Rotation, Se2Metric, SpatialMotion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WallpaperKind {
    P1,
    P2,
    P3,
    P4,
    P6,
}

impl WallpaperKind {
    pub const ALL: [WallpaperKind; 5] = [
        WallpaperKind::P1,
        WallpaperKind::P2,
        WallpaperKind::P4,
        WallpaperKind::P3,
        WallpaperKind::P6,
    ];

    /// Order of the rotational point group.
    pub fn rotation_order(self) -> usize {
        match self {
            WallpaperKind::P1 => 1,
            WallpaperKind::P2 => 2,
            WallpaperKind::P3 => 3,
            WallpaperKind::P4 => 4,
            WallpaperKind::P6 => 6,
        }
    }
}

impl fmt::Display for WallpaperKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WallpaperKind::P1 => "p1",
            WallpaperKind::P2 => "p2",
            WallpaperKind::P3 => "p3",
            WallpaperKind::P4 => "p4",
            WallpaperKind::P6 => "p6",
        };
        f.write_str(s)
    }
}

impl FromStr for WallpaperKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(WallpaperKind::P1),
            "p2" => Ok(WallpaperKind::P2),
            "p3" => Ok(WallpaperKind::P3),
            "p4" => Ok(WallpaperKind::P4),
            "p6" => Ok(WallpaperKind::P6),
            other => Err(Error::Validation(format!("unknown wallpaper group `{other}`"))),
        }
    }
}

/// `γ_{lmn}`: rotation by 2πl/r followed by translation m·a1 + n·a2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WallpaperElement {
    pub l: usize,
    pub m: i64,
    pub n: i64,
}

impl WallpaperElement {
    pub fn new(l: usize, m: i64, n: i64) -> Self {
        WallpaperElement { l, m, n }
    }

    pub fn identity() -> Self {
        WallpaperElement::new(0, 0, 0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WallpaperGroup {
    kind: WallpaperKind,
    a1: Vector2<f64>,
    a2: Vector2<f64>,
}

/// Default instance of a wallpaper group with lattice scale `scale`.
///
/// p3/p6 use the hexagonal basis (a, 0), (a/2, a√3/2); p4 the square basis;
/// p1/p2 the oblique basis (a, 0), (0.35a, 0.9a).
pub fn wallpaper(kind: WallpaperKind, scale: f64) -> Result<WallpaperGroup> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Validation(format!("lattice scale must be > 0, got {scale}")));
    }
    let a = scale;
    let (a1, a2) = match kind {
        WallpaperKind::P1 | WallpaperKind::P2 => (Vector2::new(a, 0.0), Vector2::new(0.35 * a, 0.9 * a)),
        WallpaperKind::P3 | WallpaperKind::P6 => {
            (Vector2::new(a, 0.0), Vector2::new(0.5 * a, 0.5 * 3f64.sqrt() * a))
        }
        WallpaperKind::P4 => (Vector2::new(a, 0.0), Vector2::new(0.0, a)),
    };
    WallpaperGroup::with_basis(kind, a1, a2)
}

impl WallpaperGroup {
    /// Checks the basis is non-degenerate and invariant under the point rotations.
    pub fn with_basis(kind: WallpaperKind, a1: Vector2<f64>, a2: Vector2<f64>) -> Result<Self> {
        let g = WallpaperGroup { kind, a1, a2 };
        if g.basis().determinant().abs() < 1e-12 {
            return Err(Error::Validation("degenerate lattice basis".into()));
        }
        let rot = Matrix2::new(
            g.rotation_angle(1).cos(),
            -g.rotation_angle(1).sin(),
            g.rotation_angle(1).sin(),
            g.rotation_angle(1).cos(),
        );
        for v in [a1, a2] {
            let c = g.coords(&(rot * v));
            if (c - c.map(f64::round)).amax() > 1e-9 {
                return Err(Error::Validation(format!(
                    "lattice basis is not invariant under the rotations of {kind}"
                )));
            }
        }
        Ok(g)
    }

    pub fn kind(&self) -> WallpaperKind {
        self.kind
    }

    pub fn rotation_order(&self) -> usize {
        self.kind.rotation_order()
    }

    pub fn basis_vectors(&self) -> (Vector2<f64>, Vector2<f64>) {
        (self.a1, self.a2)
    }

    fn basis(&self) -> Matrix2<f64> {
        Matrix2::from_columns(&[self.a1, self.a2])
    }

    /// Lattice coordinates of a translation.
    pub fn coords(&self, t: &Vector2<f64>) -> Vector2<f64> {
        self.basis()
            .try_inverse()
            .expect("non-degenerate basis")
            * t
    }

    pub fn rotation_angle(&self, l: usize) -> f64 {
        2.0 * PI * (l % self.rotation_order()) as f64 / self.rotation_order() as f64
    }

    pub fn translation(&self, m: i64, n: i64) -> Vector2<f64> {
        self.a1 * m as f64 + self.a2 * n as f64
    }

    pub fn motion(&self, e: &WallpaperElement) -> PlanarMotion {
        PlanarMotion::new(self.rotation_angle(e.l), self.translation(e.m, e.n))
    }

    /// Group product, read back onto lattice coordinates.
    pub fn compose(&self, a: &WallpaperElement, b: &WallpaperElement) -> WallpaperElement {
        let p = self.motion(a).compose(&self.motion(b));
        let c = self.coords(&p.t);
        WallpaperElement::new(
            (a.l + b.l) % self.rotation_order(),
            c.x.round() as i64,
            c.y.round() as i64,
        )
    }

    pub fn inverse(&self, a: &WallpaperElement) -> WallpaperElement {
        let p = self.motion(a).inverse();
        let c = self.coords(&p.t);
        let r = self.rotation_order();
        WallpaperElement::new((r - a.l % r) % r, c.x.round() as i64, c.y.round() as i64)
    }

    /// All elements whose translation has norm ≤ `radius`.
    pub fn enumerate_elements(&self, radius: f64) -> Vec<WallpaperElement> {
        let inv = self.basis().try_inverse().expect("non-degenerate basis");
        let bm = (inv.row(0).norm() * radius).ceil() as i64;
        let bn = (inv.row(1).norm() * radius).ceil() as i64;
        let mut out = Vec::new();
        for m in -bm..=bm {
            for n in -bn..=bn {
                if self.translation(m, n).norm() <= radius + 1e-12 {
                    for l in 0..self.rotation_order() {
                        out.push(WallpaperElement::new(l, m, n));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Nearest lattice point to `t` (ties resolved toward the lexicographically
    /// smallest coordinates).
    pub fn nearest_lattice_point(&self, t: &Vector2<f64>) -> (i64, i64) {
        let c = self.coords(t);
        let (m0, n0) = (c.x.round() as i64, c.y.round() as i64);
        let mut best = (m0, n0);
        let mut best_d = (t - self.translation(m0, n0)).norm_squared();
        for dm in -2..=2 {
            for dn in -2..=2 {
                let (m, n) = (m0 + dm, n0 + dn);
                let d = (t - self.translation(m, n)).norm_squared();
                if d < best_d - 1e-15 || ((d - best_d).abs() <= 1e-15 && (m, n) < best) {
                    best = (m, n);
                    best_d = d;
                }
            }
        }
        best
    }

    /// The group element whose Voronoi cell contains `g`, and the residual
    /// `γ⁻¹ g` in the identity cell.
    pub fn locate(&self, g: &PlanarMotion) -> (WallpaperElement, PlanarMotion) {
        let r = self.rotation_order() as f64;
        let l = ((g.theta() * r / (2.0 * PI)).round_ties_even() as i64).rem_euclid(r as i64) as usize;
        let (m, n) = self.nearest_lattice_point(&g.t);
        let e = WallpaperElement::new(l, m, n);
        let residual = self.motion(&e).inverse().compose(g);
        (e, residual)
    }

    /// Voronoi cell of the identity under the left-invariant metric: the
    /// product of a θ-interval (−π/r, π/r) and the lattice Voronoi polygon.
    pub fn voronoi_domain(&self, metric: Se2Metric) -> Se2Domain {
        let half = PI / self.rotation_order() as f64;
        let neighbors = self.neighbor_vectors();
        let polygon = voronoi_polygon(&neighbors);
        Se2Domain {
            group: self.kind,
            theta_min: -half,
            theta_max: half,
            polygon,
            neighbors,
            metric_weight: metric.weight(),
        }
    }

    fn neighbor_vectors(&self) -> Vec<Vector2<f64>> {
        let mut v = Vec::new();
        for m in -2i64..=2 {
            for n in -2i64..=2 {
                if (m, n) != (0, 0) {
                    v.push(self.translation(m, n));
                }
            }
        }
        v
    }
}

/// `decompose_p4`: rounds θ/(π/2), x/a, y/a (ties to even) and returns
/// `(γ, γ⁻¹ g)`.
pub fn decompose_p4(g: &PlanarMotion, group: &WallpaperGroup) -> Result<(WallpaperElement, PlanarMotion)> {
    if group.kind() != WallpaperKind::P4 {
        return Err(Error::Validation(format!("decompose_p4 needs p4, got {}", group.kind())));
    }
    let (a1, a2) = group.basis_vectors();
    if a1.y != 0.0 || a2.x != 0.0 || a1.x != a2.y {
        return Err(Error::Validation("decompose_p4 needs an axis-aligned square basis".into()));
    }
    let a = a1.x;
    let l = ((g.theta() / (PI / 2.0)).round_ties_even() as i64).rem_euclid(4) as usize;
    let m = (g.t.x / a).round_ties_even() as i64;
    let n = (g.t.y / a).round_ties_even() as i64;
    let e = WallpaperElement::new(l, m, n);
    let residual = group.motion(&e).inverse().compose(g);
    Ok((e, residual))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Fundamental domain of a wallpaper group in ℝ² × (−π, π].
#[derive(Clone, Debug, PartialEq)]
pub struct Se2Domain {
    pub group: WallpaperKind,
    pub theta_min: f64,
    pub theta_max: f64,
    /// Counter-clockwise vertices of the translational cross-section.
    pub polygon: Vec<Vector2<f64>>,
    neighbors: Vec<Vector2<f64>>,
    pub metric_weight: f64,
}

impl Se2Domain {
    pub fn theta_extent(&self) -> f64 {
        self.theta_max - self.theta_min
    }

    pub fn contains(&self, g: &PlanarMotion) -> Membership {
        const EPS: f64 = 1e-12;
        let th = wrap_angle(g.theta());
        let mut on_boundary = false;
        if self.theta_extent() < 2.0 * PI - EPS {
            let margin = self.theta_max - th.abs();
            if margin < -EPS {
                return Membership::Outside;
            }
            on_boundary |= margin <= EPS;
        }
        for v in &self.neighbors {
            let margin = 0.5 * v.norm_squared() - g.t.dot(v);
            if margin < -EPS {
                return Membership::Outside;
            }
            on_boundary |= margin <= EPS;
        }
        if on_boundary {
            Membership::Boundary
        } else {
            Membership::Interior
        }
    }

    pub fn to_json(&self) -> Se2DomainFile {
        Se2DomainFile {
            group: self.group,
            theta_min: self.theta_min,
            theta_max: self.theta_max,
            polygon: self.polygon.iter().map(|p| [p.x, p.y]).collect(),
            metric_weight: self.metric_weight,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Se2DomainFile {
    pub group: WallpaperKind,
    pub theta_min: f64,
    pub theta_max: f64,
    pub polygon: Vec<[f64; 2]>,
    pub metric_weight: f64,
}

/// Intersection of the half-planes `x·v ≤ |v|²/2`, by clipping a large square.
fn voronoi_polygon(neighbors: &[Vector2<f64>]) -> Vec<Vector2<f64>> {
    let big = neighbors.iter().map(|v| v.norm()).fold(1.0, f64::max) * 10.0;
    let mut poly = vec![
        Vector2::new(-big, -big),
        Vector2::new(big, -big),
        Vector2::new(big, big),
        Vector2::new(-big, big),
    ];
    for v in neighbors {
        let c = 0.5 * v.norm_squared();
        let inside = |p: &Vector2<f64>| p.dot(v) <= c;
        let mut out = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let p = poly[i];
            let q = poly[(i + 1) % poly.len()];
            let (pin, qin) = (inside(&p), inside(&q));
            if pin {
                out.push(p);
            }
            if pin != qin {
                let s = (c - p.dot(v)) / (q - p).dot(v);
                out.push(p + (q - p) * s);
            }
        }
        poly = out;
    }
    // drop near-duplicate vertices produced by redundant half-planes
    let mut dedup: Vec<Vector2<f64>> = Vec::with_capacity(poly.len());
    for p in poly {
        if dedup.last().is_none_or(|q: &Vector2<f64>| (p - q).norm() > 1e-12) {
            dedup.push(p);
        }
    }
    if dedup.len() > 1 && (dedup[0] - dedup[dedup.len() - 1]).norm() <= 1e-12 {
        dedup.pop();
    }
    dedup
}

/// `(p, m, n, o)`: point rotation `p` of the octahedral group followed by
/// translation a·(m, n, o).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpaceGroupElement {
    pub p: usize,
    pub m: i64,
    pub n: i64,
    pub o: i64,
}

/// The symmorphic space group P432: octahedral point group ⋉ cubic lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceGroupP432 {
    point_group: FiniteRotationGroup,
    spacing: f64,
}

impl SpaceGroupP432 {
    pub fn new(spacing: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::Validation(format!("lattice spacing must be > 0, got {spacing}")));
        }
        Ok(SpaceGroupP432 {
            point_group: generate_platonic(PlatonicKind::Octahedral),
            spacing,
        })
    }

    pub fn point_group(&self) -> &FiniteRotationGroup {
        &self.point_group
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn motion(&self, e: &SpaceGroupElement) -> SpatialMotion {
        SpatialMotion::new(
            *self.point_group.get(e.p),
            Vector3::new(e.m as f64, e.n as f64, e.o as f64) * self.spacing,
        )
    }

    pub fn enumerate_elements(&self, radius: f64) -> Vec<SpaceGroupElement> {
        let b = (radius / self.spacing).floor() as i64 + 1;
        let mut out = Vec::new();
        for m in -b..=b {
            for n in -b..=b {
                for o in -b..=b {
                    let t = Vector3::new(m as f64, n as f64, o as f64) * self.spacing;
                    if t.norm() <= radius + 1e-12 {
                        for p in 0..self.point_group.len() {
                            out.push(SpaceGroupElement { p, m, n, o });
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Nearest cubic lattice point (decimal rounding of t/a, ties to even).
    pub fn nearest_lattice_point(&self, t: &Vector3<f64>) -> [i64; 3] {
        let c = t / self.spacing;
        [
            c.x.round_ties_even() as i64,
            c.y.round_ties_even() as i64,
            c.z.round_ties_even() as i64,
        ]
    }

    pub fn lattice_translation(&self, c: [i64; 3]) -> Vector3<f64> {
        Vector3::new(c[0] as f64, c[1] as f64, c[2] as f64) * self.spacing
    }

    pub fn rotation(&self, p: usize) -> &Rotation {
        self.point_group.get(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::compose_se2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn point_orders() {
        for (k, r) in [
            (WallpaperKind::P1, 1),
            (WallpaperKind::P2, 2),
            (WallpaperKind::P3, 3),
            (WallpaperKind::P4, 4),
            (WallpaperKind::P6, 6),
        ] {
            assert_eq!(wallpaper(k, 1.0).unwrap().rotation_order(), r);
        }
        assert!("p5".parse::<WallpaperKind>().is_err());
        assert!(wallpaper(WallpaperKind::P4, 0.0).is_err());
    }

    #[test]
    fn basis_must_respect_rotations() {
        let bad = WallpaperGroup::with_basis(
            WallpaperKind::P4,
            Vector2::new(1.0, 0.0),
            Vector2::new(0.3, 1.0),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn enumeration_counts() {
        let p4 = wallpaper(WallpaperKind::P4, 1.0).unwrap();
        assert_eq!(p4.enumerate_elements(0.0).len(), 4);
        let p432 = SpaceGroupP432::new(1.0).unwrap();
        assert_eq!(p432.enumerate_elements(0.0).len(), 24);
    }

    #[test]
    fn p432_radius_one_and_a_half() {
        // brute-force integer points in the closed ball of radius 1.5
        let mut count = 0;
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                for z in -2i64..=2 {
                    if ((x * x + y * y + z * z) as f64) <= 2.25 {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 19);
        let p432 = SpaceGroupP432::new(1.0).unwrap();
        assert_eq!(p432.enumerate_elements(1.5).len(), 24 * count);
    }

    #[test]
    fn theta_extents() {
        let w = Se2Metric::default();
        let ext = |k| wallpaper(k, 1.0).unwrap().voronoi_domain(w);
        assert_eq!(ext(WallpaperKind::P4).theta_max, PI / 4.0);
        assert_eq!(ext(WallpaperKind::P2).theta_min, -PI / 2.0);
        assert_eq!(ext(WallpaperKind::P3).theta_max, PI / 3.0);
        assert_eq!(ext(WallpaperKind::P4).polygon.len(), 4);
        assert_eq!(ext(WallpaperKind::P3).polygon.len(), 6);
        assert_eq!(ext(WallpaperKind::P1).polygon.len(), 6);
        // regular hexagon: all vertices at the same radius
        let hex = ext(WallpaperKind::P6).polygon;
        let r0 = hex[0].norm();
        assert!(hex.iter().all(|p| (p.norm() - r0).abs() < 1e-12));
    }

    #[test]
    fn decompose_examples() {
        let p4 = wallpaper(WallpaperKind::P4, 1.0).unwrap();
        let (e, res) = decompose_p4(&PlanarMotion::identity(), &p4).unwrap();
        assert_eq!(e, WallpaperElement::identity());
        assert_eq!(res, PlanarMotion::identity());
        let g = PlanarMotion::new(36f64.to_radians(), Vector2::new(3.236, -2.4));
        let (e, _) = decompose_p4(&g, &p4).unwrap();
        assert_eq!((e.m, e.n), (3, -2));
        let p3 = wallpaper(WallpaperKind::P3, 1.0).unwrap();
        assert!(decompose_p4(&g, &p3).is_err());
    }

    #[test]
    fn decompose_matches_bruteforce_and_tiles() {
        let p4 = wallpaper(WallpaperKind::P4, 1.0).unwrap();
        let metric = Se2Metric::default();
        let domain = p4.voronoi_domain(metric);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let g = PlanarMotion::new(
                rng.random_range(-PI..PI),
                Vector2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            );
            let (e, res) = decompose_p4(&g, &p4).unwrap();
            let best = p4
                .enumerate_elements(g.t.norm() + 2.0)
                .into_iter()
                .min_by(|a, b| {
                    metric
                        .distance(&g, &p4.motion(a))
                        .total_cmp(&metric.distance(&g, &p4.motion(b)))
                })
                .unwrap();
            assert_eq!(e, best);
            assert_ne!(domain.contains(&res), Membership::Outside);
            let back = compose_se2(&p4.motion(&e), &res);
            assert!((back.t - g.t).norm() < 1e-12);
            assert!(wrap_angle(back.theta() - g.theta()).abs() < 1e-12);
        }
    }

    #[test]
    fn p4_closure_on_small_ball() {
        let p4 = wallpaper(WallpaperKind::P4, 1.0).unwrap();
        let elems = p4.enumerate_elements(1.0);
        for a in &elems {
            for b in &elems {
                let c = p4.compose(a, b);
                let expect = p4.motion(a).compose(&p4.motion(b));
                let got = p4.motion(&c);
                assert!((got.t - expect.t).norm() < 1e-12);
                assert!(wrap_angle(got.theta() - expect.theta()).abs() < 1e-12);
            }
            let e = p4.compose(a, &p4.inverse(a));
            assert_eq!(e, WallpaperElement::identity());
        }
    }

    #[test]
    fn locate_agrees_with_bruteforce_for_oblique_lattice() {
        let p2 = wallpaper(WallpaperKind::P2, 1.0).unwrap();
        let metric = Se2Metric::default();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let g = PlanarMotion::new(
                rng.random_range(-PI..PI),
                Vector2::new(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)),
            );
            let (e, res) = p2.locate(&g);
            let best = p2
                .enumerate_elements(g.t.norm() + 2.0)
                .into_iter()
                .min_by(|a, b| {
                    metric
                        .distance(&g, &p2.motion(a))
                        .total_cmp(&metric.distance(&g, &p2.motion(b)))
                })
                .unwrap();
            assert_eq!(e, best);
            assert_ne!(p2.voronoi_domain(metric).contains(&res), Membership::Outside);
        }
    }
}
