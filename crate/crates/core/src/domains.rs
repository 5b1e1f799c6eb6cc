//! Voronoi fundamental domains on SO(3) for coset spaces `H\SO(3)` and
//! double-coset spaces `H\SO(3)/K`, the cover sets used by two-stage
//! decoding, and the tetrahedral wedge dividing the icosahedral coset cell
//! into 60 conjugated pieces.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crystal::Membership;
use crate::error::{Error, Result};
use crate::groups::{trivial_intersection, FiniteRotationGroup};
use crate::lie::so3::trace_dot;
use crate::lie::{angle_from_trace, random_rotation, AxisAngleVector, Rotation};
use crate::tol;

pub(crate) type Flat = [f64; 9];

#[inline]
pub(crate) fn flat(r: &Rotation) -> Flat {
    *r.as_flat()
}

/// Haar samples for chunk `c` of a seeded stream; chunking keeps results
/// independent of the thread count.
pub(crate) fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

pub(crate) const CHUNK: usize = 4096;

/// `n` Haar-random rotations from `seed`, identical for any thread count.
pub fn haar_rotations(n: usize, seed: u64) -> Vec<Rotation> {
    (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(move |_| random_rotation(&mut rng))
        })
        .collect()
}

/// Classifies `t0` (trace against the centre) against competing traces.
fn classify(t0: f64, others: impl Iterator<Item = f64>) -> Membership {
    let mut boundary = false;
    for t in others {
        if t > t0 + tol::TRACE {
            return Membership::Outside;
        }
        if t >= t0 - tol::TRACE {
            boundary = true;
        }
    }
    if boundary {
        Membership::Boundary
    } else {
        Membership::Interior
    }
}

/// `F_{H\SO(3)}`: rotations closer to I than to any other `h ∈ H`.
#[derive(Clone, Debug)]
pub struct CosetDomain {
    group: FiniteRotationGroup,
    flat: Vec<Flat>,
}

impl CosetDomain {
    pub fn new(group: FiniteRotationGroup) -> Self {
        let flat = group.elements().iter().map(flat).collect();
        CosetDomain { group, flat }
    }

    pub fn group(&self) -> &FiniteRotationGroup {
        &self.group
    }

    pub fn membership(&self, r: &Rotation) -> Membership {
        let m = r.as_flat();
        let t0 = trace_dot(&self.flat[0], m);
        classify(t0, self.flat[1..].iter().map(|h| trace_dot(h, m)))
    }

    /// Index of the nearest tile centre `h_i` (smallest index on exact ties).
    #[inline]
    pub fn nearest(&self, r: &Rotation) -> usize {
        let m = r.as_flat();
        let mut best = 0;
        let mut best_t = f64::NEG_INFINITY;
        for (i, h) in self.flat.iter().enumerate() {
            let t = trace_dot(h, m);
            if t > best_t {
                best_t = t;
                best = i;
            }
        }
        best
    }

    /// `(i*, h_i*ᵀ R)` with `h_i*ᵀ R` in the identity cell.
    #[inline]
    pub fn pull_back(&self, r: &Rotation) -> (usize, Rotation) {
        let i = self.nearest(r);
        (i, self.group.get(i).inverse() * *r)
    }
}

/// `coset_membership` in free-function form.
pub fn coset_membership(d: &CosetDomain, r: &Rotation) -> Membership {
    d.membership(r)
}

/// `F_{H\SO(3)/K}`: rotations closer to I than to any product `h k ≠ I`.
#[derive(Clone, Debug)]
pub struct DoubleCosetDomain {
    coset: CosetDomain,
    k: FiniteRotationGroup,
    /// `products[i * |K| + j] = h_i k_j`.
    products: Vec<Flat>,
}

/// Best and runner-up words of an exhaustive scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NearestWord {
    pub i: usize,
    pub j: usize,
    pub trace: f64,
    pub runner_up: (usize, usize),
    pub runner_up_trace: f64,
}

impl NearestWord {
    pub fn gap(&self) -> f64 {
        self.trace - self.runner_up_trace
    }
}

impl DoubleCosetDomain {
    pub fn new(h: FiniteRotationGroup, k: FiniteRotationGroup) -> Result<Self> {
        if !trivial_intersection(&h, &k) {
            return Err(Error::Validation(format!(
                "groups {} and {} intersect non-trivially",
                h.name(),
                k.name()
            )));
        }
        let mut products = Vec::with_capacity(h.len() * k.len());
        for a in h.elements() {
            for b in k.elements() {
                products.push(flat(&(a * b)));
            }
        }
        Ok(DoubleCosetDomain {
            coset: CosetDomain::new(h),
            k,
            products,
        })
    }

    pub fn h(&self) -> &FiniteRotationGroup {
        self.coset.group()
    }

    pub fn k(&self) -> &FiniteRotationGroup {
        &self.k
    }

    pub fn coset(&self) -> &CosetDomain {
        &self.coset
    }

    pub fn word_count(&self) -> usize {
        self.products.len()
    }

    #[inline]
    pub(crate) fn product(&self, i: usize, j: usize) -> &Flat {
        &self.products[i * self.k.len() + j]
    }

    pub fn center(&self, i: usize, j: usize) -> Rotation {
        self.h().get(i) * self.k.get(j)
    }

    /// `h_iᵀ R k_jᵀ`.
    pub fn residual(&self, r: &Rotation, i: usize, j: usize) -> Rotation {
        (self.h().get(i).inverse() * *r) * self.k.get(j).inverse()
    }

    pub fn membership(&self, r: &Rotation) -> Membership {
        let m = r.as_flat();
        let t0 = trace_dot(&self.products[0], m);
        classify(t0, self.products[1..].iter().map(|p| trace_dot(p, m)))
    }

    /// Exhaustive scan over every product. Exact ties go to the
    /// lexicographically smallest `(i, j)`.
    pub fn nearest_word(&self, r: &Rotation) -> NearestWord {
        let m = r.as_flat();
        let nk = self.k.len();
        let mut best = (0usize, f64::NEG_INFINITY);
        let mut second = (0usize, f64::NEG_INFINITY);
        for (p, c) in self.products.iter().enumerate() {
            let t = trace_dot(c, m);
            if t > best.1 {
                second = best;
                best = (p, t);
            } else if t > second.1 {
                second = (p, t);
            }
        }
        NearestWord {
            i: best.0 / nk,
            j: best.0 % nk,
            trace: best.1,
            runner_up: (second.0 / nk, second.0 % nk),
            runner_up_trace: second.1,
        }
    }

    /// Sampled extent `sup_{R ∈ F} ρ(R, I)`. Uniform samples of F are
    /// obtained by pulling Haar samples back by their decoded word; the first
    /// `n` samples of a seed are the same for every `n`, so the estimate is
    /// monotone in `samples`.
    pub fn extent(&self, samples: usize, seed: u64) -> Result<ExtentEstimate> {
        if samples == 0 {
            return Err(Error::Validation("extent needs at least one sample".into()));
        }
        let chunks = samples.div_ceil(CHUNK);
        let max_trace_gap = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(seed, c as u64);
                let n = CHUNK.min(samples - c * CHUNK);
                (0..n)
                    .map(|_| {
                        let r = random_rotation(&mut rng);
                        self.nearest_word(&r).trace
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| f64::INFINITY, f64::min);
        Ok(ExtentEstimate {
            extent: angle_from_trace(max_trace_gap),
            samples,
        })
    }

    /// Half the smallest distance from I to a non-identity centre: a lower
    /// bound on the extent.
    pub fn packing_radius(&self) -> f64 {
        self.products[1..]
            .iter()
            .map(|p| angle_from_trace(p[0] + p[4] + p[8]))
            .fold(f64::INFINITY, f64::min)
            * 0.5
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtentEstimate {
    pub extent: f64,
    pub samples: usize,
}

pub fn double_coset_membership(d: &DoubleCosetDomain, r: &Rotation) -> Membership {
    d.membership(r)
}

/// Word pairs whose shifted domains blanket the coset cell, closest centres first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSet {
    pub h: String,
    pub k: String,
    /// Axis-angle of the conjugating rotation `K = g H gᵀ`, when known.
    pub g: Option<[f64; 3]>,
    pub probe_samples: usize,
    pub seed: u64,
    pub pairs: Vec<(usize, usize)>,
}

impl CoverSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// JSON with `g` rounded to 15 significant digits.
    pub fn to_json_string(&self) -> Result<String> {
        let mut c = self.clone();
        c.g = c.g.map(|v| v.map(round_sig15));
        Ok(serde_json::to_string_pretty(&c)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Checks indices against the domain's groups.
    pub fn check_against(&self, d: &DoubleCosetDomain) -> Result<()> {
        if self
            .pairs
            .iter()
            .any(|&(i, j)| i >= d.h().len() || j >= d.k().len())
        {
            return Err(Error::Validation("cover pair index out of range".into()));
        }
        if self.is_empty() {
            return Err(Error::Validation("empty cover".into()));
        }
        Ok(())
    }
}

pub(crate) fn round_sig15(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.14e}").parse().unwrap_or(v)
}

/// All `(i, j)` sorted by `ρ(h_i k_j, I)` ascending; ties keep lexicographic order.
pub fn pairs_by_distance(d: &DoubleCosetDomain) -> Vec<(usize, usize)> {
    let nk = d.k().len();
    let mut idx: Vec<usize> = (0..d.word_count()).collect();
    let trace = |p: usize| {
        let c = &d.products[p];
        c[0] + c[4] + c[8]
    };
    idx.sort_by(|&a, &b| trace(b).total_cmp(&trace(a)).then(a.cmp(&b)));
    idx.into_iter().map(|p| (p / nk, p % nk)).collect()
}

/// Greedy prefix of [`pairs_by_distance`] long enough that every probe
/// sample of the coset cell has its nearest centre inside the prefix.
pub fn build_cover(d: &DoubleCosetDomain, probe_samples: usize, seed: u64) -> Result<CoverSet> {
    if probe_samples == 0 {
        return Err(Error::Validation("cover needs at least one probe sample".into()));
    }
    let order = pairs_by_distance(d);
    let nk = d.k().len();
    let mut rank = vec![0usize; d.word_count()];
    for (r, &(i, j)) in order.iter().enumerate() {
        rank[i * nk + j] = r;
    }
    let chunks = probe_samples.div_ceil(CHUNK);
    let needed = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let n = CHUNK.min(probe_samples - c * CHUNK);
            (0..n)
                .map(|_| {
                    let r = random_rotation(&mut rng);
                    let (_, pulled) = d.coset().pull_back(&r);
                    let w = d.nearest_word(&pulled);
                    rank[w.i * nk + w.j]
                })
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    Ok(CoverSet {
        h: d.h().name().to_string(),
        k: d.k().name().to_string(),
        g: None,
        probe_samples,
        seed,
        pairs: order[..=needed].to_vec(),
    })
}

/// Fraction of fresh probe samples of the coset cell whose nearest centre
/// is outside the cover. Zero for a valid cover.
pub fn uncovered_samples(d: &DoubleCosetDomain, cover: &CoverSet, samples: usize, seed: u64) -> usize {
    let nk = d.k().len();
    let mut inside = vec![false; d.word_count()];
    for &(i, j) in &cover.pairs {
        inside[i * nk + j] = true;
    }
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let n = CHUNK.min(samples - c * CHUNK);
            (0..n)
                .filter(|_| {
                    let r = random_rotation(&mut rng);
                    let (_, pulled) = d.coset().pull_back(&r);
                    let w = d.nearest_word(&pulled);
                    !inside[w.i * nk + w.j]
                })
                .count()
        })
        .sum()
}

/// One of the 60 tetrahedral wedges of the dodecahedral cell, bounded in
/// the Lie algebra by three planes through the origin.
#[derive(Clone, Debug)]
pub struct WedgeDomain {
    coset: CosetDomain,
    base_normals: [Vector3<f64>; 3],
    /// `normals[j][k] = h_j n_k`: the planes of the wedge conjugated by `h_j`.
    normals: Vec<[Vector3<f64>; 3]>,
}

impl WedgeDomain {
    pub fn from_normals(group: FiniteRotationGroup, base_normals: [Vector3<f64>; 3]) -> Self {
        let normals = group
            .elements()
            .iter()
            .map(|h| base_normals.map(|n| h.transform(&n)))
            .collect();
        WedgeDomain {
            coset: CosetDomain::new(group),
            base_normals,
            normals,
        }
    }

    pub fn group(&self) -> &FiniteRotationGroup {
        self.coset.group()
    }

    pub fn coset(&self) -> &CosetDomain {
        &self.coset
    }

    /// Unit directions of the three edges of the base cone.
    pub fn edge_rays(&self) -> [Vector3<f64>; 3] {
        let n = &self.base_normals;
        let ray = |a: usize, b: usize, c: usize| {
            let d = n[a].cross(&n[b]).normalize();
            if d.dot(&n[c]) < 0.0 {
                -d
            } else {
                d
            }
        };
        [ray(0, 1, 2), ray(1, 2, 0), ray(2, 0, 1)]
    }

    pub fn base_normals(&self) -> &[Vector3<f64>; 3] {
        &self.base_normals
    }

    /// Whether direction `x` lies in wedge copy `j` (slack `slack`).
    #[inline]
    pub fn in_copy(&self, j: usize, x: &Vector3<f64>, slack: f64) -> bool {
        self.normals[j].iter().all(|n| n.dot(x) >= -slack)
    }

    /// Smallest `j` whose conjugated wedge contains the direction `x`.
    /// `x` may be any positive multiple of the logarithm. Returns the index
    /// and the number of plane tests performed.
    #[inline]
    pub fn locate_direction(&self, x: &Vector3<f64>) -> Option<(usize, usize)> {
        let mut tests = 0;
        for (j, planes) in self.normals.iter().enumerate() {
            let mut inside = true;
            for n in planes {
                tests += 1;
                if n.dot(x) < -tol::PLANE {
                    inside = false;
                    break;
                }
            }
            if inside {
                return Some((j, tests));
            }
        }
        None
    }

    /// Number of conjugated wedges containing `x` within the band.
    pub fn multiplicity(&self, x: &Vector3<f64>, band: f64) -> usize {
        (0..self.normals.len())
            .filter(|&j| self.in_copy(j, x, band))
            .count()
    }

    /// Membership of a rotation in the base wedge (coset cell ∩ base cone).
    pub fn membership(&self, q: &Rotation) -> Membership {
        let cell = self.coset.membership(q);
        if cell == Membership::Outside {
            return Membership::Outside;
        }
        let x = q.skew_direction();
        let mut boundary = cell == Membership::Boundary;
        let scale = x.norm().max(1e-300);
        for n in &self.base_normals {
            let s = n.dot(&x) / scale;
            if s < -tol::PLANE_BAND {
                return Membership::Outside;
            }
            boundary |= s <= tol::PLANE_BAND;
        }
        if x.norm() < 1e-15 {
            boundary = true;
        }
        if boundary {
            Membership::Boundary
        } else {
            Membership::Interior
        }
    }

    pub fn to_file(&self) -> WedgeFile {
        WedgeFile {
            group: self.group().name().to_string(),
            base_normals: self.base_normals.map(|n| [n.x, n.y, n.z].map(round_sig15)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeFile {
    pub group: String,
    pub base_normals: [[f64; 3]; 3],
}

impl WedgeFile {
    pub fn into_domain(self, group: FiniteRotationGroup) -> Result<WedgeDomain> {
        if group.name() != self.group {
            return Err(Error::Validation(format!(
                "wedge was built for {}, got {}",
                self.group,
                group.name()
            )));
        }
        let n = self.base_normals.map(|v| Vector3::new(v[0], v[1], v[2]));
        Ok(WedgeDomain::from_normals(group, n))
    }
}

/// Unit axes (both signs) of the elements with the given rotation angle.
fn axes_with_angle(group: &FiniteRotationGroup, angle: f64) -> Vec<Vector3<f64>> {
    let mut axes: Vec<Vector3<f64>> = Vec::new();
    for r in group.elements() {
        if (r.angle() - angle).abs() < 1e-6 {
            let a = r.skew_direction().normalize();
            for cand in [a, -a] {
                if !axes.iter().any(|b| (b - cand).norm() < 1e-6) {
                    axes.push(cand);
                }
            }
        }
    }
    axes
}

/// Builds the wedge spanned by a pentagonal face centre and two adjacent
/// vertices of the dodecahedral cell.
pub fn build_wedge(h: &FiniteRotationGroup) -> Result<WedgeDomain> {
    if h.len() != 60 {
        return Err(Error::Validation(format!(
            "wedge construction needs the icosahedral group, got order {}",
            h.len()
        )));
    }
    let faces = axes_with_angle(h, 2.0 * PI / 5.0);
    let verts = axes_with_angle(h, 2.0 * PI / 3.0);
    if faces.len() != 12 || verts.len() != 20 {
        return Err(Error::Validation("group is not icosahedral".into()));
    }
    let a = faces[0];
    let mut around: Vec<Vector3<f64>> = verts.clone();
    around.sort_by(|u, v| v.dot(&a).total_cmp(&u.dot(&a)));
    let ring = &around[..5];
    let v1 = ring[0];
    let v2 = ring[1..]
        .iter()
        .copied()
        .filter(|v| a.dot(&v1.cross(v)) > 0.0)
        .max_by(|u, v| u.dot(&v1).total_cmp(&v.dot(&v1)))
        .ok_or_else(|| Error::Validation("could not find adjacent face vertices".into()))?;
    let orient = |n: Vector3<f64>, toward: &Vector3<f64>| {
        let n = n.normalize();
        if n.dot(toward) < 0.0 {
            -n
        } else {
            n
        }
    };
    let normals = [
        orient(a.cross(&v1), &v2),
        orient(a.cross(&v2), &v1),
        orient(v1.cross(&v2), &a),
    ];
    Ok(WedgeDomain::from_normals(h.clone(), normals))
}

/// Index of the conjugated wedge containing `x`. `exp(x)` must lie in the
/// coset cell.
pub fn wedge_locate(w: &WedgeDomain, x: &AxisAngleVector) -> Result<usize> {
    let r = x.exp();
    if w.coset().membership(&r) == Membership::Outside {
        return Err(Error::OutOfDomain("dodecahedral coset cell"));
    }
    w.locate_direction(x.vector())
        .map(|(j, _)| j)
        .ok_or(Error::OutOfDomain("union of conjugated wedges"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{conjugate_group, generate_cyclic, generate_icosahedral, IcosahedralFrame};
    use crate::lie::{exp_so3, log_so3};

    fn ico() -> FiniteRotationGroup {
        generate_icosahedral(IcosahedralFrame::VertexUp)
    }

    #[test]
    fn coset_membership_cases() {
        let d = CosetDomain::new(ico());
        assert_eq!(d.membership(&Rotation::identity()), Membership::Interior);
        for h in &d.group().elements()[1..] {
            assert_eq!(d.membership(h), Membership::Outside);
        }
    }

    #[test]
    fn exactly_one_tile_contains_each_sample() {
        let d = CosetDomain::new(ico());
        let mut rng = chunk_rng(21, 0);
        for _ in 0..5000 {
            let r = random_rotation(&mut rng);
            let interior: Vec<usize> = (0..60)
                .filter(|&i| d.membership(&(d.group().get(i).inverse() * r)) == Membership::Interior)
                .collect();
            assert_eq!(interior, vec![d.nearest(&r)]);
        }
    }

    #[test]
    fn double_coset_requires_trivial_intersection() {
        assert!(DoubleCosetDomain::new(ico(), ico()).is_err());
    }

    #[test]
    fn double_coset_membership_cases() {
        let g = exp_so3(&Vector3::new(0.435897435897436, -0.076923076923077, -0.128205128205128));
        let d = DoubleCosetDomain::new(ico(), conjugate_group(&ico(), &g)).unwrap();
        assert_eq!(d.membership(&Rotation::identity()), Membership::Interior);
        assert_eq!(d.membership(&d.center(5, 7)), Membership::Outside);
    }

    #[test]
    fn degenerate_cover_is_single_pair() {
        let k = generate_cyclic(1, &Vector3::z()).unwrap();
        let d = DoubleCosetDomain::new(ico(), k).unwrap();
        let cover = build_cover(&d, 2000, 1).unwrap();
        assert_eq!(cover.pairs, vec![(0, 0)]);
    }

    #[test]
    fn toy_cover_is_complete() {
        let h = generate_cyclic(2, &Vector3::z()).unwrap();
        let axis = exp_so3(&Vector3::new(0.4, 0.2, 0.0)).transform(&Vector3::z());
        let k = generate_cyclic(3, &axis).unwrap();
        let d = DoubleCosetDomain::new(h, k).unwrap();
        let cover = build_cover(&d, 20_000, 2).unwrap();
        assert!(!cover.is_empty() && cover.len() <= 6);
        assert_eq!(uncovered_samples(&d, &cover, 100_000, 99), 0);
    }

    #[test]
    fn wedge_contains_origin_on_boundary() {
        let w = build_wedge(&ico()).unwrap();
        assert_eq!(w.membership(&Rotation::identity()), Membership::Boundary);
        assert_eq!(w.locate_direction(&Vector3::zeros()).map(|x| x.0), Some(0));
    }

    #[test]
    fn wedge_equivariance() {
        let w = build_wedge(&ico()).unwrap();
        // interior direction: sum of the three edge rays of the cone
        let n = w.base_normals();
        let [e0, e1, e2] = w.edge_rays();
        let interior = (e0 + e1 + e2).normalize();
        assert!(n.iter().all(|m| m.dot(&interior) > 0.0));
        let x = AxisAngleVector::new(interior * 0.2).unwrap();
        assert_eq!(wedge_locate(&w, &x).unwrap(), 0);
        for k in [1, 17, 42, 59] {
            let rotated = ico().get(k).transform(x.vector());
            let y = AxisAngleVector::new(rotated).unwrap();
            assert_eq!(wedge_locate(&w, &y).unwrap(), k);
            let conj = ico().get(k) * (x.exp() * ico().get(k).inverse());
            assert!((log_so3(&conj).unwrap().vector() - rotated).norm() < 1e-12);
        }
    }

    #[test]
    fn wedge_locate_rejects_points_outside_cell() {
        let w = build_wedge(&ico()).unwrap();
        let far = AxisAngleVector::new(Vector3::new(0.0, 0.0, 3.0)).unwrap();
        assert!(matches!(wedge_locate(&w, &far), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn wedge_file_roundtrip() {
        let w = build_wedge(&ico()).unwrap();
        let text = serde_json::to_string(&w.to_file()).unwrap();
        let file: WedgeFile = serde_json::from_str(&text).unwrap();
        let back = file.into_domain(ico()).unwrap();
        for (a, b) in back.base_normals().iter().zip(w.base_normals()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn round_to_fifteen_digits() {
        assert_eq!(round_sig15(0.435897435897436), 0.435897435897436);
        assert_eq!(round_sig15(1.0 / 3.0), 0.333333333333333);
    }
}
