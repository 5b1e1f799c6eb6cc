//! Finite rotation groups: the Platonic groups, cyclic groups, orbit
//! closure, conjugation and intersection tests.
//!
//! Element 0 is always the identity. Platonic groups are sorted by rotation
//! angle and then lexicographically by axis, so indices are stable across runs
//! and serve as alphabet letters.

use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{Matrix2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::se2::rot2;
use crate::lie::Rotation;
use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlatonicKind {
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl PlatonicKind {
    pub fn order(self) -> usize {
        match self {
            PlatonicKind::Tetrahedral => 12,
            PlatonicKind::Octahedral => 24,
            PlatonicKind::Icosahedral => 60,
        }
    }
}

/// Orientation of the icosahedral group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IcosahedralFrame {
    /// 2-fold axes along x, y and z; a 5-fold axis in the xz-plane. Contains
    /// the axis-aligned tetrahedral group.
    #[default]
    Standard,
    /// 5-fold axis along z with a vertex at (2, 0, 1)/√5; a 2-fold axis along y.
    /// The frame used by the rotational alphabets.
    VertexUp,
}

/// A finite subgroup of SO(3) with stable element indices.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteRotationGroup {
    name: String,
    elements: Vec<Rotation>,
}

impl FiniteRotationGroup {
    /// Builds a group from an element list. The list must start with the
    /// identity and be closed; both are checked.
    pub fn from_elements(name: impl Into<String>, elements: Vec<Rotation>) -> Result<Self> {
        let group = FiniteRotationGroup {
            name: name.into(),
            elements,
        };
        group.validate()?;
        Ok(group)
    }

    fn validate(&self) -> Result<()> {
        let first = self
            .elements
            .first()
            .ok_or_else(|| Error::Validation("empty group".into()))?;
        if first.frobenius_distance(&Rotation::identity()) > tol::DEDUP {
            return Err(Error::Validation("element 0 is not the identity".into()));
        }
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                if a.frobenius_distance(b) <= 1e-6 {
                    return Err(Error::Validation("duplicate group elements".into()));
                }
            }
        }
        for a in &self.elements {
            if self.index_of_within(&a.inverse(), tol::DEDUP).is_none() {
                return Err(Error::Validation("not closed under inverse".into()));
            }
            for b in &self.elements {
                if self.index_of_within(&(a * b), tol::DEDUP).is_none() {
                    return Err(Error::Validation("not closed under multiplication".into()));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Rotation] {
        &self.elements
    }

    #[inline]
    pub fn get(&self, i: usize) -> &Rotation {
        &self.elements[i]
    }

    pub fn index_of_identity(&self) -> usize {
        0
    }

    /// Index of the element within Frobenius 1e-6 of `r`.
    pub fn index_of(&self, r: &Rotation) -> Option<usize> {
        self.index_of_within(r, tol::INTERSECTION)
    }

    fn index_of_within(&self, r: &Rotation, eps: f64) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.frobenius_distance(r) <= eps)
    }

    /// `table[a * n + b]` is the index of `g_a g_b`.
    pub fn cayley_table(&self) -> Vec<usize> {
        let n = self.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &self.elements {
            for b in &self.elements {
                let idx = self
                    .index_of(&(a * b))
                    .expect("group is closed under multiplication");
                table.push(idx);
            }
        }
        table
    }

    /// `inv[a]` is the index of `g_aᵀ`.
    pub fn inverse_table(&self) -> Vec<usize> {
        self.elements
            .iter()
            .map(|a| self.index_of(&a.inverse()).expect("group is closed under inverse"))
            .collect()
    }

    /// Rotation angles of the elements, in index order.
    pub fn angles(&self) -> Vec<f64> {
        self.elements.iter().map(Rotation::angle).collect()
    }

    pub fn to_json(&self) -> GroupFile {
        GroupFile {
            name: self.name.clone(),
            elements: self.elements.iter().map(Rotation::to_row_major).collect(),
        }
    }

    pub fn from_json(file: &GroupFile) -> Result<Self> {
        let elements = file
            .elements
            .iter()
            .map(Rotation::from_row_major)
            .collect::<Result<Vec<_>>>()?;
        FiniteRotationGroup::from_elements(file.name.clone(), elements)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json())?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: GroupFile = serde_json::from_str(&text)?;
        FiniteRotationGroup::from_json(&file)
    }
}

/// On-disk form of a group: row-major matrices. serde_json writes the
/// shortest round-tripping decimal for each entry (at most 17 significant digits).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub elements: Vec<[f64; 9]>,
}

/// Tetrahedral, octahedral or icosahedral (standard frame) group.
pub fn generate_platonic(kind: PlatonicKind) -> FiniteRotationGroup {
    match kind {
        PlatonicKind::Tetrahedral => sorted_closure(
            "tetrahedral",
            &[
                Rotation::rz(PI),
                Rotation::about_axis(&Vector3::new(1.0, 1.0, 1.0), 2.0 * PI / 3.0),
            ],
        ),
        PlatonicKind::Octahedral => sorted_closure(
            "octahedral",
            &[Rotation::rz(PI / 2.0), Rotation::rx(PI / 2.0)],
        ),
        PlatonicKind::Icosahedral => generate_icosahedral(IcosahedralFrame::Standard),
    }
}

pub fn generate_icosahedral(frame: IcosahedralFrame) -> FiniteRotationGroup {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    match frame {
        IcosahedralFrame::Standard => sorted_closure(
            "icosahedral",
            &[
                Rotation::rz(PI),
                Rotation::about_axis(&Vector3::new(phi, 0.0, 1.0), 2.0 * PI / 5.0),
                Rotation::about_axis(&Vector3::new(1.0, 1.0, 1.0), 2.0 * PI / 3.0),
            ],
        ),
        IcosahedralFrame::VertexUp => sorted_closure(
            "icosahedral-vertex-up",
            &[
                Rotation::rz(2.0 * PI / 5.0),
                Rotation::about_axis(&Vector3::new(2.0, 0.0, 1.0), 2.0 * PI / 5.0),
            ],
        ),
    }
}

fn sorted_closure(name: &str, gens: &[Rotation]) -> FiniteRotationGroup {
    let raw = closure_elements(gens, 60).expect("Platonic generators close");
    let mut keyed: Vec<(SortKey, Rotation)> = raw
        .into_iter()
        .map(|r| {
            let r = r.orthonormalized();
            (SortKey::of(&r), r)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    FiniteRotationGroup {
        name: name.to_string(),
        elements: keyed.into_iter().map(|(_, r)| r).collect(),
    }
}

/// Angle, then axis components, quantized so that equal angles compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct SortKey([i64; 4]);

impl SortKey {
    fn of(r: &Rotation) -> SortKey {
        let (angle, axis) = canonical_axis_angle(r);
        let q = |v: f64| (v * 1e8).round() as i64;
        SortKey([q(angle), q(axis.x), q(axis.y), q(axis.z)])
    }
}

/// Angle in `[0, π]` and unit axis; for half-turns the axis sign is fixed so
/// that its first significant component is positive.
pub fn canonical_axis_angle(r: &Rotation) -> (f64, Vector3<f64>) {
    let angle = r.angle();
    if angle < 1e-9 {
        return (0.0, Vector3::zeros());
    }
    if angle < PI - 1e-6 {
        return (angle, r.skew_direction().normalize());
    }
    let m = r.matrix();
    let sym = (m + m.transpose()) * 0.5 + nalgebra::Matrix3::identity();
    let k = (0..3)
        .max_by(|&i, &j| sym[(i, i)].total_cmp(&sym[(j, j)]))
        .unwrap_or(0);
    let mut axis: Vector3<f64> = sym.column(k).into_owned().normalize();
    if let Some(c) = axis.iter().find(|c| c.abs() > 1e-9) {
        if *c < 0.0 {
            axis = -axis;
        }
    }
    (angle, axis)
}

/// Cyclic group of order `q` about `axis`: angles 2πj/q, j = 0..q-1.
pub fn generate_cyclic(q: usize, axis: &Vector3<f64>) -> Result<FiniteRotationGroup> {
    if q == 0 {
        return Err(Error::Validation("cyclic group order must be >= 1".into()));
    }
    if axis.norm() < 1e-12 {
        return Err(Error::Validation("cyclic group axis must be nonzero".into()));
    }
    let elements = (0..q)
        .map(|j| Rotation::about_axis(axis, 2.0 * PI * j as f64 / q as f64))
        .collect();
    Ok(FiniteRotationGroup {
        name: format!("C{q}"),
        elements,
    })
}

/// Planar cyclic group C_q < SO(2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlanarCyclicGroup {
    q: usize,
}

impl PlanarCyclicGroup {
    pub fn new(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::Validation("cyclic group order must be >= 1".into()));
        }
        Ok(PlanarCyclicGroup { q })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// θ_j = 2πj/q.
    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * (j % self.q) as f64 / self.q as f64
    }

    pub fn matrix(&self, j: usize) -> Matrix2<f64> {
        rot2(self.angle(j))
    }
}

pub fn generate_cyclic_planar(q: usize) -> Result<PlanarCyclicGroup> {
    PlanarCyclicGroup::new(q)
}

/// Orbit closure of `gens`, deduplicated at Frobenius 1e-9.
pub fn closure_from_generators(
    gens: &[Rotation],
    max_order: usize,
) -> Result<FiniteRotationGroup> {
    let elements = closure_elements(gens, max_order)?;
    Ok(FiniteRotationGroup {
        name: "closure".into(),
        elements,
    })
}

fn closure_elements(gens: &[Rotation], max_order: usize) -> Result<Vec<Rotation>> {
    let mut elements = vec![Rotation::identity()];
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier];
        frontier += 1;
        for g in gens {
            let p = g * &current;
            if !elements.iter().any(|e| e.frobenius_distance(&p) <= tol::DEDUP) {
                elements.push(p);
                if elements.len() > max_order {
                    return Err(Error::NotFinite { max_order });
                }
            }
        }
    }
    Ok(elements)
}

/// `{g h gᵀ : h ∈ H}` in the order of `H`.
pub fn conjugate_group(h: &FiniteRotationGroup, g: &Rotation) -> FiniteRotationGroup {
    let gt = g.inverse();
    FiniteRotationGroup {
        name: format!("{}-conj", h.name),
        elements: h.elements.iter().map(|e| (g * e) * gt).collect(),
    }
}

/// Resolves a group name used on the command line and across the C
/// interface: `trivial`, `tetra`, `octa`, `icosa` (vertex-up frame),
/// `icosa-std`, `C<q>` (about z), each optionally suffixed `-conj` to
/// conjugate by `g`.
pub fn named_group(name: &str, g: Option<&Rotation>) -> Result<FiniteRotationGroup> {
    let (base, conj) = match name.strip_suffix("-conj") {
        Some(b) => (b, true),
        None => (name, false),
    };
    let group = match base {
        "trivial" | "I" => generate_cyclic(1, &Vector3::z())?,
        "tetra" | "tetrahedral" => generate_platonic(PlatonicKind::Tetrahedral),
        "octa" | "octahedral" => generate_platonic(PlatonicKind::Octahedral),
        "icosa" | "icosahedral" => generate_icosahedral(IcosahedralFrame::VertexUp),
        "icosa-std" => generate_icosahedral(IcosahedralFrame::Standard),
        other => match other.strip_prefix('C').map(str::parse::<usize>) {
            Some(Ok(q)) => generate_cyclic(q, &Vector3::z())?,
            _ => return Err(Error::Validation(format!("unknown group `{name}`"))),
        },
    };
    if conj {
        let g = g.ok_or_else(|| Error::Validation(format!("`{name}` needs a conjugating rotation")))?;
        Ok(conjugate_group(&group, g))
    } else {
        Ok(group)
    }
}

/// All index pairs `(i, j)` with `h_i ≈ k_j` (Frobenius < 1e-6).
pub fn intersection_pairs(h: &FiniteRotationGroup, k: &FiniteRotationGroup) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, a) in h.elements.iter().enumerate() {
        for (j, b) in k.elements.iter().enumerate() {
            if a.frobenius_distance(b) < tol::INTERSECTION {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// True iff the identity is the only shared element.
pub fn trivial_intersection(h: &FiniteRotationGroup, k: &FiniteRotationGroup) -> bool {
    let pairs = intersection_pairs(h, k);
    pairs.len() == 1 && {
        let (i, j) = pairs[0];
        h.elements[i].angle() < 1e-9 && k.elements[j].angle() < 1e-9
    }
}

/// Whether every element of `small` appears in `big`.
pub fn is_subgroup(small: &FiniteRotationGroup, big: &FiniteRotationGroup) -> bool {
    small.elements.iter().all(|e| big.index_of(e).is_some())
}

#[cfg(test)]
pub(crate) fn cmp_f64(a: f64, b: f64) -> std::cmp::Ordering {
    a.total_cmp(&b)
}
