//! Decoding poses into alphabet words: find `(h_i, k_j)` with
//! `R = h_i Q k_j` and `Q` in the identity-centred fundamental domain.
//!
//! Three rotation decoders share one alphabet:
//! * brute force over every product `h_i k_j` (the reference),
//! * the cover method: nearest `h_i`, then nearest centre among the cover
//!   prefix,
//! * the wedge method for `H\SO(3)/H`: nearest `h_i`, then the conjugated
//!   wedge containing the pulled-back rotation, found by plane sign tests.
//!
//! All comparisons use traces, never arccos.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crystal::{decompose_p4, SpaceGroupElement, SpaceGroupP432, WallpaperElement, WallpaperGroup, WallpaperKind};
use crate::domains::{build_cover, build_wedge, flat, CoverSet, DoubleCosetDomain, Flat, WedgeDomain};
use crate::error::{Error, Result};
use crate::groups::{
    conjugate_group, generate_icosahedral, FiniteRotationGroup, IcosahedralFrame, PlanarCyclicGroup,
};
use crate::lie::so3::trace_dot;
use crate::lie::{exp_so3, wrap_angle, PlanarMotion, Rotation, Se2Metric, SpatialMotion};
use crate::tol;

/// Axis-angle of the conjugation `K = g H gᵀ` used by the reference alphabets.
pub const REFERENCE_CONJUGATION: [f64; 3] = [0.435897435897436, -0.076923076923077, -0.128205128205128];

/// Number of probe samples used when a cover is built on the fly.
pub const DEFAULT_COVER_PROBES: usize = 100_000;

pub fn reference_conjugation() -> Rotation {
    exp_so3(&REFERENCE_CONJUGATION.into())
}

/// `R = h_i · residual · k_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotWord {
    pub i: usize,
    pub j: usize,
    pub residual: Rotation,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DecodeStats {
    /// Trace comparisons (each stands for one distance evaluation).
    pub distance_evaluations: usize,
    /// Plane sign tests (wedge method only).
    pub sign_tests: usize,
    /// Seconds; zero unless the call was timed.
    pub wall_time: f64,
}

impl DecodeStats {
    pub fn merge(&mut self, other: &DecodeStats) {
        self.distance_evaluations += other.distance_evaluations;
        self.sign_tests += other.sign_tests;
        self.wall_time += other.wall_time;
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decoded {
    pub word: RotWord,
    pub stats: DecodeStats,
    /// Runner-up word when it is within the trace tie tolerance.
    pub near_tie: Option<(usize, usize)>,
}

impl Decoded {
    pub fn pair(&self) -> (usize, usize) {
        (self.word.i, self.word.j)
    }
}

/// A double-coset alphabet `H × K` with its cover prefix.
#[derive(Clone, Debug)]
pub struct RotationAlphabet {
    domain: DoubleCosetDomain,
    cover: CoverSet,
    cover_centres: Vec<Flat>,
    h_cayley: Vec<usize>,
}

impl RotationAlphabet {
    pub fn new(domain: DoubleCosetDomain, cover: CoverSet) -> Result<Self> {
        cover.check_against(&domain)?;
        let cover_centres = cover
            .pairs
            .iter()
            .map(|&(i, j)| *domain.product(i, j))
            .collect();
        let h_cayley = domain.h().cayley_table();
        Ok(RotationAlphabet {
            domain,
            cover,
            cover_centres,
            h_cayley,
        })
    }

    /// Builds the cover for `(h, k)` and wraps both.
    pub fn build(h: FiniteRotationGroup, k: FiniteRotationGroup, probes: usize, seed: u64) -> Result<Self> {
        let domain = DoubleCosetDomain::new(h, k)?;
        let cover = build_cover(&domain, probes, seed)?;
        RotationAlphabet::new(domain, cover)
    }

    /// Icosahedral H (vertex-up frame) and `K = g H gᵀ` with the reference `g`.
    pub fn icosahedral_conjugated(probes: usize, seed: u64) -> Result<Self> {
        let h = generate_icosahedral(IcosahedralFrame::VertexUp);
        let k = conjugate_group(&h, &reference_conjugation());
        let mut a = RotationAlphabet::build(h, k, probes, seed)?;
        a.cover.g = Some(REFERENCE_CONJUGATION);
        Ok(a)
    }

    pub fn domain(&self) -> &DoubleCosetDomain {
        &self.domain
    }

    pub fn cover(&self) -> &CoverSet {
        &self.cover
    }

    pub fn h(&self) -> &FiniteRotationGroup {
        self.domain.h()
    }

    pub fn k(&self) -> &FiniteRotationGroup {
        self.domain.k()
    }

    pub fn word_count(&self) -> usize {
        self.domain.word_count()
    }

    pub fn center(&self, i: usize, j: usize) -> Rotation {
        self.domain.center(i, j)
    }

    fn word(&self, r: &Rotation, i: usize, j: usize) -> RotWord {
        RotWord {
            i,
            j,
            residual: self.domain.residual(r, i, j),
        }
    }

    /// Exhaustive minimization of `ρ(R, h_i k_j)`.
    pub fn decode_bruteforce(&self, r: &Rotation) -> Decoded {
        let w = self.domain.nearest_word(r);
        Decoded {
            word: self.word(r, w.i, w.j),
            stats: DecodeStats {
                distance_evaluations: self.word_count(),
                ..Default::default()
            },
            near_tie: (w.gap() < tol::TRACE).then_some(w.runner_up),
        }
    }

    /// Stage 1 picks the nearest `h_{i0}`; stage 2 the nearest cover centre
    /// to `h_{i0}ᵀ R`. Returns `(i0, pulled, cover index, trace)`.
    #[inline]
    fn cover_stages(&self, r: &Rotation) -> (usize, Rotation, usize, f64) {
        let (i0, pulled) = self.domain.coset().pull_back(r);
        let m = pulled.as_flat();
        let nh = self.h().len();
        let mut best = 0usize;
        let mut best_t = f64::NEG_INFINITY;
        let final_word = |p: usize| {
            let (i1, j) = self.cover.pairs[p];
            (self.h_cayley[i0 * nh + i1], j)
        };
        for (p, c) in self.cover_centres.iter().enumerate() {
            let t = trace_dot(c, m);
            if t > best_t || (t == best_t && final_word(p) < final_word(best)) {
                best = p;
                best_t = t;
            }
        }
        (i0, pulled, best, best_t)
    }

    /// Two-stage decode with `|H| + |cover|` distance evaluations. Does not
    /// verify coverage; see [`Self::decode_cover_checked`].
    #[inline]
    pub fn decode_cover(&self, r: &Rotation) -> Decoded {
        let (i0, _, p, _) = self.cover_stages(r);
        self.cover_result(r, i0, p)
    }

    fn cover_result(&self, r: &Rotation, i0: usize, p: usize) -> Decoded {
        let nh = self.h().len();
        let (i1, j) = self.cover.pairs[p];
        Decoded {
            word: self.word(r, self.h_cayley[i0 * nh + i1], j),
            stats: DecodeStats {
                distance_evaluations: nh + self.cover_centres.len(),
                ..Default::default()
            },
            near_tie: None,
        }
    }

    /// [`Self::decode_cover`] followed by a full search on the pulled-back
    /// rotation; a strictly nearer centre outside the cover is a cover gap.
    pub fn decode_cover_checked(&self, r: &Rotation) -> Result<Decoded> {
        let (i0, pulled, p, t) = self.cover_stages(r);
        let global = self.domain.nearest_word(&pulled);
        if global.trace > t + tol::TRACE {
            return Err(Error::CoverGap {
                cover_len: self.cover.len(),
            });
        }
        Ok(self.cover_result(r, i0, p))
    }
}

/// The `H\SO(3)/H` alphabet decoded with conjugated wedges.
#[derive(Clone, Debug)]
pub struct WedgeAlphabet {
    wedge: WedgeDomain,
    h_flat: Vec<Flat>,
    cayley: Vec<usize>,
    inverse: Vec<usize>,
}

impl WedgeAlphabet {
    pub fn new(h: &FiniteRotationGroup) -> Result<Self> {
        let wedge = build_wedge(h)?;
        Ok(WedgeAlphabet::from_wedge(wedge))
    }

    pub fn from_wedge(wedge: WedgeDomain) -> Self {
        let g = wedge.group();
        WedgeAlphabet {
            h_flat: g.elements().iter().map(flat).collect(),
            cayley: g.cayley_table(),
            inverse: g.inverse_table(),
            wedge,
        }
    }

    /// Icosahedral group in the vertex-up frame.
    pub fn icosahedral() -> Result<Self> {
        WedgeAlphabet::new(&generate_icosahedral(IcosahedralFrame::VertexUp))
    }

    pub fn wedge(&self) -> &WedgeDomain {
        &self.wedge
    }

    pub fn group(&self) -> &FiniteRotationGroup {
        self.wedge.group()
    }

    pub fn center(&self, i: usize, j: usize) -> Rotation {
        self.group().get(i) * self.group().get(j)
    }

    fn word(&self, r: &Rotation, i: usize, j: usize) -> RotWord {
        let g = self.group();
        RotWord {
            i,
            j,
            residual: (g.get(i).inverse() * *r) * g.get(j).inverse(),
        }
    }

    /// `R ∈ (h_i h_j) W h_jᵀ`, returned as the word `(idx(h_i h_j), idx(h_jᵀ))`.
    #[inline]
    pub fn decode_wedge(&self, r: &Rotation) -> Decoded {
        let m = r.as_flat();
        let mut i0 = 0;
        let mut best_t = f64::NEG_INFINITY;
        for (i, h) in self.h_flat.iter().enumerate() {
            let t = trace_dot(h, m);
            if t > best_t {
                best_t = t;
                i0 = i;
            }
        }
        let n = self.h_flat.len();
        let pulled = self.group().get(i0).inverse() * *r;
        let x = pulled.skew_direction();
        // sin θ > 0 throughout the cell except at the identity, where every
        // plane test passes and copy 0 is returned.
        if x.norm() < 1e-12 && pulled.matrix().trace() < 0.0 {
            let mut d = self.decode_exhaustive(r);
            d.stats.distance_evaluations += n;
            return d;
        }
        match self.wedge.locate_direction(&x) {
            Some((j, tests)) => {
                let i = self.cayley[i0 * n + j];
                let jj = self.inverse[j];
                Decoded {
                    word: self.word(r, i, jj),
                    stats: DecodeStats {
                        distance_evaluations: n,
                        sign_tests: tests,
                        wall_time: 0.0,
                    },
                    near_tie: None,
                }
            }
            None => {
                let mut d = self.decode_exhaustive(r);
                d.stats.distance_evaluations += n;
                d
            }
        }
    }

    /// Scans all `|H|²` shifted wedges `h_a W h_b` for the one containing `R`.
    pub fn decode_exhaustive(&self, r: &Rotation) -> Decoded {
        let g = self.group();
        let n = g.len();
        let mut evals = 0;
        let mut fallback = None;
        for a in 0..n {
            let left = g.get(a).inverse() * *r;
            for b in 0..n {
                let q = left * g.get(b).inverse();
                evals += 1;
                match self.wedge.membership(&q) {
                    crate::crystal::Membership::Interior => {
                        return Decoded {
                            word: RotWord { i: a, j: b, residual: q },
                            stats: DecodeStats {
                                distance_evaluations: evals,
                                ..Default::default()
                            },
                            near_tie: None,
                        };
                    }
                    crate::crystal::Membership::Boundary if fallback.is_none() => {
                        fallback = Some(RotWord { i: a, j: b, residual: q });
                    }
                    _ => {}
                }
            }
        }
        let word = fallback.expect("shifted wedges tile SO(3)");
        Decoded {
            word,
            stats: DecodeStats {
                distance_evaluations: evals,
                ..Default::default()
            },
            near_tie: None,
        }
    }
}

fn timed(f: impl FnOnce() -> Decoded) -> Decoded {
    let start = Instant::now();
    let mut d = f();
    d.stats.wall_time = start.elapsed().as_secs_f64();
    d
}

/// Brute-force decode, timed.
pub fn decode_bruteforce(r: &Rotation, alphabet: &RotationAlphabet) -> Decoded {
    timed(|| alphabet.decode_bruteforce(r))
}

/// Cover decode, timed and checked for cover gaps.
pub fn decode_cover(r: &Rotation, alphabet: &RotationAlphabet) -> Result<Decoded> {
    let start = Instant::now();
    let mut d = alphabet.decode_cover_checked(r)?;
    d.stats.wall_time = start.elapsed().as_secs_f64();
    Ok(d)
}

/// Wedge decode, timed.
pub fn decode_wedge(r: &Rotation, alphabet: &WedgeAlphabet) -> Decoded {
    timed(|| alphabet.decode_wedge(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationMethod {
    Brute,
    Cover,
    Wedge,
}

impl std::str::FromStr for RotationMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" | "bruteforce" => Ok(RotationMethod::Brute),
            "cover" => Ok(RotationMethod::Cover),
            "wedge" => Ok(RotationMethod::Wedge),
            other => Err(Error::Validation(format!("unknown decode method `{other}`"))),
        }
    }
}

/// Decodes a batch in parallel; per-call stats are merged after the
/// parallel section.
pub fn decode_batch_cover(alphabet: &RotationAlphabet, rs: &[Rotation]) -> Result<(Vec<Decoded>, DecodeStats)> {
    let out: Vec<Decoded> = rs
        .par_iter()
        .map(|r| decode_cover(r, alphabet))
        .collect::<Result<_>>()?;
    Ok(merge_stats(out))
}

pub fn decode_batch_bruteforce(alphabet: &RotationAlphabet, rs: &[Rotation]) -> (Vec<Decoded>, DecodeStats) {
    merge_stats(rs.par_iter().map(|r| decode_bruteforce(r, alphabet)).collect())
}

pub fn decode_batch_wedge(alphabet: &WedgeAlphabet, rs: &[Rotation]) -> (Vec<Decoded>, DecodeStats) {
    merge_stats(rs.par_iter().map(|r| decode_wedge(r, alphabet)).collect())
}

fn merge_stats(out: Vec<Decoded>) -> (Vec<Decoded>, DecodeStats) {
    let mut total = DecodeStats::default();
    for d in &out {
        total.merge(&d.stats);
    }
    (out, total)
}

/// Planar alphabet `p4 × C_q` with q odd.
#[derive(Clone, Debug)]
pub struct Se2Alphabet {
    gamma: WallpaperGroup,
    delta: PlanarCyclicGroup,
    metric: Se2Metric,
}

/// `g = (γ γ') · residual · δ`, with `gamma` already the product `γ γ'`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Se2Word {
    pub gamma: WallpaperElement,
    pub delta: usize,
    pub residual: PlanarMotion,
}

impl Se2Alphabet {
    pub fn new(gamma: WallpaperGroup, q: usize) -> Result<Self> {
        if gamma.kind() != WallpaperKind::P4 {
            return Err(Error::Validation(format!("planar alphabet needs p4, got {}", gamma.kind())));
        }
        if q % 2 == 0 {
            return Err(Error::Validation(format!(
                "C_{q} shares rotations with p4; the order must be odd"
            )));
        }
        Ok(Se2Alphabet {
            gamma,
            delta: PlanarCyclicGroup::new(q)?,
            metric: Se2Metric::default(),
        })
    }

    pub fn with_metric(mut self, metric: Se2Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn gamma(&self) -> &WallpaperGroup {
        &self.gamma
    }

    pub fn delta(&self) -> &PlanarCyclicGroup {
        &self.delta
    }

    pub fn metric(&self) -> Se2Metric {
        self.metric
    }

    /// Cell centre `γ δ`.
    pub fn center(&self, gamma: &WallpaperElement, delta: usize) -> PlanarMotion {
        self.gamma
            .motion(gamma)
            .compose(&PlanarMotion::rotation(self.delta.angle(delta)))
    }

    fn residual(&self, g: &PlanarMotion, gamma: &WallpaperElement, delta: usize) -> PlanarMotion {
        self.gamma
            .motion(gamma)
            .inverse()
            .compose(g)
            .compose(&PlanarMotion::rotation(-self.delta.angle(delta)))
    }

    /// Rotation letters `(l', j)` minimizing the wrapped distance of `theta`
    /// to `l'π/2 + 2πj/q`, ties to the smallest `(l', j)`.
    fn rotational_search(&self, theta: f64) -> (usize, usize) {
        let q = self.delta.order();
        let quarter = std::f64::consts::FRAC_PI_2;
        let mut best = (0usize, 0usize);
        let mut best_d = f64::INFINITY;
        for j in 0..q {
            let rest = wrap_angle(theta - self.delta.angle(j));
            let l = ((rest / quarter).round_ties_even() as i64).rem_euclid(4) as usize;
            let d = wrap_angle(rest - l as f64 * quarter).abs();
            if d < best_d - 1e-15 || ((d - best_d).abs() <= 1e-15 && (l, j) < best) {
                best = (l, j);
                best_d = d;
            }
        }
        best
    }

    /// Coarse step by decimal rounding, then a purely rotational search on
    /// the pulled-back element.
    pub fn decode(&self, g: &PlanarMotion) -> Result<Se2Word> {
        let (coarse, pulled) = decompose_p4(g, &self.gamma)?;
        let (l1, j) = self.rotational_search(pulled.theta());
        let gamma = WallpaperElement::new((coarse.l + l1) % 4, coarse.m, coarse.n);
        Ok(Se2Word {
            gamma,
            delta: j,
            residual: self.residual(g, &gamma, j),
        })
    }

    /// Same result, rotation letters first and translation letter second.
    pub fn decode_rotation_first(&self, g: &PlanarMotion) -> Result<Se2Word> {
        let (l, j) = self.rotational_search(g.theta());
        let (m, n) = self.gamma.nearest_lattice_point(&g.t);
        let gamma = WallpaperElement::new(l, m, n);
        Ok(Se2Word {
            gamma,
            delta: j,
            residual: self.residual(g, &gamma, j),
        })
    }

    /// Reference: argmin of the left-invariant distance over every element
    /// of `Γ` within `‖t‖ + 2` times every `δ`.
    pub fn decode_bruteforce(&self, g: &PlanarMotion) -> Se2Word {
        let mut best = (WallpaperElement::identity(), 0usize);
        let mut best_d = f64::INFINITY;
        for e in self.gamma.enumerate_elements(g.t.norm() + 2.0) {
            for j in 0..self.delta.order() {
                let d = self.metric.distance(g, &self.center(&e, j));
                if d < best_d - 1e-15 || ((d - best_d).abs() <= 1e-15 && (e, j) < best) {
                    best = (e, j);
                    best_d = d;
                }
            }
        }
        Se2Word {
            gamma: best.0,
            delta: best.1,
            residual: self.residual(g, &best.0, best.1),
        }
    }
}

/// Spatial alphabet `P432 × Δ` decoded in the pose change group:
/// translation and rotation letters independently.
#[derive(Clone, Debug)]
pub struct Se3Alphabet {
    gamma: SpaceGroupP432,
    rotations: RotationAlphabet,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Se3Word {
    pub gamma: SpaceGroupElement,
    pub delta: usize,
    pub residual: SpatialMotion,
}

impl Se3Alphabet {
    pub fn new(gamma: SpaceGroupP432, delta: FiniteRotationGroup, probes: usize, seed: u64) -> Result<Self> {
        let rotations = RotationAlphabet::build(gamma.point_group().clone(), delta, probes, seed)?;
        Ok(Se3Alphabet { gamma, rotations })
    }

    pub fn from_parts(gamma: SpaceGroupP432, rotations: RotationAlphabet) -> Result<Self> {
        if rotations.h() != gamma.point_group() {
            return Err(Error::Validation("rotation alphabet H must be the P432 point group".into()));
        }
        Ok(Se3Alphabet { gamma, rotations })
    }

    /// P432 with spacing `a` and Δ = g·Ico·gᵀ (vertex-up frame, reference g).
    pub fn reference(spacing: f64, probes: usize, seed: u64) -> Result<Self> {
        let delta = conjugate_group(&generate_icosahedral(IcosahedralFrame::VertexUp), &reference_conjugation());
        let mut a = Se3Alphabet::new(SpaceGroupP432::new(spacing)?, delta, probes, seed)?;
        a.rotations.cover.g = Some(REFERENCE_CONJUGATION);
        Ok(a)
    }

    pub fn gamma(&self) -> &SpaceGroupP432 {
        &self.gamma
    }

    pub fn rotations(&self) -> &RotationAlphabet {
        &self.rotations
    }

    /// `24 × 60` for the reference alphabet.
    pub fn rotational_word_count(&self) -> usize {
        self.rotations.word_count()
    }

    pub fn center(&self, gamma: &SpaceGroupElement, delta: usize) -> SpatialMotion {
        let t = self.gamma.lattice_translation([gamma.m, gamma.n, gamma.o]);
        SpatialMotion::new(self.rotations.center(gamma.p, delta), t)
    }

    fn assemble(&self, g: &SpatialMotion, d: &Decoded) -> Se3Word {
        let c = self.gamma.nearest_lattice_point(&g.translation);
        let t = self.gamma.lattice_translation(c);
        Se3Word {
            gamma: SpaceGroupElement {
                p: d.word.i,
                m: c[0],
                n: c[1],
                o: c[2],
            },
            delta: d.word.j,
            residual: SpatialMotion::new(d.word.residual, g.translation - t),
        }
    }

    pub fn decode(&self, g: &SpatialMotion) -> Result<Se3Word> {
        let d = self.rotations.decode_cover_checked(&g.rotation)?;
        Ok(self.assemble(g, &d))
    }

    pub fn decode_bruteforce(&self, g: &SpatialMotion) -> Se3Word {
        let d = self.rotations.decode_bruteforce(&g.rotation);
        self.assemble(g, &d)
    }
}
