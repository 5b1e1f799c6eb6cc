//! Trajectories to sentences and back.
//!
//! A sentence is one two-letter symbol `(γ, δ)` per time sample. Planar
//! letters print as `g(l,m,n)` / `d(j)`, spatial ones as `g(p,m,n,o)` / `d(j)`.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use nalgebra::{Vector2, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::crystal::{wallpaper, SpaceGroupElement, WallpaperElement, WallpaperKind};
use crate::decode::{Se2Alphabet, Se3Alphabet, DEFAULT_COVER_PROBES};
use crate::error::{Error, Result};
use crate::lie::{exp_so3, AxisAngleVector, PlanarMotion, SpatialMotion};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pose {
    Planar(PlanarMotion),
    Spatial(SpatialMotion),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample {
    pub tau: f64,
    pub pose: Pose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GammaLetter {
    Planar(WallpaperElement),
    Spatial(SpaceGroupElement),
}

impl fmt::Display for GammaLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaLetter::Planar(e) => write!(f, "g({},{},{})", e.l, e.m, e.n),
            GammaLetter::Spatial(e) => write!(f, "g({},{},{},{})", e.p, e.m, e.n, e.o),
        }
    }
}

fn letter_args<'a>(s: &'a str, head: &str) -> Result<Vec<&'a str>> {
    s.trim()
        .strip_prefix(head)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .map(|r| r.split(',').map(str::trim).collect())
        .ok_or_else(|| Error::UnknownLetter(s.to_string()))
}

impl FromStr for GammaLetter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownLetter(s.to_string());
        let args = letter_args(s, "g")?;
        let int = |a: &str| a.parse::<i64>().map_err(|_| bad());
        let idx = |a: &str| a.parse::<usize>().map_err(|_| bad());
        match args.as_slice() {
            [l, m, n] => Ok(GammaLetter::Planar(WallpaperElement::new(idx(l)?, int(m)?, int(n)?))),
            [p, m, n, o] => Ok(GammaLetter::Spatial(SpaceGroupElement {
                p: idx(p)?,
                m: int(m)?,
                n: int(n)?,
                o: int(o)?,
            })),
            _ => Err(bad()),
        }
    }
}

pub fn delta_letter(j: usize) -> String {
    format!("d({j})")
}

pub fn parse_delta_letter(s: &str) -> Result<usize> {
    match letter_args(s, "d")?.as_slice() {
        [j] => j.parse().map_err(|_| Error::UnknownLetter(s.to_string())),
        _ => Err(Error::UnknownLetter(s.to_string())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Symbol {
    pub tau: f64,
    pub gamma: GammaLetter,
    pub delta: usize,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.gamma, delta_letter(self.delta))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sentence {
    pub alphabet_id: String,
    pub symbols: Vec<Symbol>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(Symbol::to_string).collect();
        f.write_str(&parts.join(", "))
    }
}

/// A `(Γ, Δ)` pair ready for encoding.
#[derive(Clone, Debug)]
pub enum Alphabet {
    Planar(Se2Alphabet),
    Spatial(Se3Alphabet),
}

impl Alphabet {
    /// Parses `p4xC<q>` (q odd) or `P432xI`; the spatial variant builds its
    /// cover with `cover_probes` samples.
    pub fn from_id(id: &str, cover_probes: usize, seed: u64) -> Result<Self> {
        let lower = id.to_ascii_lowercase();
        if let Some(q) = lower.strip_prefix("p4xc") {
            let q: usize = q
                .parse()
                .map_err(|_| Error::Validation(format!("bad cyclic order in alphabet `{id}`")))?;
            return Ok(Alphabet::Planar(Se2Alphabet::new(wallpaper(WallpaperKind::P4, 1.0)?, q)?));
        }
        if lower == "p432xi" || lower == "p432xico" {
            return Ok(Alphabet::Spatial(Se3Alphabet::reference(1.0, cover_probes, seed)?));
        }
        Err(Error::Validation(format!(
            "unknown alphabet `{id}` (expected p4xC<q> or P432xI)"
        )))
    }

    pub fn reference_planar() -> Self {
        Alphabet::Planar(Se2Alphabet::new(wallpaper(WallpaperKind::P4, 1.0).expect("square lattice"), 5).expect("odd order"))
    }

    pub fn reference_spatial(seed: u64) -> Result<Self> {
        Ok(Alphabet::Spatial(Se3Alphabet::reference(1.0, DEFAULT_COVER_PROBES, seed)?))
    }

    pub fn id(&self) -> String {
        match self {
            Alphabet::Planar(a) => format!("p4xC{}", a.delta().order()),
            Alphabet::Spatial(_) => "P432xI".to_string(),
        }
    }

    fn encode_one(&self, s: &TrajectorySample) -> Result<Symbol> {
        let (gamma, delta) = match (self, &s.pose) {
            (Alphabet::Planar(a), Pose::Planar(g)) => {
                let w = a.decode(g)?;
                (GammaLetter::Planar(w.gamma), w.delta)
            }
            (Alphabet::Spatial(a), Pose::Spatial(g)) => {
                let w = a.decode(g)?;
                (GammaLetter::Spatial(w.gamma), w.delta)
            }
            _ => return Err(Error::Validation("pose kind does not match the alphabet".into())),
        };
        Ok(Symbol { tau: s.tau, gamma, delta })
    }

    /// Cell centre `γ δ` named by a symbol.
    pub fn representative(&self, sym: &Symbol) -> Result<Pose> {
        let unknown = || Error::UnknownLetter(format!("{sym}"));
        match (self, &sym.gamma) {
            (Alphabet::Planar(a), GammaLetter::Planar(e)) => {
                if e.l >= 4 || sym.delta >= a.delta().order() {
                    return Err(unknown());
                }
                Ok(Pose::Planar(a.center(e, sym.delta)))
            }
            (Alphabet::Spatial(a), GammaLetter::Spatial(e)) => {
                if e.p >= a.rotations().h().len() || sym.delta >= a.rotations().k().len() {
                    return Err(unknown());
                }
                Ok(Pose::Spatial(a.center(e, sym.delta)))
            }
            _ => Err(unknown()),
        }
    }
}

/// Decodes every sample; errors carry the sample index.
pub fn encode(samples: &[TrajectorySample], alphabet: &Alphabet) -> Result<Sentence> {
    let symbols = samples
        .par_iter()
        .enumerate()
        .map(|(k, s)| alphabet.encode_one(s).map_err(Error::at(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sentence {
        alphabet_id: alphabet.id(),
        symbols,
    })
}

/// Representative poses (cell centres), timestamps preserved.
pub fn decode_sentence(sentence: &Sentence, alphabet: &Alphabet) -> Result<Vec<TrajectorySample>> {
    sentence
        .symbols
        .iter()
        .enumerate()
        .map(|(k, s)| {
            Ok(TrajectorySample {
                tau: s.tau,
                pose: alphabet.representative(s).map_err(Error::at(k))?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum TrajectorySpec {
    /// `θ(τ) = τ`, `t(τ) = [4 cos τ, 6 τ/2π − 3]`.
    ReferenceSe2,
    /// Pre-sampled poses; `times` selects samples with exactly those stamps.
    Tabulated(Vec<TrajectorySample>),
}

impl FromStr for TrajectorySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reference-se2" => Ok(TrajectorySpec::ReferenceSe2),
            other => Err(Error::Validation(format!("unknown built-in trajectory `{other}`"))),
        }
    }
}

/// The five equidistant times `π(1 + 2k/5)` of the planar example.
pub fn reference_times(ks: impl IntoIterator<Item = i64>) -> Vec<f64> {
    ks.into_iter()
        .map(|k| std::f64::consts::PI * (1.0 + 2.0 * k as f64 / 5.0))
        .collect()
}

pub fn sample_parametric(spec: &TrajectorySpec, times: &[f64]) -> Result<Vec<TrajectorySample>> {
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Validation("sample times must be strictly increasing".into()));
    }
    match spec {
        TrajectorySpec::ReferenceSe2 => Ok(times
            .iter()
            .map(|&tau| TrajectorySample {
                tau,
                pose: Pose::Planar(PlanarMotion::new(
                    tau,
                    Vector2::new(4.0 * tau.cos(), 6.0 * tau / (2.0 * std::f64::consts::PI) - 3.0),
                )),
            })
            .collect()),
        TrajectorySpec::Tabulated(table) => times
            .iter()
            .map(|&tau| {
                table
                    .iter()
                    .find(|s| s.tau == tau)
                    .copied()
                    .ok_or_else(|| Error::Validation(format!("no tabulated sample at tau = {tau}")))
            })
            .collect(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleLine {
    tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    axis_angle: Option<[f64; 3]>,
    t: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SymbolLine {
    tau: f64,
    gamma: String,
    delta: String,
}

fn non_empty_lines(reader: impl BufRead) -> impl Iterator<Item = (usize, Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(k, l)| (k, l.map_err(Error::from)))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
}

/// One sample per line: `{"tau", "theta", "t": [x, y]}` or
/// `{"tau", "axis_angle": [x, y, z], "t": [x, y, z]}`.
pub fn read_trajectory(reader: impl BufRead) -> Result<Vec<TrajectorySample>> {
    let mut out: Vec<TrajectorySample> = Vec::new();
    for (k, line) in non_empty_lines(reader) {
        let parsed: SampleLine = serde_json::from_str(&line?).map_err(|e| Error::at(k)(e.into()))?;
        let pose = match (parsed.theta, parsed.axis_angle, parsed.t.as_slice()) {
            (Some(theta), None, &[x, y]) => Pose::Planar(PlanarMotion::new(theta, Vector2::new(x, y))),
            (None, Some(v), &[x, y, z]) => {
                let x_aa = AxisAngleVector::new(v.into()).map_err(Error::at(k))?;
                Pose::Spatial(SpatialMotion::new(x_aa.exp(), Vector3::new(x, y, z)))
            }
            _ => {
                return Err(Error::at(k)(Error::Parse(
                    "expected theta with a 2-vector t, or axis_angle with a 3-vector t".into(),
                )))
            }
        };
        if out.last().is_some_and(|p| p.tau >= parsed.tau) {
            return Err(Error::at(k)(Error::Validation("tau must be strictly increasing".into())));
        }
        out.push(TrajectorySample { tau: parsed.tau, pose });
    }
    Ok(out)
}

pub fn write_trajectory(mut w: impl Write, samples: &[TrajectorySample]) -> Result<()> {
    for s in samples {
        let line = match &s.pose {
            Pose::Planar(p) => SampleLine {
                tau: s.tau,
                theta: Some(p.theta()),
                axis_angle: None,
                t: vec![p.t.x, p.t.y],
            },
            Pose::Spatial(g) => {
                let x = crate::lie::log_so3(&g.rotation)?;
                SampleLine {
                    tau: s.tau,
                    theta: None,
                    axis_angle: Some((*x.vector()).into()),
                    t: g.translation.iter().copied().collect(),
                }
            }
        };
        writeln!(w, "{}", serde_json::to_string(&line)?)?;
    }
    Ok(())
}

/// `{"tau": .., "gamma": "g(2,3,-2)", "delta": "d(3)"}` per line.
pub fn write_sentence(mut w: impl Write, sentence: &Sentence) -> Result<()> {
    for s in &sentence.symbols {
        let line = SymbolLine {
            tau: s.tau,
            gamma: s.gamma.to_string(),
            delta: delta_letter(s.delta),
        };
        writeln!(w, "{}", serde_json::to_string(&line)?)?;
    }
    Ok(())
}

pub fn read_sentence(reader: impl BufRead, alphabet_id: &str) -> Result<Sentence> {
    let mut symbols = Vec::new();
    for (k, line) in non_empty_lines(reader) {
        let parsed: SymbolLine = serde_json::from_str(&line?).map_err(|e| Error::at(k)(e.into()))?;
        symbols.push(Symbol {
            tau: parsed.tau,
            gamma: parsed.gamma.parse().map_err(Error::at(k))?,
            delta: parse_delta_letter(&parsed.delta).map_err(Error::at(k))?,
        });
    }
    Ok(Sentence {
        alphabet_id: alphabet_id.to_string(),
        symbols,
    })
}

/// Input line for batch rotation decoding: `{"axis_angle": [..]}` or
/// `{"matrix": [9 row-major entries]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct RotationLine {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis_angle: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[f64; 9]>,
}

pub fn read_rotations(reader: impl BufRead) -> Result<Vec<crate::lie::Rotation>> {
    let mut out = Vec::new();
    for (k, line) in non_empty_lines(reader) {
        let parsed: RotationLine = serde_json::from_str(&line?).map_err(|e| Error::at(k)(e.into()))?;
        let r = match (parsed.axis_angle, parsed.matrix) {
            (Some(v), None) => exp_so3(&v.into()),
            (None, Some(m)) => crate::lie::Rotation::from_row_major(&m).map_err(Error::at(k))?,
            _ => {
                return Err(Error::at(k)(Error::Parse(
                    "expected exactly one of axis_angle or matrix".into(),
                )))
            }
        };
        out.push(r);
    }
    Ok(out)
}

/// Output line of batch rotation decoding.
#[derive(Debug, Serialize, Deserialize)]
pub struct WordLine {
    pub i: usize,
    pub j: usize,
    /// Residual as axis-angle; absent if its angle is at the log boundary.
    pub residual: Option<[f64; 3]>,
    pub distance_evaluations: usize,
    pub sign_tests: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_tie: Option<(usize, usize)>,
}

impl From<&crate::decode::Decoded> for WordLine {
    fn from(d: &crate::decode::Decoded) -> Self {
        WordLine {
            i: d.word.i,
            j: d.word.j,
            residual: crate::lie::log_so3(&d.word.residual).ok().map(|x| (*x.vector()).into()),
            distance_evaluations: d.stats.distance_evaluations,
            sign_tests: d.stats.sign_tests,
            near_tie: d.near_tie,
        }
    }
}

pub fn write_words(mut w: impl Write, decoded: &[crate::decode::Decoded]) -> Result<()> {
    for d in decoded {
        writeln!(w, "{}", serde_json::to_string(&WordLine::from(d))?)?;
    }
    Ok(())
}

/// P432 of spacing `a` in a form the codec can hold; mostly for callers that
/// want a non-unit lattice.
pub fn spatial_alphabet(spacing: f64, cover_probes: usize, seed: u64) -> Result<Alphabet> {
    Ok(Alphabet::Spatial(Se3Alphabet::reference(spacing, cover_probes, seed)?))
}
