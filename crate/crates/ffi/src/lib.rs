//! C ABI over the motion-alphabet decoders.
//!
//! Alphabets are opaque handles created by `*_new` and released by
//! `*_free`. Every fallible call returns an [`MaStatus`]; on failure the
//! message is available from [`ma_last_error_message`] on the same thread.
//! Rotations cross the boundary as 9 row-major doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use motion_alphabet::crystal::{wallpaper, WallpaperKind};
use motion_alphabet::decode::{Decoded, RotationAlphabet, Se2Alphabet, Se3Alphabet, WedgeAlphabet};
use motion_alphabet::lie::{PlanarMotion, Rotation, SpatialMotion};
use motion_alphabet::Error;
use nalgebra::{Vector2, Vector3};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    BoundaryAngle = 3,
    NotFinite = 4,
    OutOfDomain = 5,
    CoverGap = 6,
    UnknownLetter = 7,
    Disagreement = 8,
    Io = 9,
    Parse = 10,
    Panic = 11,
}

impl From<&Error> for MaStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Validation(_) => MaStatus::Validation,
            Error::BoundaryAngle { .. } => MaStatus::BoundaryAngle,
            Error::NotFinite { .. } => MaStatus::NotFinite,
            Error::OutOfDomain(_) => MaStatus::OutOfDomain,
            Error::CoverGap { .. } => MaStatus::CoverGap,
            Error::UnknownLetter(_) => MaStatus::UnknownLetter,
            Error::Disagreement(_) => MaStatus::Disagreement,
            Error::AtSample { source, .. } => MaStatus::from(source.as_ref()),
            Error::Io(_) => MaStatus::Io,
            Error::Parse(_) => MaStatus::Parse,
        }
    }
}

/// Rotation decoding method for [`ma_rotation_decode`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaMethod {
    Brute = 0,
    Cover = 1,
}

/// `R = h_i · residual · k_j`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MaRotationWord {
    pub i: usize,
    pub j: usize,
    pub residual: [f64; 9],
    pub distance_evaluations: usize,
    pub sign_tests: usize,
    /// Nonzero when the two nearest words are within tolerance of each other.
    pub near_tie: bool,
}

/// `g = γ(l, m, n) · residual · δ_delta` with residual `(θ, x, y)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MaPlanarWord {
    pub l: usize,
    pub m: i64,
    pub n: i64,
    pub delta: usize,
    pub residual_theta: f64,
    pub residual_t: [f64; 2],
}

/// Spatial word: lattice letter `(p, m, n, o)`, rotation letter and residual.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MaSpatialWord {
    pub p: usize,
    pub m: i64,
    pub n: i64,
    pub o: i64,
    pub delta: usize,
    pub residual_rotation: [f64; 9],
    pub residual_translation: [f64; 3],
}

/// Double-coset alphabet `H\SO(3)/K` with its cover set.
pub struct MaRotationAlphabet(RotationAlphabet);

/// Wedge alphabet `H\SO(3)/H` decoded by sign tests.
pub struct MaWedgeAlphabet(WedgeAlphabet);

/// Planar alphabet `p4 × C_q`.
pub struct MaPlanarAlphabet(Se2Alphabet);

/// Spatial alphabet `P432 × Ico`.
pub struct MaSpatialAlphabet(Se3Alphabet);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Runs `f`, storing any error or panic message for the caller.
fn guard(f: impl FnOnce() -> Result<(), MaStatus>) -> MaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            MaStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            MaStatus::Panic
        }
    }
}

fn fail(e: Error) -> MaStatus {
    set_error(e.to_string());
    MaStatus::from(&e)
}

fn null(what: &str) -> MaStatus {
    set_error(format!("null pointer: {what}"));
    MaStatus::NullPointer
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, MaStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn get_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, MaStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn read_rotation(p: *const f64) -> Result<Rotation, MaStatus> {
    let m = get(p as *const [f64; 9], "matrix")?;
    Rotation::from_row_major(m).map_err(fail)
}

fn boxed<T>(out: &mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn rotation_word(d: &Decoded) -> MaRotationWord {
    MaRotationWord {
        i: d.word.i,
        j: d.word.j,
        residual: d.word.residual.to_row_major(),
        distance_evaluations: d.stats.distance_evaluations,
        sign_tests: d.stats.sign_tests,
        near_tie: d.near_tie.is_some(),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ma_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ma_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the icosahedral alphabet `Ico\SO(3)/(g·Ico·gᵀ)` with the
/// reference conjugation and a cover estimated from `probes` samples.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn ma_rotation_alphabet_new(probes: usize, seed: u64, out: *mut *mut MaRotationAlphabet) -> MaStatus {
    guard(|| {
        let out = get_mut(out, "out")?;
        let a = RotationAlphabet::icosahedral_conjugated(probes, seed).map_err(fail)?;
        boxed(out, MaRotationAlphabet(a));
        Ok(())
    })
}

/// # Safety
/// `alphabet` must be null or a handle from [`ma_rotation_alphabet_new`].
#[no_mangle]
pub unsafe extern "C" fn ma_rotation_alphabet_free(alphabet: *mut MaRotationAlphabet) {
    free(alphabet)
}

/// Number of shifted domains in the cover set, or 0 for a null handle.
///
/// # Safety
/// `alphabet` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ma_rotation_alphabet_cover_len(alphabet: *const MaRotationAlphabet) -> usize {
    alphabet.as_ref().map_or(0, |a| a.0.cover().len())
}

/// Decodes a row-major rotation matrix into a word. `method` is an
/// [`MaMethod`] value; anything else is a validation error.
///
/// # Safety
/// `alphabet` must be a live handle, `matrix` must point to 9 doubles and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ma_rotation_decode(
    alphabet: *const MaRotationAlphabet,
    matrix: *const f64,
    method: i32,
    out: *mut MaRotationWord,
) -> MaStatus {
    guard(|| {
        let a = &get(alphabet, "alphabet")?.0;
        let out = get_mut(out, "out")?;
        let r = read_rotation(matrix)?;
        let d = match method {
            m if m == MaMethod::Brute as i32 => a.decode_bruteforce(&r),
            m if m == MaMethod::Cover as i32 => a.decode_cover_checked(&r).map_err(fail)?,
            m => return Err(fail(Error::Validation(format!("unknown decoding method {m}")))),
        };
        *out = rotation_word(&d);
        Ok(())
    })
}

/// Writes the centre `h_i k_j` as 9 row-major doubles.
///
/// # Safety
/// `alphabet` must be a live handle and `out` must hold 9 doubles.
#[no_mangle]
pub unsafe extern "C" fn ma_rotation_center(alphabet: *const MaRotationAlphabet, i: usize, j: usize, out: *mut f64) -> MaStatus {
    guard(|| {
        let a = &get(alphabet, "alphabet")?.0;
        let out = get_mut(out as *mut [f64; 9], "out")?;
        if i >= a.h().len() || j >= a.k().len() {
            return Err(fail(Error::UnknownLetter(format!("({i},{j})"))));
        }
        *out = a.center(i, j).to_row_major();
        Ok(())
    })
}

/// Builds the icosahedral wedge alphabet.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn ma_wedge_alphabet_new(out: *mut *mut MaWedgeAlphabet) -> MaStatus {
    guard(|| {
        let out = get_mut(out, "out")?;
        boxed(out, MaWedgeAlphabet(WedgeAlphabet::icosahedral().map_err(fail)?));
        Ok(())
    })
}

/// # Safety
/// `alphabet` must be null or a handle from [`ma_wedge_alphabet_new`].
#[no_mangle]
pub unsafe extern "C" fn ma_wedge_alphabet_free(alphabet: *mut MaWedgeAlphabet) {
    free(alphabet)
}

/// Decodes a row-major rotation matrix with the wedge sign tests.
///
/// # Safety
/// `alphabet` must be a live handle, `matrix` must point to 9 doubles and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ma_wedge_decode(alphabet: *const MaWedgeAlphabet, matrix: *const f64, out: *mut MaRotationWord) -> MaStatus {
    guard(|| {
        let a = &get(alphabet, "alphabet")?.0;
        let out = get_mut(out, "out")?;
        *out = rotation_word(&a.decode_wedge(&read_rotation(matrix)?));
        Ok(())
    })
}

/// Builds `p4 × C_q` on a square lattice of the given spacing; `q` must be odd.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn ma_planar_alphabet_new(q: usize, spacing: f64, out: *mut *mut MaPlanarAlphabet) -> MaStatus {
    guard(|| {
        let out = get_mut(out, "out")?;
        let g = wallpaper(WallpaperKind::P4, spacing).map_err(fail)?;
        boxed(out, MaPlanarAlphabet(Se2Alphabet::new(g, q).map_err(fail)?));
        Ok(())
    })
}

/// # Safety
/// `alphabet` must be null or a handle from [`ma_planar_alphabet_new`].
#[no_mangle]
pub unsafe extern "C" fn ma_planar_alphabet_free(alphabet: *mut MaPlanarAlphabet) {
    free(alphabet)
}

/// Decodes the planar pose `(θ, x, y)`.
///
/// # Safety
/// `alphabet` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ma_planar_decode(
    alphabet: *const MaPlanarAlphabet,
    theta: f64,
    x: f64,
    y: f64,
    out: *mut MaPlanarWord,
) -> MaStatus {
    guard(|| {
        let a = &get(alphabet, "alphabet")?.0;
        let out = get_mut(out, "out")?;
        if !(theta.is_finite() && x.is_finite() && y.is_finite()) {
            return Err(fail(Error::Validation("pose must be finite".into())));
        }
        let w = a.decode(&PlanarMotion::new(theta, Vector2::new(x, y))).map_err(fail)?;
        *out = MaPlanarWord {
            l: w.gamma.l,
            m: w.gamma.m,
            n: w.gamma.n,
            delta: w.delta,
            residual_theta: w.residual.theta(),
            residual_t: [w.residual.t.x, w.residual.t.y],
        };
        Ok(())
    })
}

/// Builds `P432 × Ico` with lattice spacing `spacing` and a rotation cover
/// estimated from `probes` samples.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn ma_spatial_alphabet_new(spacing: f64, probes: usize, seed: u64, out: *mut *mut MaSpatialAlphabet) -> MaStatus {
    guard(|| {
        let out = get_mut(out, "out")?;
        boxed(out, MaSpatialAlphabet(Se3Alphabet::reference(spacing, probes, seed).map_err(fail)?));
        Ok(())
    })
}

/// # Safety
/// `alphabet` must be null or a handle from [`ma_spatial_alphabet_new`].
#[no_mangle]
pub unsafe extern "C" fn ma_spatial_alphabet_free(alphabet: *mut MaSpatialAlphabet) {
    free(alphabet)
}

/// Decodes a rigid motion given as a row-major rotation and a translation.
///
/// # Safety
/// `alphabet` must be a live handle, `matrix` must point to 9 doubles,
/// `translation` to 3 doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ma_spatial_decode(
    alphabet: *const MaSpatialAlphabet,
    matrix: *const f64,
    translation: *const f64,
    out: *mut MaSpatialWord,
) -> MaStatus {
    guard(|| {
        let a = &get(alphabet, "alphabet")?.0;
        let out = get_mut(out, "out")?;
        let r = read_rotation(matrix)?;
        let t = Vector3::from(*get(translation as *const [f64; 3], "translation")?);
        if !t.iter().all(|v| v.is_finite()) {
            return Err(fail(Error::Validation("translation must be finite".into())));
        }
        let w = a.decode(&SpatialMotion::new(r, t)).map_err(fail)?;
        let rt = w.residual.translation;
        *out = MaSpatialWord {
            p: w.gamma.p,
            m: w.gamma.m,
            n: w.gamma.n,
            o: w.gamma.o,
            delta: w.delta,
            residual_rotation: w.residual.rotation.to_row_major(),
            residual_translation: [rt.x, rt.y, rt.z],
        };
        Ok(())
    })
}
