#ifndef MOTION_ALPHABET_H
#define MOTION_ALPHABET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MaStatus {
  MA_STATUS_OK = 0,
  MA_STATUS_NULL_POINTER = 1,
  MA_STATUS_VALIDATION = 2,
  MA_STATUS_BOUNDARY_ANGLE = 3,
  MA_STATUS_NOT_FINITE = 4,
  MA_STATUS_OUT_OF_DOMAIN = 5,
  MA_STATUS_COVER_GAP = 6,
  MA_STATUS_UNKNOWN_LETTER = 7,
  MA_STATUS_DISAGREEMENT = 8,
  MA_STATUS_IO = 9,
  MA_STATUS_PARSE = 10,
  MA_STATUS_PANIC = 11,
} MaStatus;

/**
 * Rotation decoding method for [`ma_rotation_decode`].
 */
typedef enum MaMethod {
  MA_METHOD_BRUTE = 0,
  MA_METHOD_COVER = 1,
} MaMethod;

/**
 * Planar alphabet `p4 × C_q`.
 */
typedef struct MaPlanarAlphabet MaPlanarAlphabet;

/**
 * Double-coset alphabet `H\SO(3)/K` with its cover set.
 */
typedef struct MaRotationAlphabet MaRotationAlphabet;

/**
 * Spatial alphabet `P432 × Ico`.
 */
typedef struct MaSpatialAlphabet MaSpatialAlphabet;

/**
 * Wedge alphabet `H\SO(3)/H` decoded by sign tests.
 */
typedef struct MaWedgeAlphabet MaWedgeAlphabet;

/**
 * `R = h_i · residual · k_j`.
 */
typedef struct MaRotationWord {
  size_t i;
  size_t j;
  double residual[9];
  size_t distance_evaluations;
  size_t sign_tests;
  /**
   * Nonzero when the two nearest words are within tolerance of each other.
   */
  bool near_tie;
} MaRotationWord;

/**
 * `g = γ(l, m, n) · residual · δ_delta` with residual `(θ, x, y)`.
 */
typedef struct MaPlanarWord {
  size_t l;
  int64_t m;
  int64_t n;
  size_t delta;
  double residual_theta;
  double residual_t[2];
} MaPlanarWord;

/**
 * Spatial word: lattice letter `(p, m, n, o)`, rotation letter and residual.
 */
typedef struct MaSpatialWord {
  size_t p;
  int64_t m;
  int64_t n;
  int64_t o;
  size_t delta;
  double residual_rotation[9];
  double residual_translation[3];
} MaSpatialWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ma_version(void);

/**
 * Message of the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *ma_last_error_message(void);

/**
 * Builds the icosahedral alphabet `Ico\SO(3)/(g·Ico·gᵀ)` with the
 * reference conjugation and a cover estimated from `probes` samples.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum MaStatus ma_rotation_alphabet_new(size_t probes,
                                       uint64_t seed,
                                       struct MaRotationAlphabet **out);

/**
 * # Safety
 * `alphabet` must be null or a handle from [`ma_rotation_alphabet_new`].
 */
void ma_rotation_alphabet_free(struct MaRotationAlphabet *alphabet);

/**
 * Number of shifted domains in the cover set, or 0 for a null handle.
 *
 * # Safety
 * `alphabet` must be null or a live handle.
 */
size_t ma_rotation_alphabet_cover_len(const struct MaRotationAlphabet *alphabet);

/**
 * Decodes a row-major rotation matrix into a word. `method` is an
 * [`MaMethod`] value; anything else is a validation error.
 *
 * # Safety
 * `alphabet` must be a live handle, `matrix` must point to 9 doubles and
 * `out` must be writable.
 */
enum MaStatus ma_rotation_decode(const struct MaRotationAlphabet *alphabet,
                                 const double *matrix,
                                 int32_t method,
                                 struct MaRotationWord *out);

/**
 * Writes the centre `h_i k_j` as 9 row-major doubles.
 *
 * # Safety
 * `alphabet` must be a live handle and `out` must hold 9 doubles.
 */
enum MaStatus ma_rotation_center(const struct MaRotationAlphabet *alphabet,
                                 size_t i,
                                 size_t j,
                                 double *out);

/**
 * Builds the icosahedral wedge alphabet.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum MaStatus ma_wedge_alphabet_new(struct MaWedgeAlphabet **out);

/**
 * # Safety
 * `alphabet` must be null or a handle from [`ma_wedge_alphabet_new`].
 */
void ma_wedge_alphabet_free(struct MaWedgeAlphabet *alphabet);

/**
 * Decodes a row-major rotation matrix with the wedge sign tests.
 *
 * # Safety
 * `alphabet` must be a live handle, `matrix` must point to 9 doubles and
 * `out` must be writable.
 */
enum MaStatus ma_wedge_decode(const struct MaWedgeAlphabet *alphabet,
                              const double *matrix,
                              struct MaRotationWord *out);

/**
 * Builds `p4 × C_q` on a square lattice of the given spacing; `q` must be odd.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum MaStatus ma_planar_alphabet_new(size_t q, double spacing, struct MaPlanarAlphabet **out);

/**
 * # Safety
 * `alphabet` must be null or a handle from [`ma_planar_alphabet_new`].
 */
void ma_planar_alphabet_free(struct MaPlanarAlphabet *alphabet);

/**
 * Decodes the planar pose `(θ, x, y)`.
 *
 * # Safety
 * `alphabet` must be a live handle and `out` must be writable.
 */
enum MaStatus ma_planar_decode(const struct MaPlanarAlphabet *alphabet,
                               double theta,
                               double x,
                               double y,
                               struct MaPlanarWord *out);

/**
 * Builds `P432 × Ico` with lattice spacing `spacing` and a rotation cover
 * estimated from `probes` samples.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum MaStatus ma_spatial_alphabet_new(double spacing,
                                      size_t probes,
                                      uint64_t seed,
                                      struct MaSpatialAlphabet **out);

/**
 * # Safety
 * `alphabet` must be null or a handle from [`ma_spatial_alphabet_new`].
 */
void ma_spatial_alphabet_free(struct MaSpatialAlphabet *alphabet);

/**
 * Decodes a rigid motion given as a row-major rotation and a translation.
 *
 * # Safety
 * `alphabet` must be a live handle, `matrix` must point to 9 doubles,
 * `translation` to 3 doubles and `out` must be writable.
 */
enum MaStatus ma_spatial_decode(const struct MaSpatialAlphabet *alphabet,
                                const double *matrix,
                                const double *translation,
                                struct MaSpatialWord *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOTION_ALPHABET_H */
