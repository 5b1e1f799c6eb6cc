#include <math.h>
#include <stdio.h>
#include <string.h>

#include "motion_alphabet.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,    \
              #cond, ma_last_error_message());                   \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  static const double id[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  /* quarter turn about z */
  static const double rz[9] = {0, -1, 0, 1, 0, 0, 0, 0, 1};
  static const double bad[9] = {2, 0, 0, 0, 1, 0, 0, 0, 1};

  MaWedgeAlphabet *wedge = NULL;
  CHECK(ma_wedge_alphabet_new(&wedge) == MA_STATUS_OK);
  MaRotationWord w;
  CHECK(ma_wedge_decode(wedge, id, &w) == MA_STATUS_OK);
  CHECK(w.i == 0 && w.j == 0 && w.distance_evaluations == 60);
  CHECK(ma_wedge_decode(wedge, bad, &w) == MA_STATUS_VALIDATION);
  CHECK(strlen(ma_last_error_message()) > 0);
  CHECK(ma_wedge_decode(wedge, NULL, &w) == MA_STATUS_NULL_POINTER);
  ma_wedge_alphabet_free(wedge);

  MaRotationAlphabet *rot = NULL;
  CHECK(ma_rotation_alphabet_new(20000, 0, &rot) == MA_STATUS_OK);
  CHECK(ma_rotation_alphabet_cover_len(rot) > 0);
  MaRotationWord a, b;
  CHECK(ma_rotation_decode(rot, rz, MA_METHOD_COVER, &a) == MA_STATUS_OK);
  CHECK(ma_rotation_decode(rot, rz, MA_METHOD_BRUTE, &b) == MA_STATUS_OK);
  CHECK(a.near_tie || (a.i == b.i && a.j == b.j));
  CHECK(ma_rotation_decode(rot, rz, 7, &a) == MA_STATUS_VALIDATION);
  double c[9];
  CHECK(ma_rotation_center(rot, 0, 0, c) == MA_STATUS_OK);
  CHECK(fabs(c[0] - 1.0) < 1e-12 && fabs(c[4] - 1.0) < 1e-12);
  CHECK(ma_rotation_center(rot, 60, 0, c) == MA_STATUS_UNKNOWN_LETTER);
  ma_rotation_alphabet_free(rot);

  MaPlanarAlphabet *planar = NULL;
  CHECK(ma_planar_alphabet_new(4, 1.0, &planar) == MA_STATUS_VALIDATION);
  CHECK(ma_planar_alphabet_new(5, 1.0, &planar) == MA_STATUS_OK);
  MaPlanarWord p;
  CHECK(ma_planar_decode(planar, 0.0, 0.1, -0.2, &p) == MA_STATUS_OK);
  CHECK(p.l == 0 && p.m == 0 && p.n == 0 && p.delta == 0);
  CHECK(fabs(p.residual_t[0] - 0.1) < 1e-12);
  ma_planar_alphabet_free(planar);

  MaSpatialAlphabet *spatial = NULL;
  CHECK(ma_spatial_alphabet_new(1.0, 20000, 0, &spatial) == MA_STATUS_OK);
  const double t[3] = {2.1, -0.9, 0.2};
  MaSpatialWord s;
  CHECK(ma_spatial_decode(spatial, id, t, &s) == MA_STATUS_OK);
  CHECK(s.p == 0 && s.m == 2 && s.n == -1 && s.o == 0 && s.delta == 0);
  ma_spatial_alphabet_free(spatial);

  ma_planar_alphabet_free(NULL);
  printf("ok %s\n", ma_version());
  return 0;
}
