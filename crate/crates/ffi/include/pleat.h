#ifndef PLEAT_H
#define PLEAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PleatStatus {
  PLEAT_STATUS_OK = 0,
  PLEAT_STATUS_NULL_POINTER = 1,
  PLEAT_STATUS_INVALID_INPUT = 2,
  PLEAT_STATUS_GEOMETRY = 3,
  PLEAT_STATUS_PANIC = 4,
} PleatStatus;

/*
 A bending map, fixed by a lamination and the region containing `i`.
 */
typedef struct PleatBendMap PleatBendMap;

/*
 Quasi-isometry certificate of a lamination.
 */
typedef struct PleatCertificate PleatCertificate;

/*
 A finite measured lamination of the upper half-plane.
 */
typedef struct PleatLamination PleatLamination;

/*
 A point `(z, t)` of upper half-space, `z = re + i·im`.
 */
typedef struct PleatPointH3 {
  double re;
  double im;
  double t;
} PleatPointH3;

typedef struct PleatConstants {
  double d;
  double theta0;
  double delta;
  double m;
  double b;
  double c;
  double s;
  double t;
  /*
   Nonzero when the hypotheses hold and the constants are in range.
   */
  int32_t valid;
} PleatConstants;

typedef struct PleatGraftSummary {
  double trace_before;
  double trace_after;
  int64_t winding_before;
  int64_t winding_after;
} PleatGraftSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *pleat_version(void);

/*
 Message of the last failed call on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *pleat_last_error(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must come from a `pleat_*_to_json` call and not be freed twice.
 */
void pleat_string_free(char *s);

/*
 Parses `{"leaves": [{"p": .., "q": .., "w": ..}, ..]}`.

 # Safety
 `json` must be a NUL-terminated string and `out_lamination` a valid pointer.
 */
enum PleatStatus pleat_lamination_from_json(const char *json,
                                            struct PleatLamination **out_lamination);

/*
 Builds a lamination from `n` leaves with endpoints `p[k], q[k]` (±INFINITY for
 the point at infinity) and weights `w[k]`.

 # Safety
 `p`, `q` and `w` must point to `n` doubles each (any of them may be NULL when
 `n` is 0), and `out_lamination` must be valid.
 */
enum PleatStatus pleat_lamination_from_leaves(const double *p,
                                              const double *q,
                                              const double *w,
                                              size_t n,
                                              struct PleatLamination **out_lamination);

/*
 # Safety
 `lamination` must come from this library and not be freed twice.
 */
void pleat_lamination_free(struct PleatLamination *lamination);

/*
 Number of leaves; 0 for NULL.

 # Safety
 `lamination` must be NULL or a valid handle.
 */
size_t pleat_lamination_len(const struct PleatLamination *lamination);

/*
 Supremum of the transversal measure over segments shorter than 1.

 # Safety
 `lamination` and `out_norm` must be valid.
 */
enum PleatStatus pleat_lamination_norm(const struct PleatLamination *lamination, double *out_norm);

/*
 Total weight of the leaves crossing the segment from `(x0, y0)` to `(x1, y1)`.

 # Safety
 `lamination` and `out_measure` must be valid.
 */
enum PleatStatus pleat_lamination_transversal_measure(const struct PleatLamination *lamination,
                                                      double x0,
                                                      double y0,
                                                      double x1,
                                                      double y1,
                                                      double *out_measure);

/*
 Serializes the lamination; release the result with [`pleat_string_free`].

 # Safety
 `lamination` and `out_json` must be valid.
 */
enum PleatStatus pleat_lamination_to_json(const struct PleatLamination *lamination,
                                          char **out_json);

/*
 Bending map of a lamination with the base region containing `i`. The lamination
 handle may be freed afterwards.

 # Safety
 `lamination` and `out_map` must be valid.
 */
enum PleatStatus pleat_bend_map_new(const struct PleatLamination *lamination,
                                    struct PleatBendMap **out_map);

/*
 # Safety
 `map` must come from this library and not be freed twice.
 */
void pleat_bend_map_free(struct PleatBendMap *map);

/*
 Image of `x + iy` under the bending map.

 # Safety
 `map` and `out_point` must be valid.
 */
enum PleatStatus pleat_bend_point(const struct PleatBendMap *map,
                                  double x,
                                  double y,
                                  struct PleatPointH3 *out_point);

/*
 Certificate for `(D, θ₀)` with the boundary leaves given by their indices.

 # Safety
 `lamination` and `out_certificate` must be valid; `boundary` must point to
 `n_boundary` indices (or be NULL when `n_boundary` is 0).
 */
enum PleatStatus pleat_certificate_build(const struct PleatLamination *lamination,
                                         const size_t *boundary,
                                         size_t n_boundary,
                                         double d,
                                         double theta0,
                                         struct PleatCertificate **out_certificate);

/*
 # Safety
 `certificate` must come from this library and not be freed twice.
 */
void pleat_certificate_free(struct PleatCertificate *certificate);

/*
 # Safety
 `certificate` and `out_constants` must be valid.
 */
enum PleatStatus pleat_certificate_constants(const struct PleatCertificate *certificate,
                                             struct PleatConstants *out_constants);

/*
 Full certificate as JSON; release the result with [`pleat_string_free`].

 # Safety
 `certificate` and `out_json` must be valid.
 */
enum PleatStatus pleat_certificate_to_json(const struct PleatCertificate *certificate,
                                           char **out_json);

/*
 `|q·α − p|`.
 */
double pleat_loop_measure(double alpha, uint64_t p, uint64_t q);

/*
 Number of preimages of `re + i·im` under the developing map of the crescent of
 angle `theta`.

 # Safety
 `out_count` must be valid.
 */
enum PleatStatus pleat_crescent_fiber_count(double theta, double re, double im, size_t *out_count);

/*
 Grafts the round annulus with holonomy `[[a, b], [c, d]]` (real entries) by a
 cylinder of degree `n`.

 # Safety
 `out_summary` must be valid.
 */
enum PleatStatus pleat_graft_annulus(double a,
                                     double b,
                                     double c,
                                     double d,
                                     uint32_t n,
                                     struct PleatGraftSummary *out_summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLEAT_H */
