#ifndef CHOIMAP_H
#define CHOIMAP_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call.
typedef enum ChoimapStatus {
  CHOIMAP_STATUS_OK = 0,
  CHOIMAP_STATUS_NULL_POINTER = 1,
  CHOIMAP_STATUS_INVALID_ARGUMENT = 2,
  CHOIMAP_STATUS_UNKNOWN_MAP = 3,
  CHOIMAP_STATUS_BUFFER_TOO_SMALL = 4,
  CHOIMAP_STATUS_CHECK_FAILED = 5,
  CHOIMAP_STATUS_INTERNAL = 6,
} ChoimapStatus;

// Opaque map on `M_3`.
typedef struct ChoimapMap ChoimapMap;

// Outcome of [`choimap_sample_positivity`]. The witness is meaningful only
// when `violation` is true.
typedef struct ChoimapPositivity {
  bool violation;
  double lambda_min;
  uint64_t samples_used;
  double witness_re[3];
  double witness_im[3];
} ChoimapPositivity;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *choimap_version(void);

// Copies the last error message of this thread into `buf`. Returns the
// message length including the NUL; nothing is written when `len` is too small.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t choimap_last_error(char *buf, size_t len);

// Builtin map by name: `choi`, `transpose`, `identity`, `psi1`, `psi2`, `psi3`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum ChoimapStatus choimap_map_builtin(const char *name, struct ChoimapMap **out);

// Map from a JSON map spec.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum ChoimapStatus choimap_map_from_json(const char *json, struct ChoimapMap **out);

// Map from its nine basis images, 81 real and 81 imaginary parts.
//
// # Safety
// `re` and `im` must each point to 81 doubles and `out` must be valid.
enum ChoimapStatus choimap_map_from_images(const double *re,
                                           const double *im,
                                           struct ChoimapMap **out);

// Releases a map. Null is ignored.
//
// # Safety
// `map` must come from a `choimap_map_*` constructor and not be used again.
void choimap_map_free(struct ChoimapMap *map);

// Writes the JSON spec of `map` into `buf`; `needed` receives the size
// including the NUL. With a null or short `buf` nothing is written and
// `BufferTooSmall` is returned, so a first call can query the size.
//
// # Safety
// `map` must be a valid handle, `buf` null or valid for `len` bytes, and
// `needed` null or valid.
enum ChoimapStatus choimap_map_to_json(const struct ChoimapMap *map,
                                       char *buf,
                                       size_t len,
                                       size_t *needed);

// `map(X)` for a 3x3 matrix `X`.
//
// # Safety
// Input arrays must hold 9 doubles and output arrays room for 9.
enum ChoimapStatus choimap_map_apply(const struct ChoimapMap *map,
                                     const double *x_re,
                                     const double *x_im,
                                     double *out_re,
                                     double *out_im);

// Ascending eigenvalues of `map(v v*)`.
//
// # Safety
// `v_re`, `v_im` must hold 3 doubles and `eigenvalues` room for 3.
enum ChoimapStatus choimap_rank_one_eigenvalues(const struct ChoimapMap *map,
                                                const double *v_re,
                                                const double *v_im,
                                                double *eigenvalues);

// Ascending eigenvalues of the Choi matrix of `map` and of `map∘t`, and
// the CP and co-CP verdicts at `tol`.
//
// # Safety
// `choi` and `choi_t` must have room for 9 doubles; the flags must be valid.
enum ChoimapStatus choimap_choi_spectrum(const struct ChoimapMap *map,
                                         double tol,
                                         double *choi,
                                         double *choi_t,
                                         bool *cp,
                                         bool *co_cp);

// Seeded sampling of `λ_min(map(x x*))` over random unit vectors.
//
// # Safety
// `map` must be a valid handle and `out` a valid pointer.
enum ChoimapStatus choimap_sample_positivity(const struct ChoimapMap *map,
                                             uint64_t samples,
                                             uint64_t seed,
                                             double tol,
                                             struct ChoimapPositivity *out);

// Runs the exact extremality replay; `steps` receives the log length.
// Returns `CheckFailed` if any identity or rule fails.
//
// # Safety
// `concluded` and `steps` must be null or valid.
enum ChoimapStatus choimap_replay(bool *concluded, size_t *steps);

// Runs every check of `verify-paper` with default settings and `seed`.
// Returns `CheckFailed` naming the failing sections when one fails.
//
// # Safety
// `passed` must be null or valid.
enum ChoimapStatus choimap_verify_paper(uint64_t seed, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHOIMAP_H */
