#ifndef BERGMAN_H
#define BERGMAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum {
  BERGMAN_STATUS_OK = 0,
  BERGMAN_STATUS_NULL_POINTER = 1,
  BERGMAN_STATUS_PARAMETER_OUT_OF_RANGE = 2,
  BERGMAN_STATUS_OUTSIDE_DOMAIN = 3,
  BERGMAN_STATUS_NON_INVERTIBLE = 4,
  BERGMAN_STATUS_SERIES_DIVERGENCE = 5,
  BERGMAN_STATUS_LU_QI_KENG_ZERO = 6,
  BERGMAN_STATUS_ORTHOGONAL_PAIR = 7,
  BERGMAN_STATUS_QUADRATURE = 8,
  BERGMAN_STATUS_TAIL_ESTIMATE = 9,
  BERGMAN_STATUS_INCONSISTENT = 10,
  BERGMAN_STATUS_OUTSIDE_SCOPE = 11,
  BERGMAN_STATUS_SCHEMA = 12,
  BERGMAN_STATUS_IO = 13,
  BERGMAN_STATUS_INVALID_UTF8 = 14,
  BERGMAN_STATUS_PANIC = 15,
} BergmanStatus;

/**
 * Opaque domain handle.
 */
typedef struct BergmanDomain BergmanDomain;

typedef struct {
  double re;
  double im;
} BergmanComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *bergman_last_error_message(void);

/**
 * Stable name of a status code, e.g. `"E_OUTSIDE_DOMAIN"`. Static storage.
 */
const char *bergman_status_name(BergmanStatus status);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
BergmanStatus bergman_domain_ball(uint32_t n, BergmanDomain **out);

/**
 * Hartogs domain with fiber dimension `m` and exponent `s = s_num/s_den`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
BergmanStatus bergman_domain_hartogs(uint32_t n,
                                     uint32_t m,
                                     int64_t s_num,
                                     int64_t s_den,
                                     BergmanDomain **out);

/**
 * Egg domain with block dimensions `p`, `q` and exponent `k = k_num/k_den`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
BergmanStatus bergman_domain_egg(uint32_t n,
                                 uint32_t p,
                                 uint32_t q,
                                 int64_t k_num,
                                 int64_t k_den,
                                 BergmanDomain **out);

/**
 * Domain from its JSON description, e.g. `{"domain":{"kind":"ball","n":2}}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
BergmanStatus bergman_domain_from_json(const char *json, BergmanDomain **out);

/**
 * # Safety
 * `domain` must be NULL or a handle from this library not yet freed.
 */
void bergman_domain_free(BergmanDomain *domain);

/**
 * # Safety
 * `domain` must be a live handle and `out` writable.
 */
BergmanStatus bergman_domain_dim(const BergmanDomain *domain, size_t *out);

/**
 * `K(z, w)`; both points have `len` coordinates.
 *
 * # Safety
 * `z` and `w` must point to `len` readable values; `out` must be writable.
 */
BergmanStatus bergman_kernel(const BergmanDomain *domain,
                             const BergmanComplex *z,
                             const BergmanComplex *w,
                             size_t len,
                             BergmanComplex *out);

/**
 * Diastasis of the Bergman metric between `z` and `w`.
 *
 * # Safety
 * `z` and `w` must point to `len` readable values; `out` must be writable.
 */
BergmanStatus bergman_diastasis(const BergmanDomain *domain,
                                const BergmanComplex *z,
                                const BergmanComplex *w,
                                size_t len,
                                double *out);

/**
 * Rigidity report as JSON for the target dimension `big_n` and scale
 * `lambda = lambda_num/lambda_den`. Release `*out` with [`bergman_string_free`].
 *
 * # Safety
 * `domain` must be a live handle and `out` writable.
 */
BergmanStatus bergman_rigidity_report_json(const BergmanDomain *domain,
                                           uint32_t big_n,
                                           int64_t lambda_num,
                                           int64_t lambda_den,
                                           uint32_t truncation,
                                           char **out);

/**
 * Runs a full command configuration (the JSON accepted by `bergman run`)
 * and returns the report text; `exit_code` receives the command's exit status.
 *
 * # Safety
 * `config_json` must be NUL-terminated; `out` and `exit_code` writable.
 */
BergmanStatus bergman_run_json(const char *config_json, char **out, int32_t *exit_code);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void bergman_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BERGMAN_H */
