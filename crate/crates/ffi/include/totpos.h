#ifndef TOTPOS_H
#define TOTPOS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TotposStatus {
  TOTPOS_STATUS_OK = 0,
  TOTPOS_STATUS_NULL_POINTER = 1,
  TOTPOS_STATUS_INVALID_ARGUMENT = 2,
  TOTPOS_STATUS_INVALID_LATTICE = 3,
  TOTPOS_STATUS_DIMENSION_MISMATCH = 4,
  TOTPOS_STATUS_INVALID_DIRECTION = 5,
  TOTPOS_STATUS_INVALID_MODEL = 6,
  TOTPOS_STATUS_INVALID_RANKS = 7,
  TOTPOS_STATUS_DOMAIN = 8,
  TOTPOS_STATUS_NUMERIC = 9,
  TOTPOS_STATUS_BUDGET_EXCEEDED = 10,
  TOTPOS_STATUS_IO = 11,
  TOTPOS_STATUS_PANIC = 12,
} TotposStatus;

/**
 * Checker selector for [`totpos_check`].
 */
typedef enum TotposMode {
  TOTPOS_MODE_PAIRS = 0,
  TOTPOS_MODE_FULL = 1,
  TOTPOS_MODE_CHAIN = 2,
  TOTPOS_MODE_SURVIVAL = 3,
  TOTPOS_MODE_NEGATIVE = 4,
} TotposMode;

/**
 * Value interpretation for [`totpos_lattice_new`].
 */
typedef enum TotposInterpretation {
  TOTPOS_INTERPRETATION_DENSITY = 0,
  TOTPOS_INTERPRETATION_PMF = 1,
} TotposInterpretation;

/**
 * Opaque lattice handle.
 */
typedef struct TotposLattice TotposLattice;

/**
 * Opaque distribution model handle.
 */
typedef struct TotposModel TotposModel;

/**
 * Opaque check report handle.
 */
typedef struct TotposReport TotposReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static nul-terminated string.
 */
const char *totpos_version(void);

/**
 * Message for the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *totpos_last_error_message(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from a `*_to_json` call and not have been freed already.
 */
void totpos_string_free(char *s);

/**
 * Builds a lattice of `ndim` axes with lengths `shape[k]`.
 *
 * `axes` holds the concatenated axis coordinates (sum of `shape` entries) or
 * is null for integer coordinates `0..n_k`. `values` holds the row-major
 * cell values (product of `shape` entries). `interpretation` is a
 * [`TotposInterpretation`] value.
 *
 * # Safety
 * Pointers must be valid for the lengths implied by `ndim` and `shape`.
 */
enum TotposStatus totpos_lattice_new(size_t ndim,
                                     const size_t *shape,
                                     const double *axes,
                                     const double *values,
                                     uint32_t interpretation,
                                     struct TotposLattice **out);

/**
 * Parses a lattice from its JSON document.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum TotposStatus totpos_lattice_from_json(const char *json, struct TotposLattice **out);

/**
 * Serializes a lattice to JSON. Free the result with [`totpos_string_free`].
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum TotposStatus totpos_lattice_to_json(const struct TotposLattice *lattice, char **out);

/**
 * Number of axes, 0 for a null handle.
 *
 * # Safety
 * `lattice` must be null or a live handle.
 */
size_t totpos_lattice_dim(const struct TotposLattice *lattice);

/**
 * Number of cells, 0 for a null handle.
 *
 * # Safety
 * `lattice` must be null or a live handle.
 */
size_t totpos_lattice_len(const struct TotposLattice *lattice);

/**
 * # Safety
 * `lattice` must be null or a handle not yet freed.
 */
void totpos_lattice_free(struct TotposLattice *lattice);

/**
 * Runs one positivity check. `alpha` holds `alpha_len` signs (+1 or -1) and
 * may be null with `alpha_len == 0` for the all-ones direction.
 * `mode` is a [`TotposMode`] value; `tol` must be finite and nonnegative.
 *
 * # Safety
 * `lattice` must be a live handle, `alpha` valid for `alpha_len` bytes and
 * `out` writable.
 */
enum TotposStatus totpos_check(const struct TotposLattice *lattice,
                               const int8_t *alpha,
                               size_t alpha_len,
                               uint32_t mode,
                               double tol,
                               bool log_domain,
                               struct TotposReport **out);

/**
 * True when the report's verdict is pass. False for null.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
bool totpos_report_passed(const struct TotposReport *report);

/**
 * Smallest raw margin seen; `+inf` when nothing was compared, NaN for null.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double totpos_report_min_margin(const struct TotposReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
uint64_t totpos_report_quadruples_checked(const struct TotposReport *report);

/**
 * # Safety
 * `report` must be null or a live handle.
 */
bool totpos_report_has_witness(const struct TotposReport *report);

/**
 * Serializes a report to JSON. Free the result with [`totpos_string_free`].
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum TotposStatus totpos_report_to_json(const struct TotposReport *report, char **out);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void totpos_report_free(struct TotposReport *report);

/**
 * Parses a model spec such as `exp:1`, `uniform:0,1`, `pareto:1,2` or
 * `weibull:0.5,1`.
 *
 * # Safety
 * `spec` must be a nul-terminated string; `out` must be writable.
 */
enum TotposStatus totpos_model_parse(const char *spec, struct TotposModel **out);

/**
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void totpos_model_free(struct TotposModel *model);

/**
 * Joint density of the `i`-th and `j`-th smallest of `d` draws at `(x, y)`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum TotposStatus totpos_pair_density(const struct TotposModel *model,
                                      size_t d,
                                      size_t i,
                                      size_t j,
                                      double x,
                                      double y,
                                      double *out);

/**
 * `P(X_(j) - X_(i) > y | X_(i) = x)` in closed form.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum TotposStatus totpos_gap_survival(const struct TotposModel *model,
                                      size_t d,
                                      size_t i,
                                      size_t j,
                                      double x,
                                      double y,
                                      double *out);

/**
 * Regularized incomplete beta function `I_u(a, b)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum TotposStatus totpos_reg_inc_beta(double u, double a, double b, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOTPOS_H */
