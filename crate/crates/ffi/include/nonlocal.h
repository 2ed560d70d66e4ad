#ifndef NONLOCAL_H
#define NONLOCAL_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NlStatus {
  NL_STATUS_OK = 0,
  NL_STATUS_INVALID_INPUT = 1,
  NL_STATUS_DIMENSION_MISMATCH = 2,
  NL_STATUS_NEGATIVE_PROBABILITY = 3,
  NL_STATUS_NON_FINITE = 4,
  NL_STATUS_NO_CONVERGENCE = 5,
  NL_STATUS_IO = 6,
  NL_STATUS_NULL_POINTER = 7,
  NL_STATUS_PANIC = 8,
} NlStatus;

/**
 * Result of a multi-start `I_N` maximisation.
 */
typedef struct NlReport NlReport;

/**
 * Bipartite density matrix.
 */
typedef struct NlState NlState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message, NUL-terminated and
 * truncated to `len` bytes. Returns the full message length excluding the
 * terminator, or 0 when no error was recorded. `buf` may be null to query
 * the length.
 *
 * # Safety
 * `buf` must be null or valid for writes of `len` bytes.
 */
size_t nl_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *nl_version(void);

/**
 * `(1/√n) Σ_j |jj⟩` as a density matrix.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NlStatus nl_state_maximally_entangled(size_t n, struct NlState **out);

/**
 * `p |Ψ_E⟩⟨Ψ_E| + (1 − p) I/n²`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NlStatus nl_state_noisy(double p, size_t n, struct NlState **out);

/**
 * Pure `H₊` state from three polar angles in `[0, π/2]` and three phases in `[0, 2π)`.
 *
 * # Safety
 * `theta` and `gamma` must each point to 3 doubles; `out` must be valid for writes.
 */
enum NlStatus nl_state_pure(const double *theta, const double *gamma, struct NlState **out);

/**
 * Mixture of the four `H₊` basis states with weights `p[0..4]`.
 *
 * # Safety
 * `p` must point to 4 doubles; `out` must be valid for writes.
 */
enum NlStatus nl_state_mixed(const double *p, struct NlState **out);

/**
 * Total dimension of the state, 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t nl_state_dim(const struct NlState *state);

/**
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void nl_state_free(struct NlState *state);

/**
 * Bell operator expectation for the fixed 4×4 observables.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for writes.
 */
enum NlStatus nl_chsh(const struct NlState *state, double *out);

/**
 * `I_n` at phases `(α₁, α₂, β₁, β₂)`.
 *
 * # Safety
 * `state` must be a live handle, `phases` must point to 4 doubles and `out`
 * must be valid for writes.
 */
enum NlStatus nl_cglmp(const struct NlState *state, size_t n, const double *phases, double *out);

/**
 * Multi-start Nelder-Mead maximisation of `I_n`. A non-positive `tolerance`
 * selects the default.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for writes.
 */
enum NlStatus nl_maximize(const struct NlState *state,
                          size_t n,
                          size_t restarts,
                          uint64_t seed,
                          double tolerance,
                          struct NlReport **out);

/**
 * Best `I_n` found, NaN for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double nl_report_value(const struct NlReport *report);

/**
 * Whether the search behind the best value met its stopping rule.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
bool nl_report_converged(const struct NlReport *report);

/**
 * Writes the best phases, reduced into `[0, n)`, to `out[0..4]`.
 *
 * # Safety
 * `report` must be a live handle and `out` valid for writes of 4 doubles.
 */
enum NlStatus nl_report_phases(const struct NlReport *report, double *out);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void nl_report_free(struct NlReport *report);

/**
 * Entanglement parameter `P` and measure `1 − |P|` of a pure `H₊` state.
 *
 * # Safety
 * `theta` and `gamma` must each point to 3 doubles; `p` and `measure` must be
 * valid for writes.
 */
enum NlStatus nl_entanglement(const double *theta, const double *gamma, double *p, double *measure);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NONLOCAL_H */
