#ifndef PULSE_TANGLE_H
#define PULSE_TANGLE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PtInitialState {
  // |e⟩
  PT_INITIAL_STATE_EXCITED = 0,
  // |g⟩
  PT_INITIAL_STATE_GROUND = 1,
  // (|e⟩+|g⟩)/√2
  PT_INITIAL_STATE_PLUS_X = 2,
  // (|e⟩−|g⟩)/√2
  PT_INITIAL_STATE_MINUS_X = 3,
  // (|e⟩+i|g⟩)/√2
  PT_INITIAL_STATE_PLUS_Y = 4,
  // (|e⟩−i|g⟩)/√2
  PT_INITIAL_STATE_MINUS_Y = 5,
} PtInitialState;

typedef enum PtMethod {
  PT_METHOD_FULL = 0,
  PT_METHOD_LUMPED = 1,
  PT_METHOD_CLOSED = 2,
  PT_METHOD_ANALYTIC = 3,
  PT_METHOD_BOUND = 4,
} PtMethod;

typedef enum PtStatus {
  PT_STATUS_OK = 0,
  PT_STATUS_NULL_POINTER = 1,
  PT_STATUS_INVALID_ARGUMENT = 2,
  PT_STATUS_NUMERICAL_FAILURE = 3,
  PT_STATUS_BUFFER_TOO_SMALL = 4,
  PT_STATUS_PANIC = 5,
} PtStatus;

// Opaque parameter set.
typedef struct PtParams PtParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a parameter set with one of the six named initial states and the
// default substep count.
//
// # Safety
// `out` must be valid for writing a pointer.
enum PtStatus pt_params_new(double area_bar,
                            size_t n_modes,
                            double gamma_tau,
                            enum PtInitialState initial,
                            struct PtParams **out);

// Creates a parameter set with an arbitrary normalized initial atomic state
// c_e|e⟩ + c_g|g⟩.
//
// # Safety
// `out` must be valid for writing a pointer.
enum PtStatus pt_params_new_custom(double area_bar,
                                   size_t n_modes,
                                   double gamma_tau,
                                   double excited_re,
                                   double excited_im,
                                   double ground_re,
                                   double ground_im,
                                   struct PtParams **out);

// Sets the number of RK4 substeps per coarse-grained interval.
//
// # Safety
// `params` must come from `pt_params_new*` and not have been freed.
enum PtStatus pt_params_set_substeps(struct PtParams *params, size_t substeps);

// Releases a parameter set. Null is ignored.
//
// # Safety
// `params` must come from `pt_params_new*` and must not be used afterwards.
void pt_params_free(struct PtParams *params);

// Final tangle of the chosen method.
//
// # Safety
// `params` must be a live handle and `out` valid for writing.
enum PtStatus pt_final_tangle(const struct PtParams *params, enum PtMethod method, double *out);

// Tangle after each of the N intervals for the full, lumped or closed model.
// Writes min(N, capacity) values and the number needed to `written`; returns
// `BufferTooSmall` when capacity < N.
//
// # Safety
// `params` must be a live handle, `buffer` valid for `capacity` doubles and
// `written` valid for writing.
enum PtStatus pt_tangle_series(const struct PtParams *params,
                               enum PtMethod method,
                               double *buffer,
                               size_t capacity,
                               size_t *written);

// Upper bound on the atom/all-mode tangle. `closure_defect` (nullable)
// receives P_NJ + Σ P_LJ − 1.
//
// # Safety
// `params` must be a live handle, `bound` valid for writing and
// `closure_defect` null or valid for writing.
enum PtStatus pt_upper_bound(const struct PtParams *params, double *bound, double *closure_defect);

// Wootters tangle of a two-qubit density matrix given as 16 row-major real
// and imaginary parts.
//
// # Safety
// `re` and `im` must each point to 16 doubles; `out` must be valid for writing.
enum PtStatus pt_wootters_tangle(const double *re, const double *im, double *out);

// Tangle 4 det ρ_A of a normalized pure state of a qubit and a
// `field_dim`-level system, amplitudes ordered qubit-major.
//
// # Safety
// `re` and `im` must each point to 2·field_dim doubles; `out` must be valid
// for writing.
enum PtStatus pt_pure_tangle(const double *re, const double *im, size_t field_dim, double *out);

// First-order closed-system tangle for a named initial state.
//
// # Safety
// `out` must be valid for writing.
enum PtStatus pt_closed_tangle_analytic(enum PtInitialState initial, double kappa_tau, double *out);

// Message for the most recent failure on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *pt_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *pt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PULSE_TANGLE_H */
