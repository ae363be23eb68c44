#ifndef ROUNDTRIP_H
#define ROUNDTRIP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum RtStatus {
  RT_STATUS_OK = 0,
  RT_STATUS_INVALID_ARGUMENT = 1,
  RT_STATUS_DIMENSION_MISMATCH = 2,
  // A matrix or vector failed a physicality check (trace, norm, positivity).
  RT_STATUS_NOT_PHYSICAL = 3,
  RT_STATUS_NUMERICAL = 4,
  RT_STATUS_NULL_POINTER = 5,
  RT_STATUS_PANIC = 6,
} RtStatus;

// Density matrix in a truncated Fock space.
typedef struct RtDensityMatrix RtDensityMatrix;

// Pure state in a truncated Fock space.
typedef struct RtFockVector RtFockVector;

// Parameters of the round trip, mirroring `RoundTripConfig`.
typedef struct RtRoundTripConfig {
  double phi;
  double theta;
  double eta1;
  double eta2;
  size_t m;
  size_t rounds;
} RtRoundTripConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *rt_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *rt_version(void);

// Builds a normalized state from `len` amplitudes given as separate real
// and imaginary arrays.
//
// # Safety
// `re` and `im` must each point to `len` readable doubles; `out` must be
// writable.
enum RtStatus rt_fock_vector_new(const double *re,
                                 const double *im,
                                 size_t len,
                                 struct RtFockVector **out);

// Optimal phase state of dimension `m + 1`.
//
// # Safety
// `out` must be writable.
enum RtStatus rt_optimal_phase_state(size_t m, struct RtFockVector **out);

// `(|M⟩ + |M′⟩)/√2` in dimension `m + 1`.
//
// # Safety
// `out` must be writable.
enum RtStatus rt_mm_state(size_t m, size_t m_prime, struct RtFockVector **out);

// Dimension of `v`, or 0 for a null handle.
//
// # Safety
// `v` must be null or a live handle.
size_t rt_fock_vector_dim(const struct RtFockVector *v);

// Amplitude `⟨n|v⟩`.
//
// # Safety
// `v` must be a live handle; `re` and `im` must be writable.
enum RtStatus rt_fock_vector_amp(const struct RtFockVector *v, size_t n, double *re, double *im);

// Releases a vector handle. Null is ignored.
//
// # Safety
// `v` must be null or a handle not yet freed.
void rt_fock_vector_free(struct RtFockVector *v);

// `|v⟩⟨v|`.
//
// # Safety
// `v` must be a live handle; `out` must be writable.
enum RtStatus rt_fock_vector_to_density(const struct RtFockVector *v, struct RtDensityMatrix **out);

// Evolves `|input⟩⟨input|` through the round trip described by `cfg`.
//
// # Safety
// `input` must be a live handle; `out` must be writable.
enum RtStatus rt_roundtrip_oracle(const struct RtFockVector *input,
                                  struct RtRoundTripConfig cfg,
                                  struct RtDensityMatrix **out);

// Analytic single-round output of the optimal phase state.
//
// # Safety
// `out` must be writable.
enum RtStatus rt_closed_form_rho(size_t m, double eta, double phi, struct RtDensityMatrix **out);

// Analytic single-round output of the M&M state.
//
// # Safety
// `out` must be writable.
enum RtStatus rt_closed_form_sigma(size_t m,
                                   size_t m_prime,
                                   double eta,
                                   double phi,
                                   struct RtDensityMatrix **out);

// Dimension of `rho`, or 0 for a null handle.
//
// # Safety
// `rho` must be null or a live handle.
size_t rt_density_dim(const struct RtDensityMatrix *rho);

// Element `⟨row|ρ|col⟩`.
//
// # Safety
// `rho` must be a live handle; `re` and `im` must be writable.
enum RtStatus rt_density_get(const struct RtDensityMatrix *rho,
                             size_t row,
                             size_t col,
                             double *re,
                             double *im);

// Real part of the trace.
//
// # Safety
// `rho` must be a live handle; `out` must be writable.
enum RtStatus rt_density_trace(const struct RtDensityMatrix *rho, double *out);

// Largest elementwise modulus of `a − b`.
//
// # Safety
// `a` and `b` must be live handles; `out` must be writable.
enum RtStatus rt_density_max_abs_diff(const struct RtDensityMatrix *a,
                                      const struct RtDensityMatrix *b,
                                      double *out);

// `e^{iφn̂} ρ e^{−iφn̂}`.
//
// # Safety
// `rho` must be a live handle; `out` must be writable.
enum RtStatus rt_density_apply_phase(const struct RtDensityMatrix *rho,
                                     double phi,
                                     struct RtDensityMatrix **out);

// Releases a density-matrix handle. Null is ignored.
//
// # Safety
// `rho` must be null or a handle not yet freed.
void rt_density_free(struct RtDensityMatrix *rho);

// Writes the `m + 1` Pegg-Barnett outcome probabilities of `rho` to `probs`.
//
// # Safety
// `rho` must be a live handle; `probs` must hold `len` writable doubles.
enum RtStatus rt_povm_distribution(const struct RtDensityMatrix *rho,
                                   size_t m,
                                   double *probs,
                                   size_t len);

// Circular RMS error of the Pegg-Barnett estimate about `true_phi`.
//
// # Safety
// `rho` must be a live handle; `out` must be writable.
enum RtStatus rt_circular_rms(const struct RtDensityMatrix *rho,
                              size_t m,
                              double true_phi,
                              double *out);

// Holevo phase variance; `+∞` when the phase moment vanishes.
//
// # Safety
// `rho` must be a live handle; `out` must be writable.
enum RtStatus rt_holevo_variance(const struct RtDensityMatrix *rho, double *out);

// Error-propagation figure of an M&M round-trip output.
//
// # Safety
// `sigma` must be a live handle; `out` must be writable.
enum RtStatus rt_mm_error(const struct RtDensityMatrix *sigma,
                          size_t m,
                          size_t m_prime,
                          double *out);

// Analytic M&M error from the `Θ` and `Γ` sums.
//
// # Safety
// `out` must be writable.
enum RtStatus rt_mm_error_closed(double theta_sum,
                                 double gamma_sum,
                                 size_t delta,
                                 double phi,
                                 double *out);

// `1/(N η^{N/2})`, the best error of the lossy NOON state.
//
// # Safety
// `out` must be writable.
enum RtStatus rt_noon_error(double n, double eta, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROUNDTRIP_H */
