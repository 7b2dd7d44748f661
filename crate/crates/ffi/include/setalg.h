#ifndef SETALG_H
#define SETALG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum SetalgStatus {
  SETALG_STATUS_OK = 0,
  SETALG_STATUS_NULL_POINTER = 1,
  SETALG_STATUS_INVALID_ARGUMENT = 2,
  SETALG_STATUS_GROUND_MISMATCH = 3,
  SETALG_STATUS_GROUND_TOO_LARGE = 4,
  SETALG_STATUS_DEGREE_EXCEEDS_GROUND = 5,
  SETALG_STATUS_NOT_ZERO_DIVISOR = 6,
  SETALG_STATUS_NOT_FOUND = 7,
  SETALG_STATUS_NO_TRANSVERSAL = 8,
  SETALG_STATUS_PANIC = 9,
} SetalgStatus;

// A finitely supported map from `degree`-subsets of a ground set to rationals.
typedef struct SetalgFunction SetalgFunction;

// A pair `(f, g)` of nonzero functions with `fg = 0`.
typedef struct SetalgPair SetalgPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *setalg_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void setalg_string_free(char *s);

// The zero function of the given degree on `ground_size ≤ 64` points.
//
// # Safety
// `out` must be valid for writes.
enum SetalgStatus setalg_function_new(size_t ground_size,
                                      size_t degree,
                                      struct SetalgFunction **out);

// The function `e`, equal to 1 on every singleton.
//
// # Safety
// `out` must be valid for writes.
enum SetalgStatus setalg_function_e(size_t ground_size, struct SetalgFunction **out);

// Sets `f(set) = num/den`.
//
// # Safety
// `f` must be a live handle.
enum SetalgStatus setalg_function_set(struct SetalgFunction *f,
                                      uint64_t set,
                                      int64_t num,
                                      int64_t den);

// Writes `f(set)` as a decimal string `"num/den"` (or `"num"`).
//
// # Safety
// `f` must be a live handle and `out` valid for writes.
enum SetalgStatus setalg_function_value(const struct SetalgFunction *f, uint64_t set, char **out);

// Number of sets where `f` is nonzero; 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t setalg_function_support_len(const struct SetalgFunction *f);

// Degree of `f`; 0 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
size_t setalg_function_degree(const struct SetalgFunction *f);

// Serializes `f` as `{ground_size, degree, terms:[{set, num, den}]}`.
//
// # Safety
// `f` must be a live handle and `out` valid for writes.
enum SetalgStatus setalg_function_to_json(const struct SetalgFunction *f, char **out);

// Parses the JSON produced by [`setalg_function_to_json`].
//
// # Safety
// `json` must be a nul-terminated string and `out` valid for writes.
enum SetalgStatus setalg_function_from_json(const char *json, struct SetalgFunction **out);

// The product `fg`.
//
// # Safety
// `f` and `g` must be live handles and `out` valid for writes.
enum SetalgStatus setalg_product(const struct SetalgFunction *f,
                                 const struct SetalgFunction *g,
                                 struct SetalgFunction **out);

// A nonzero `g` of degree `n` with `fg = 0`. Returns `NOT_FOUND` and writes
// null when multiplication by `f` is injective in degree `n`.
//
// # Safety
// `f` must be a live handle and `out` valid for writes.
enum SetalgStatus setalg_cofactor(const struct SetalgFunction *f,
                                  size_t n,
                                  struct SetalgFunction **out);

// Releases a function handle. Null is ignored.
//
// # Safety
// `f` must be null or a live handle, not used afterwards.
void setalg_function_free(struct SetalgFunction *f);

// Minimum transversal of the family given by `len` bit masks on
// `ground_size` points. Writes its size and a witness mask.
//
// # Safety
// `sets` must point to `len` masks (or be null when `len = 0`); outputs must be valid.
enum SetalgStatus setalg_tau(size_t ground_size,
                             const uint64_t *sets,
                             size_t len,
                             size_t *tau_out,
                             uint64_t *witness_out);

// Checks `f ≠ 0`, `g ≠ 0`, `fg = 0` and builds a pair from copies of `f` and `g`.
//
// # Safety
// `f`, `g` must be live handles and `out` valid for writes.
enum SetalgStatus setalg_pair_new(const struct SetalgFunction *f,
                                  const struct SetalgFunction *g,
                                  struct SetalgPair **out);

// The parity gadget for `τ(1, n) = 2n`.
//
// # Safety
// `out` must be valid for writes.
enum SetalgStatus setalg_gadget_tau1n(size_t n, struct SetalgPair **out);

// The block gadget reaching `τ = (m+1)(n+1) − 2`.
//
// # Safety
// `out` must be valid for writes.
enum SetalgStatus setalg_gadget_lower(size_t m, size_t n, struct SetalgPair **out);

// The two-squares pair on 8 points.
//
// # Safety
// `out` must be valid for writes.
enum SetalgStatus setalg_two_squares(struct SetalgPair **out);

// Copies of the two components of a pair.
//
// # Safety
// `pair` must be a live handle; outputs must be valid for writes.
enum SetalgStatus setalg_pair_components(const struct SetalgPair *pair,
                                         struct SetalgFunction **f_out,
                                         struct SetalgFunction **g_out);

// Re-verifies the pair and writes `τ(supp f ∪ supp g)` with a witness mask.
//
// # Safety
// `pair` must be a live handle; outputs must be valid for writes.
enum SetalgStatus setalg_pair_verify(const struct SetalgPair *pair,
                                     size_t *tau_out,
                                     uint64_t *witness_out);

// Certificate JSON `{f, g, tau, tau_witness, formula_expected, match}`.
// `expected_tau < 0` means no formula value.
//
// # Safety
// `pair` must be a live handle and `out` valid for writes.
enum SetalgStatus setalg_pair_certificate_json(const struct SetalgPair *pair,
                                               int64_t expected_tau,
                                               char **out);

// Releases a pair handle. Null is ignored.
//
// # Safety
// `pair` must be null or a live handle, not used afterwards.
void setalg_pair_free(struct SetalgPair *pair);

// The symbolic upper bound on `τ(m, n)`, e.g. `2·(R²_{5^30}(4)+2)`, UTF-8.
//
// # Safety
// `out` must be valid for writes.
enum SetalgStatus setalg_bound_expr(size_t m, size_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SETALG_H */
