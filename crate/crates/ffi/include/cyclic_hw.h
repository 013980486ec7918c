#ifndef CYCLIC_HW_H
#define CYCLIC_HW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum CyclicHwStatus {
  CYCLIC_HW_STATUS_OK = 0,
  CYCLIC_HW_STATUS_NULL_POINTER = 1,
  CYCLIC_HW_STATUS_INVALID_UTF8 = 2,
  CYCLIC_HW_STATUS_INVALID_INPUT = 3,
  CYCLIC_HW_STATUS_HYPOTHESIS_NOT_MET = 4,
  CYCLIC_HW_STATUS_BUDGET_EXCEEDED = 5,
  CYCLIC_HW_STATUS_INDEX_OUT_OF_RANGE = 6,
  CYCLIC_HW_STATUS_BUFFER_TOO_SMALL = 7,
  CYCLIC_HW_STATUS_INTERNAL = 8,
} CyclicHwStatus;

// A validated monodromy datum.
typedef struct CyclicHwDatum CyclicHwDatum;

// A polynomial in one variable over a prime field.
typedef struct CyclicHwPoly CyclicHwPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Owned by the library;
// valid until the next call on the same thread.
const char *cyclic_hw_last_error_message(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void cyclic_hw_string_free(char *s);

// Parses `m:r:a1,...,ar` (or the JSON form) into a new datum handle.
//
// # Safety
// `text` must be a NUL terminated string and `out` a valid pointer.
enum CyclicHwStatus cyclic_hw_datum_parse(const char *text, struct CyclicHwDatum **out);

// # Safety
// `d` must come from `cyclic_hw_datum_parse` and not be freed twice.
void cyclic_hw_datum_free(struct CyclicHwDatum *d);

// # Safety
// `d` and `out` must be valid pointers.
enum CyclicHwStatus cyclic_hw_datum_genus(const struct CyclicHwDatum *d, uint64_t *out);

// Writes the signature values into `buf`. `needed` always receives the full
// length; with `cap` too small the call returns `BUFFER_TOO_SMALL`.
//
// # Safety
// `buf` must hold `cap` values (it may be NULL when `cap` is 0).
enum CyclicHwStatus cyclic_hw_datum_signature(const struct CyclicHwDatum *d,
                                              uint64_t *buf,
                                              uintptr_t cap,
                                              uintptr_t *needed);

// The entry `phi_tau(j', j)` specialized to the line `(inf, t, 1, 0)`; `r` must be 4.
//
// # Safety
// `d` and `out` must be valid pointers.
enum CyclicHwStatus cyclic_hw_phi_specialized(const struct CyclicHwDatum *d,
                                              uint64_t p,
                                              uint64_t tau,
                                              uintptr_t jp,
                                              uintptr_t j,
                                              struct CyclicHwPoly **out);

// Same as `cyclic_hw_phi_specialized` for `psi_tau(j', j)`.
//
// # Safety
// `d` and `out` must be valid pointers.
enum CyclicHwStatus cyclic_hw_psi_specialized(const struct CyclicHwDatum *d,
                                              uint64_t p,
                                              uint64_t tau,
                                              uintptr_t jp,
                                              uintptr_t j,
                                              struct CyclicHwPoly **out);

// # Safety
// `f` must come from this library and not be freed twice.
void cyclic_hw_poly_free(struct CyclicHwPoly *f);

// Degree, or -1 for the zero polynomial.
//
// # Safety
// `f` and `out` must be valid pointers.
enum CyclicHwStatus cyclic_hw_poly_degree(const struct CyclicHwPoly *f, int64_t *out);

// Coefficients, constant term first, in `[0, p)`. Same buffer protocol as
// `cyclic_hw_datum_signature`.
//
// # Safety
// `buf` must hold `cap` values (it may be NULL when `cap` is 0).
enum CyclicHwStatus cyclic_hw_poly_coeffs(const struct CyclicHwPoly *f,
                                          uint64_t *buf,
                                          uintptr_t cap,
                                          uintptr_t *needed);

// Text form such as `3 + 3*t`. Free with `cyclic_hw_string_free`.
//
// # Safety
// `f` and `out` must be valid pointers.
enum CyclicHwStatus cyclic_hw_poly_to_string(const struct CyclicHwPoly *f, char **out);

// Stratum census at `p` as a JSON object. Free with `cyclic_hw_string_free`.
//
// # Safety
// `d` and `out` must be valid pointers.
enum CyclicHwStatus cyclic_hw_census_json(const struct CyclicHwDatum *d, uint64_t p, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLIC_HW_H */
