#ifndef ZCCS_H
#define ZCCS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a library call.
typedef enum ZccsStatus {
  ZCCS_STATUS_OK = 0,
  ZCCS_STATUS_NULL_POINTER = 1,
  ZCCS_STATUS_INVALID_ARGUMENT = 2,
  ZCCS_STATUS_PARSE = 3,
  ZCCS_STATUS_PRECONDITION = 4,
  ZCCS_STATUS_NOT_UNIMODULAR = 5,
  ZCCS_STATUS_OVERFLOW = 6,
  ZCCS_STATUS_INTERNAL = 7,
} ZccsStatus;

// A polynomial code matrix together with the zone width its construction guarantees.
typedef struct ZccsMatrix ZccsMatrix;

// Verifier verdict. `energy` is meaningful only when `energy_is_integer` is set;
// `bound` is 0 when the matrix has no zero correlation zone.
typedef struct ZccsVerdict {
  bool energy_is_integer;
  int64_t energy;
  size_t zcz_width;
  bool is_pu;
  size_t bound;
  bool optimal;
} ZccsVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Seed ZPU matrix from two catalog BH names (for example `"F3"` and `"BH63"`).
//
// # Safety
// `um` and `uk` must be NUL-terminated strings; `out` must be writable.
enum ZccsStatus zccs_seed_zpu(const char *um, const char *uk, struct ZccsMatrix **out);

// Extends a ZPU matrix with zone width `z` by the catalog BH matrix `um`.
// Passing `z = 0` uses the handle's recorded width, or else its achieved width.
//
// # Safety
// `um` must be a NUL-terminated string, `g` a live handle, `out` writable.
enum ZccsStatus zccs_extend_zcz(const char *um,
                                const struct ZccsMatrix *g,
                                size_t z,
                                struct ZccsMatrix **out);

// Evaluates a JSON construction recipe. String inputs in the recipe may name
// catalog BH matrices or document files.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum ZccsStatus zccs_construct_from_recipe_json(const char *json, struct ZccsMatrix **out);

// Parses a code-set document in JSON or text-table form.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum ZccsStatus zccs_matrix_from_document(const char *text, struct ZccsMatrix **out);

// Serializes a matrix as a JSON document.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ZccsStatus zccs_matrix_to_document_json(const struct ZccsMatrix *m, char **out);

// Serializes a matrix as a text table; `signs` selects `+`/`-` rows (binary only).
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ZccsStatus zccs_matrix_to_table(const struct ZccsMatrix *m, bool signs, char **out);

// Writes the phase modulus q, flock size M, set size K and length L.
//
// # Safety
// `m` must be a live handle; every output pointer must be writable.
enum ZccsStatus zccs_matrix_dims(const struct ZccsMatrix *m,
                                 uint32_t *q,
                                 size_t *rows,
                                 size_t *cols,
                                 size_t *length);

// Copies the M·K·L exponents into `buf`, indexed `(k·M + m)·L + l`.
// Fails with `InvalidArgument` when `capacity` is too small.
//
// # Safety
// `m` must be a live handle; `buf` must hold `capacity` writable `u32`s.
enum ZccsStatus zccs_matrix_exponents(const struct ZccsMatrix *m, uint32_t *buf, size_t capacity);

// Writes whether the matrix is ZPU at zone width `z`.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ZccsStatus zccs_is_zpu(const struct ZccsMatrix *m, size_t z, bool *out);

// Writes the achieved zero correlation zone width.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ZccsStatus zccs_zcz_width(const struct ZccsMatrix *m, size_t *out);

// Runs the verifier and writes its verdict.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ZccsStatus zccs_check_optimal(const struct ZccsMatrix *m, struct ZccsVerdict *out);

// Full verifier report as JSON, including the first violation and the claim check.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum ZccsStatus zccs_report_json(const struct ZccsMatrix *m, char **out);

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next library call on the same thread; do not free it.
const char *zccs_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void zccs_string_free(char *s);

// Releases a matrix handle. Null is ignored.
//
// # Safety
// `m` must come from this library and not have been freed.
void zccs_matrix_free(struct ZccsMatrix *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZCCS_H */
