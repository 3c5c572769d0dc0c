#ifndef CYCLOTOWER_H
#define CYCLOTOWER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Largest `k` accepted by the membership and order queries.
 */
#define CT_MAX_LEVEL 64

typedef enum {
  CT_STATUS_OK = 0,
  CT_STATUS_NULL_POINTER = 1,
  CT_STATUS_INVALID_UTF8 = 2,
  CT_STATUS_INVALID_ARGUMENT = 3,
  CT_STATUS_PARSE = 4,
  CT_STATUS_UNSUPPORTED_CHARACTERISTIC = 5,
  CT_STATUS_INVALID_FIELD = 6,
  CT_STATUS_OUT_OF_SCOPE = 7,
  CT_STATUS_SIZE_GUARD = 8,
  CT_STATUS_NO_ROOT_OF_UNITY = 9,
  CT_STATUS_PANIC = 10,
} CtStatus;

typedef enum {
  CT_TAU_SIGN_PLUS = 0,
  CT_TAU_SIGN_MINUS = 1,
} CtTauSign;

/**
 * Opaque result of classifying `F(ζ_{2^e})/F`.
 */
typedef struct CtClassification CtClassification;

/**
 * Opaque base field handle.
 */
typedef struct CtField CtField;

/**
 * Invariants of a base field. `c2_witness` is 0 when the field lacks property C2.
 */
typedef struct {
  uint32_t nu_plus;
  uint32_t nu;
  bool has_c2;
  uint32_t c2_witness;
  bool zeta4_in_field;
  uint32_t tau_plus_level;
} CtInvariants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ct_version(void);

/**
 * Copy of the last error message on this thread, or null if the last call succeeded.
 */
char *ct_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library that has not been freed.
 */
void ct_string_free(char *s);

/**
 * Parses `fq:p`, `fq:p^k`, `qzeta:m` or `qsqrt:d`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
CtStatus ct_field_parse(const char *text, CtField **out);

/**
 * # Safety
 * `field` must be null or a handle from [`ct_field_parse`] that has not been freed.
 */
void ct_field_free(CtField *field);

/**
 * Canonical text of the field, e.g. `fq:3^2`. Null if `field` is null.
 *
 * # Safety
 * `field` must be null or a live handle.
 */
char *ct_field_to_string(const CtField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
CtStatus ct_field_invariants(const CtField *field, CtInvariants *out);

/**
 * Whether `ζ_{2^k}` lies in the field, for `k <= CT_MAX_LEVEL`.
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
CtStatus ct_field_contains_zeta(const CtField *field, uint32_t k, bool *out);

/**
 * Whether `ζ_{2^k} ± ζ_{2^k}⁻¹` lies in the field, for `k <= CT_MAX_LEVEL`.
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
CtStatus ct_field_contains_tau(const CtField *field, uint32_t k, CtTauSign sign, bool *out);

/**
 * Order of `ζ_{2^k}` modulo the multiplicative group of the field.
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
CtStatus ct_field_order_over(const CtField *field, uint32_t k, uint64_t *out);

/**
 * Classifies `F(ζ_{2^e})/F` for `1 <= e <= 20`.
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
CtStatus ct_classify(const CtField *field, uint32_t e, CtClassification **out);

/**
 * # Safety
 * `c` must be null or a handle from [`ct_classify`] that has not been freed.
 */
void ct_classification_free(CtClassification *c);

/**
 * `[F(ζ_{2^e}) : F]`, or 0 if `c` is null.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
uint64_t ct_classification_degree(const CtClassification *c);

/**
 * # Safety
 * `c` must be null or a live handle.
 */
bool ct_classification_is_cyclic(const CtClassification *c);

/**
 * False when `e <= ν`, where only the degree is reported.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
bool ct_classification_in_scope(const CtClassification *c);

/**
 * Number of maximal towers of quadratic steps; 1 outside the dichotomy, 0 if `c` is null.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
uint64_t ct_classification_tower_count(const CtClassification *c);

/**
 * Minimal polynomial of `ζ_{2^e}` over the field, or null outside the dichotomy.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
char *ct_classification_min_poly(const CtClassification *c);

/**
 * The full classification as JSON. Null if `c` is null.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
char *ct_classification_json(const CtClassification *c);

/**
 * Maximal towers as a JSON array of label arrays, top field first.
 *
 * # Safety
 * `field` must be a live handle and `out` a valid pointer.
 */
CtStatus ct_towers_json(const CtField *field, uint32_t e, char **out);

/**
 * Cross-checks the classifier against the independent oracle. `passed` receives the verdict;
 * `report_json`, if not null, receives the full report.
 *
 * # Safety
 * `field` must be a live handle, `passed` a valid pointer, `report_json` null or valid.
 */
CtStatus ct_verify(const CtField *field, uint32_t e, bool *passed, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLOTOWER_H */
