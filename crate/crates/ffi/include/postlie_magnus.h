#ifndef POSTLIE_MAGNUS_H
#define POSTLIE_MAGNUS_H

#include <stddef.h>
#include <stdint.h>

/*
 Status codes returned by every fallible call.
 */
typedef enum {
  PM_STATUS_OK = 0,
  PM_STATUS_NULL_POINTER = 1,
  PM_STATUS_INVALID_ORDER = 2,
  PM_STATUS_INVALID_UTF8 = 3,
  PM_STATUS_PARSE = 4,
  PM_STATUS_MODE_MISMATCH = 5,
  /*
   Input outside the domain of the series (wrong counit, not primitive).
   */
  PM_STATUS_DOMAIN = 6,
  PM_STATUS_INTERNAL = 7,
  PM_STATUS_INVALID_ARGUMENT = 8,
} PmStatus;

typedef enum {
  PM_MODE_POST_LIE = 0,
  PM_MODE_PRE_LIE = 1,
} PmMode;

/*
 Truncated algebra context.
 */
typedef struct PmAlgebra PmAlgebra;

/*
 Element of a truncated algebra.
 */
typedef struct PmElement PmElement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer is
 valid until the next call on the same thread.
 */
const char *pm_last_error(void);

/*
 Static description of a `PmStatus` value.
 */
const char *pm_status_str(int32_t status);

/*
 Creates an algebra with truncation order `order` (1..=9); `mode` is a
 `PmMode` value.

 # Safety
 `out` must be a valid pointer to writable storage.
 */
PmStatus pm_algebra_new(uint32_t mode, uint32_t order, PmAlgebra **out);

/*
 # Safety
 `alg` must be NULL or a handle from `pm_algebra_new` not yet freed.
 */
void pm_algebra_free(PmAlgebra *alg);

/*
 Parses text such as `"[] [[]] - 1/2*[[[]]]"` into an element of `alg`.

 # Safety
 `alg` must be a live handle, `text` a NUL-terminated string and `out`
 writable.
 */
PmStatus pm_element_parse(const PmAlgebra *alg, const char *text, PmElement **out);

/*
 Reads an element from its JSON document. The document's mode must match
 `alg`; its order is capped at the algebra's order.

 # Safety
 As for `pm_element_parse`.
 */
PmStatus pm_element_from_json(const PmAlgebra *alg, const char *json, PmElement **out);

/*
 # Safety
 `e` must be NULL or a live element handle.
 */
void pm_element_free(PmElement *e);

/*
 1 if the two elements are equal, 0 otherwise (including NULL input).

 # Safety
 Non-null arguments must be live element handles.
 */
int32_t pm_element_equal(const PmElement *a, const PmElement *b);

/*
 Number of nonzero terms.

 # Safety
 `e` must be NULL or a live element handle.
 */
size_t pm_element_len(const PmElement *e);

/*
 Grossman–Larson product `a ∗ b`.

 # Safety
 `alg`, `a`, `b` must be live handles and `out` writable.
 */
PmStatus pm_gl_mul(const PmAlgebra *alg, const PmElement *a, const PmElement *b, PmElement **out);

/*
 Concatenation product.

 # Safety
 As for `pm_gl_mul`.
 */
PmStatus pm_concat_mul(const PmAlgebra *alg,
                       const PmElement *a,
                       const PmElement *b,
                       PmElement **out);

/*
 BCH product for concatenation, `log(exp a · exp b)`.

 # Safety
 As for `pm_gl_mul`.
 */
PmStatus pm_bch_h(const PmAlgebra *alg, const PmElement *a, const PmElement *b, PmElement **out);

/*
 BCH product for the Grossman–Larson product.

 # Safety
 As for `pm_gl_mul`.
 */
PmStatus pm_bch_g(const PmAlgebra *alg, const PmElement *a, const PmElement *b, PmElement **out);

/*
 Post-Lie Magnus expansion χ(x) of a primitive `x`.

 # Safety
 `alg`, `x` must be live handles and `out` writable.
 */
PmStatus pm_chi(const PmAlgebra *alg, const PmElement *x, PmElement **out);

/*
 Inverse Φ of the post-Lie Magnus expansion.

 # Safety
 As for `pm_chi`.
 */
PmStatus pm_phi(const PmAlgebra *alg, const PmElement *x, PmElement **out);

/*
 The isomorphism Θ from concatenation words to Grossman–Larson products.

 # Safety
 As for `pm_chi`.
 */
PmStatus pm_theta(const PmAlgebra *alg, const PmElement *x, PmElement **out);

/*
 Inverse of Θ.

 # Safety
 As for `pm_chi`.
 */
PmStatus pm_theta_inverse(const PmAlgebra *alg, const PmElement *x, PmElement **out);

/*
 Text form, one `coefficient<TAB>word` line per term. Free the result
 with `pm_string_free`.

 # Safety
 `e` must be a live element handle and `out` writable.
 */
PmStatus pm_element_to_text(const PmElement *e, char **out);

/*
 Versioned JSON document. Free the result with `pm_string_free`.

 # Safety
 As for `pm_element_to_text`.
 */
PmStatus pm_element_to_json(const PmElement *e, char **out);

/*
 # Safety
 `s` must be NULL or a string returned by this library, freed once.
 */
void pm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSTLIE_MAGNUS_H */
