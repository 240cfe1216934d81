#ifndef METACSP_H
#define METACSP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MetacspStatus {
  METACSP_STATUS_OK = 0,
  METACSP_STATUS_NULL_POINTER = 1,
  METACSP_STATUS_INVALID_UTF8 = 2,
  METACSP_STATUS_PARSE = 3,
  METACSP_STATUS_INVALID_ARGUMENT = 4,
  METACSP_STATUS_NOT_IA = 5,
  METACSP_STATUS_NOT_INVERTIBLE = 6,
  METACSP_STATUS_NOT_MEMBER = 7,
  METACSP_STATUS_PRECONDITION = 8,
  METACSP_STATUS_VERIFICATION = 9,
  METACSP_STATUS_CORRUPT = 10,
  METACSP_STATUS_IO = 11,
  METACSP_STATUS_PANIC = 12,
} MetacspStatus;

// A decomposition certificate.
typedef struct MetacspCertificate MetacspCertificate;

// An IA matrix.
typedef struct MetacspMatrix MetacspMatrix;

// A Laurent polynomial.
typedef struct MetacspPoly MetacspPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. Borrowed; do not free.
const char *metacsp_last_error(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void metacsp_string_free(char *s);

// Parses a polynomial in `x1..xn`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` writable.
enum MetacspStatus metacsp_poly_parse(size_t n, const char *text_, struct MetacspPoly **out);

// Product of two polynomials in the same ring.
//
// # Safety
// Handles must be live; `out` writable.
enum MetacspStatus metacsp_poly_mul(const struct MetacspPoly *a,
                                    const struct MetacspPoly *b,
                                    struct MetacspPoly **out);

// Whether `p` lies in `H_{n,m}`.
//
// # Safety
// `p` must be live; `out` writable.
enum MetacspStatus metacsp_poly_in_h(const struct MetacspPoly *p, uint64_t m, bool *out);

// Canonical text of `p`; free with [`metacsp_string_free`]. NULL on a null handle.
//
// # Safety
// `p` must be live or NULL.
char *metacsp_poly_to_string(const struct MetacspPoly *p);

// # Safety
// `p` must come from this library and not be freed twice. NULL is ignored.
void metacsp_poly_free(struct MetacspPoly *p);

// Whether the word is trivial in the free metabelian group of rank `n`.
//
// # Safety
// `word` must be a NUL-terminated string and `out` writable.
enum MetacspStatus metacsp_word_is_identity(size_t n, const char *word, bool *out);

// Builds a matrix from a builder expression such as `pow(elem(1,2),16)`.
//
// # Safety
// `expr` must be a NUL-terminated string and `out` writable.
enum MetacspStatus metacsp_matrix_build(size_t n, const char *expr, struct MetacspMatrix **out);

// Parses the matrix text format (one comma-separated row per line).
//
// # Safety
// `text_` must be a NUL-terminated string and `out` writable.
enum MetacspStatus metacsp_matrix_parse(const char *text_, struct MetacspMatrix **out);

// Whether the matrix fixes the sigma vector and has a monomial determinant.
//
// # Safety
// `m` must be live; `out` writable.
enum MetacspStatus metacsp_matrix_is_ia(const struct MetacspMatrix *m, bool *out);

// Size `n` of the matrix, 0 for NULL.
//
// # Safety
// `m` must be live or NULL.
size_t metacsp_matrix_size(const struct MetacspMatrix *m);

// Entry `(i, j)`, 1-based, as a new polynomial handle.
//
// # Safety
// `m` must be live; `out` writable.
enum MetacspStatus metacsp_matrix_entry(const struct MetacspMatrix *m,
                                        size_t i,
                                        size_t j,
                                        struct MetacspPoly **out);

// Matrix text, one row per line; free with [`metacsp_string_free`].
//
// # Safety
// `m` must be live or NULL.
char *metacsp_matrix_to_string(const struct MetacspMatrix *m);

// # Safety
// `m` must come from this library and not be freed twice. NULL is ignored.
void metacsp_matrix_free(struct MetacspMatrix *m);

// Decomposes a member of `IG_{n,m^2}`, `n >= 4`, and self-checks the certificate.
//
// # Safety
// `alpha` must be live; `out` writable.
enum MetacspStatus metacsp_decompose(const struct MetacspMatrix *alpha,
                                     uint64_t m,
                                     struct MetacspCertificate **out);

// Re-verifies a certificate from its contents. A failure is reported as
// `METACSP_STATUS_VERIFICATION`; the offending factor index is written to
// `bad_index` when it is non-NULL, or `SIZE_MAX` for a header failure.
//
// # Safety
// `cert` must be live; `bad_index` writable or NULL.
enum MetacspStatus metacsp_certificate_check(const struct MetacspCertificate *cert,
                                             size_t *bad_index);

// Number of factors, 0 for NULL.
//
// # Safety
// `cert` must be live or NULL.
size_t metacsp_certificate_factor_count(const struct MetacspCertificate *cert);

// Product of the factors as a new matrix handle.
//
// # Safety
// `cert` must be live; `out` writable.
enum MetacspStatus metacsp_certificate_product(const struct MetacspCertificate *cert,
                                               struct MetacspMatrix **out);

// Certificate JSON; free with [`metacsp_string_free`].
//
// # Safety
// `cert` must be live or NULL.
char *metacsp_certificate_to_json(const struct MetacspCertificate *cert);

// Parses certificate JSON. The result is not checked; see [`metacsp_certificate_check`].
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum MetacspStatus metacsp_certificate_from_json(const char *json, struct MetacspCertificate **out);

// # Safety
// `cert` must come from this library and not be freed twice. NULL is ignored.
void metacsp_certificate_free(struct MetacspCertificate *cert);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METACSP_H */
