#ifndef MUNN_H
#define MUNN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call.
 */
typedef enum MunnStatus {
  MUNN_STATUS_OK = 0,
  /**
   * Malformed JSON, literal or schema.
   */
  MUNN_STATUS_INVALID_INPUT = 1,
  /**
   * A hypothesis of the requested operation does not hold.
   */
  MUNN_STATUS_PRECONDITION = 2,
  /**
   * Search budget exhausted, or an INCONCLUSIVE certificate when one
   * was required.
   */
  MUNN_STATUS_SOFT_FAILURE = 3,
  MUNN_STATUS_NULL_POINTER = 4,
  /**
   * A bug: the library panicked. The handle remains usable.
   */
  MUNN_STATUS_PANIC = 5,
} MunnStatus;

/**
 * A Munn algebra `M(D, m, n, P)`.
 */
typedef struct MunnContextHandle MunnContextHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a context document and stores a new handle in `*out`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum MunnStatus munn_context_new_json(const char *json, struct MunnContextHandle **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `handle` must come from [`munn_context_new_json`] and not be used again.
 */
void munn_context_free(struct MunnContextHandle *handle);

/**
 * Stores the rank of the sandwich matrix in `*out`.
 *
 * # Safety
 * `handle` must be live and `out` valid.
 */
enum MunnStatus munn_context_rank(const struct MunnContextHandle *handle, size_t *out);

/**
 * `A • B = A P B` for element documents `{"entries": ..}`.
 *
 * # Safety
 * Pointers must be valid; strings nul-terminated.
 */
enum MunnStatus munn_sandwich_product_json(const struct MunnContextHandle *handle,
                                           const char *left,
                                           const char *right,
                                           char **out);

/**
 * Runs the engine named by `mode` (for example `"xi2"`) on an element
 * document. `element` may be null for `"refute-r1"`.
 *
 * # Safety
 * Pointers other than `element` must be valid; strings nul-terminated.
 */
enum MunnStatus munn_decompose_json(const struct MunnContextHandle *handle,
                                    const char *element,
                                    const char *mode,
                                    uint64_t seed,
                                    uint64_t budget,
                                    char **out);

/**
 * Verifies a document holding `"element"` and `"witness"`, or a
 * `"certificate"`, such as the output of [`munn_decompose_json`].
 *
 * # Safety
 * Pointers must be valid; strings nul-terminated.
 */
enum MunnStatus munn_verify_json(const struct MunnContextHandle *handle,
                                 const char *document,
                                 char **out);

/**
 * Certifies zero-product determinedness; `kind` is `"assoc"` or
 * `"jordan"`. With `require_certified`, an INCONCLUSIVE certificate is
 * still written but the status is `SoftFailure`.
 *
 * # Safety
 * Pointers must be valid; strings nul-terminated.
 */
enum MunnStatus munn_check_zpd_json(const struct MunnContextHandle *handle,
                                    const char *kind,
                                    uint64_t seed,
                                    size_t max_constraints,
                                    bool require_certified,
                                    char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used again.
 */
void munn_string_free(char *s);

/**
 * The last failure on this thread, or an empty string. Valid until the
 * next call into the library from the same thread.
 */
const char *munn_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUNN_H */
