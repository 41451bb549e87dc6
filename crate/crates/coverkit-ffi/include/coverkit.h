#ifndef COVERKIT_H
#define COVERKIT_H

/* Generated by cbindgen from coverkit-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum CkStatus {
  CK_STATUS_OK = 0,
  /**
   * The instance text did not parse; see `ck_last_error_message`.
   */
  CK_STATUS_PARSE_ERROR = 1,
  /**
   * A null pointer or otherwise unusable argument was passed.
   */
  CK_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The engine aborted on a resource cap; the verdict is unknown.
   */
  CK_STATUS_RESOURCE_CAP = 3,
  /**
   * Any other engine failure.
   */
  CK_STATUS_ENGINE_ERROR = 4,
  /**
   * A panic was caught at the boundary; this is a bug.
   */
  CK_STATUS_INTERNAL_ERROR = 5,
} CkStatus;

/**
 * Which fixpoint computation to run.
 */
typedef enum CkView {
  CK_VIEW_CLASSICAL = 0,
  CK_VIEW_DUAL = 1,
} CkView;

/**
 * An opaque, parsed coverability instance.
 */
typedef struct CkInstance CkInstance;

/**
 * Result of a coverability run.
 */
typedef struct CkVerdict {
  /**
   * Whether the instance declared a source configuration.
   */
  bool has_source;
  /**
   * True iff a source was given and it covers the target.
   */
  bool coverable;
  /**
   * Strict fixpoint steps until stabilization.
   */
  uint64_t strict_steps;
  /**
   * Vectors in the extracted pseudo-witness; 0 when not coverable.
   */
  uint64_t witness_len;
} CkVerdict;

/**
 * Structural classification flags of the model.
 */
typedef struct CkNetClass {
  bool is_vas;
  bool is_reset;
  bool is_transfer;
  bool is_strongly_increasing;
  bool is_invertible;
} CkNetClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; do not free.
 */
const char *ck_version(void);

/**
 * Parse an instance from NUL-terminated text into `*out`.
 *
 * # Safety
 * `text` must point to a valid NUL-terminated string and `out` to a
 * writable pointer slot. On success the caller owns the handle and must
 * release it with [`ck_instance_free`].
 */
enum CkStatus ck_instance_parse(const char *text, struct CkInstance **out);

/**
 * Release an instance handle. Passing NULL is a no-op.
 *
 * # Safety
 * `inst` must be NULL or a pointer returned by [`ck_instance_parse`] that
 * has not been freed yet.
 */
void ck_instance_free(struct CkInstance *inst);

/**
 * Dimension of the instance, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live handle from [`ck_instance_parse`].
 */
size_t ck_instance_dim(const struct CkInstance *inst);

/**
 * Render the canonical text form of the instance. The caller frees the
 * returned string with [`ck_string_free`]; NULL is returned for NULL input.
 *
 * # Safety
 * `inst` must be NULL or a live handle from [`ck_instance_parse`].
 */
char *ck_instance_render(const struct CkInstance *inst);

/**
 * Run backward coverability on the instance and fill `*out`.
 *
 * `max_iterations` and `max_set_size` of 0 select the engine defaults.
 *
 * # Safety
 * `inst` must be a live handle from [`ck_instance_parse`] and `out` must
 * point to writable memory for one `CkVerdict`.
 */
enum CkStatus ck_check(const struct CkInstance *inst,
                       enum CkView view,
                       uint64_t max_iterations,
                       uint64_t max_set_size,
                       struct CkVerdict *out);

/**
 * Classify the model of the instance into `*out`.
 *
 * # Safety
 * `inst` must be a live handle from [`ck_instance_parse`] and `out` must
 * point to writable memory for one `CkNetClass`.
 */
enum CkStatus ck_classify(const struct CkInstance *inst, struct CkNetClass *out);

/**
 * The message of the most recent failure on this thread, or NULL. The
 * caller frees it with [`ck_string_free`].
 */
char *ck_last_error_message(void);

/**
 * Release a string returned by this library. Passing NULL is a no-op.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library that has not been
 * freed yet.
 */
void ck_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVERKIT_H */
