#ifndef ZIGZAG_H
#define ZIGZAG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZzStatus {
  ZZ_STATUS_OK = 0,
  ZZ_STATUS_NULL_ARGUMENT = 1,
  ZZ_STATUS_INVALID_UTF8 = 2,
  ZZ_STATUS_INVALID_ARGUMENT = 3,
  ZZ_STATUS_PARSE_ERROR = 4,
  ZZ_STATUS_VERSION_UNSUPPORTED = 5,
  ZZ_STATUS_VALIDATION_FAILED = 6,
  ZZ_STATUS_UNKNOWN_DIAGRAM = 7,
  /**
   * A contraction or expansion was rejected; see [`zz_last_failure_reason`].
   */
  ZZ_STATUS_MOVE_REJECTED = 8,
  ZZ_STATUS_COMMAND_FAILED = 9,
  ZZ_STATUS_NOTHING_TO_UNDO = 10,
  ZZ_STATUS_IO_ERROR = 11,
  ZZ_STATUS_PANIC = 12,
} ZzStatus;

typedef enum ZzBias {
  ZZ_BIAS_NONE = 0,
  ZZ_BIAS_LOWER = 1,
  ZZ_BIAS_HIGHER = 2,
} ZzBias;

typedef enum ZzFirst {
  ZZ_FIRST_LOWER = 0,
  ZZ_FIRST_HIGHER = 1,
} ZzFirst;

typedef enum ZzFormat {
  ZZ_FORMAT_SVG = 0,
  ZZ_FORMAT_TEXT = 1,
} ZzFormat;

/**
 * Opaque workspace handle.
 */
typedef struct ZzWorkspace ZzWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *zz_version(void);

/**
 * A new empty workspace. Never null.
 */
struct ZzWorkspace *zz_workspace_new(void);

/**
 * Parses a saved workspace. On success `*out` receives a new handle.
 *
 * # Safety
 * `bytes` points to `len` readable bytes; `out` is writable.
 */
enum ZzStatus zz_workspace_load(const uint8_t *bytes, size_t len, struct ZzWorkspace **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `ws` is null or a handle not yet freed.
 */
void zz_workspace_free(struct ZzWorkspace *ws);

/**
 * The canonical file bytes; release with [`zz_bytes_free`].
 *
 * # Safety
 * `ws` is a live handle; `out` and `out_len` are writable.
 */
enum ZzStatus zz_workspace_save(struct ZzWorkspace *ws, uint8_t **out, size_t *out_len);

/**
 * Content hash as lowercase hex; release with [`zz_string_free`]. Null if
 * `ws` is null.
 *
 * # Safety
 * `ws` is null or a live handle.
 */
char *zz_workspace_hash(struct ZzWorkspace *ws);

/**
 * Applies one script line. Relative files resolve against `base_dir`
 * (null for the current directory).
 *
 * # Safety
 * `ws` is a live handle; strings are NUL-terminated or null where allowed.
 */
enum ZzStatus zz_workspace_apply(struct ZzWorkspace *ws, const char *line, const char *base_dir);

/**
 * Runs a script. On failure the workspace holds the state after the last
 * successful command and `*failed_index` (if non-null) the 0-based index of
 * the failing command.
 *
 * # Safety
 * As [`zz_workspace_apply`]; `failed_index` is null or writable.
 */
enum ZzStatus zz_workspace_replay(struct ZzWorkspace *ws,
                                  const char *script,
                                  const char *base_dir,
                                  size_t *failed_index);

/**
 * Contracts the singular heights `a..b` of the slice of `name` at `path`
 * (`"-"` or `""` for the root). `proof` is null or the name of a proof
 * diagram to extend.
 *
 * # Safety
 * As [`zz_workspace_apply`].
 */
enum ZzStatus zz_workspace_contract(struct ZzWorkspace *ws,
                                    const char *name,
                                    const char *path,
                                    size_t a,
                                    size_t b,
                                    enum ZzBias bias_,
                                    const char *proof);

/**
 * Splits singular height `height` of the addressed slice into the inner
 * heights `lower` and `upper`; `first` says which group comes first.
 *
 * # Safety
 * As [`zz_workspace_apply`]; `lower` and `upper` point to `n_lower` and
 * `n_upper` values (or are null when the count is 0).
 */
enum ZzStatus zz_workspace_expand(struct ZzWorkspace *ws,
                                  const char *name,
                                  const char *path,
                                  size_t height,
                                  const size_t *lower,
                                  size_t n_lower,
                                  const size_t *upper,
                                  size_t n_upper,
                                  enum ZzFirst first,
                                  const char *proof);

/**
 * Reverts the last logged command.
 *
 * # Safety
 * `ws` is a live handle.
 */
enum ZzStatus zz_workspace_undo(struct ZzWorkspace *ws);

/**
 * Number of log entries; 0 for a null handle.
 *
 * # Safety
 * `ws` is null or a live handle.
 */
size_t zz_workspace_log_len(struct ZzWorkspace *ws);

/**
 * Dimension and top-level length of a diagram.
 *
 * # Safety
 * `ws` is a live handle; `name` is NUL-terminated; outputs are writable or
 * null.
 */
enum ZzStatus zz_workspace_diagram_shape(struct ZzWorkspace *ws,
                                         const char *name,
                                         size_t *dimension,
                                         size_t *length);

/**
 * Renders the slice of `name` at `path`; `*out` receives a string to
 * release with [`zz_string_free`].
 *
 * # Safety
 * As [`zz_workspace_diagram_shape`]; `out` is writable.
 */
enum ZzStatus zz_workspace_render(struct ZzWorkspace *ws,
                                  const char *name,
                                  const char *path,
                                  enum ZzFormat format,
                                  char **out);

/**
 * Message of the last failure on this thread, or null; release with
 * [`zz_string_free`].
 */
char *zz_last_error(void);

/**
 * Reason name of the last failure (for example `DeltaColimitFailed`), or
 * null; release with [`zz_string_free`].
 */
char *zz_last_failure_reason(void);

/**
 * Step of the colimit procedure where the last failure occurred (0 when
 * not applicable), or -1 if there was no failure.
 */
int zz_last_failure_step(void);

/**
 * Height of the last failure, if it has one: returns 1 and writes
 * `*height`, otherwise returns 0.
 *
 * # Safety
 * `height` is writable.
 */
int zz_last_failure_height(size_t *height);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void zz_string_free(char *s);

/**
 * # Safety
 * `p` and `len` come from [`zz_workspace_save`] and were not yet freed.
 */
void zz_bytes_free(uint8_t *p, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZIGZAG_H */
