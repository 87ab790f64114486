#ifndef SYSREP_H
#define SYSREP_H

/* Generated by cbindgen from sysrep-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; aligned with the CLI exit-code contract.
 */
typedef enum SysrepStatus {
  /**
   * Success.
   */
  SYSREP_STATUS_OK = 0,
  /**
   * A verification suite failed (the report is still returned).
   */
  SYSREP_STATUS_PROPERTY_FAILURE = 1,
  /**
   * Malformed input: bad JSON, bad descriptor, bad element, null pointer.
   */
  SYSREP_STATUS_INVALID_INPUT = 2,
  /**
   * A resource guard tripped (degree, extension size, state count).
   */
  SYSREP_STATUS_GUARD_EXCEEDED = 3,
  /**
   * A mathematical precondition does not hold for the input.
   */
  SYSREP_STATUS_PRECONDITION = 4,
  /**
   * Internal panic; the library state is still usable.
   */
  SYSREP_STATUS_PANIC = 5,
} SysrepStatus;

/**
 * Opaque handle to a parsed and validated system document.
 */
typedef struct SysrepSystem SysrepSystem;

/**
 * Analysis knobs. Zero-initialize and set what you need; `trials = 0`
 * and `max_states = 0` select the defaults (256 and 10^6).
 */
typedef struct SysrepOptions {
  uint32_t trials;
  uint64_t max_states;
  uint32_t workers;
  /**
   * When nonzero, `seed` overrides the document seed.
   */
  uint8_t has_seed_override;
  uint64_t seed;
} SysrepOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL. Valid
 * until the next failing call on the same thread.
 */
const char *sysrep_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *sysrep_version(void);

/**
 * JSON Schema for system documents as a static string.
 */
const char *sysrep_document_schema(void);

/**
 * Parse and validate a system document. On success `*out` owns the
 * handle; release it with [`sysrep_system_free`].
 *
 * # Safety
 * `json` must be a valid NUL-terminated UTF-8 string and `out` a valid
 * pointer.
 */
enum SysrepStatus sysrep_system_parse_json(const char *json, struct SysrepSystem **out);

/**
 * Release a handle from [`sysrep_system_parse_json`]. NULL is a no-op.
 *
 * # Safety
 * `sys` must be a pointer previously returned by this library.
 */
void sysrep_system_free(struct SysrepSystem *sys);

/**
 * Release a string returned through an out-parameter. NULL is a no-op.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library.
 */
void sysrep_string_free(char *s);

/**
 * Full analysis report as canonical JSON.
 *
 * # Safety
 * `sys` must be a live handle; `out_json` a valid pointer; `opts` NULL or
 * valid.
 */
enum SysrepStatus sysrep_analyze_json(const struct SysrepSystem *sys,
                                      const struct SysrepOptions *opts,
                                      char **out_json);

/**
 * Minimal/characteristic polynomials and their factorizations.
 *
 * # Safety
 * Same contract as [`sysrep_analyze_json`].
 */
enum SysrepStatus sysrep_factors_json(const struct SysrepSystem *sys,
                                      const struct SysrepOptions *opts,
                                      char **out_json);

/**
 * Primary decomposition and invariant factors.
 *
 * # Safety
 * Same contract as [`sysrep_analyze_json`].
 */
enum SysrepStatus sysrep_decompose_json(const struct SysrepSystem *sys,
                                        const struct SysrepOptions *opts,
                                        char **out_json);

/**
 * Orbit census with enumeration cross-check.
 *
 * # Safety
 * Same contract as [`sysrep_analyze_json`].
 */
enum SysrepStatus sysrep_orbits_json(const struct SysrepSystem *sys,
                                     const struct SysrepOptions *opts,
                                     char **out_json);

/**
 * Trajectory listing. `x0` uses the same syntax as the CLI flag:
 * comma-separated or a JSON array of canonical element encodings.
 *
 * # Safety
 * `sys` must be a live handle; `x0` a valid NUL-terminated string;
 * `out_json` a valid pointer.
 */
enum SysrepStatus sysrep_simulate_json(const struct SysrepSystem *sys,
                                       const char *x0,
                                       int64_t steps,
                                       char **out_json);

/**
 * Property verification. Returns `Ok` when every suite passes,
 * `PropertyFailure` when one fails; the JSON report is written either
 * way.
 *
 * # Safety
 * Same contract as [`sysrep_analyze_json`].
 */
enum SysrepStatus sysrep_verify_json(const struct SysrepSystem *sys,
                                     const struct SysrepOptions *opts,
                                     char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYSREP_H */
