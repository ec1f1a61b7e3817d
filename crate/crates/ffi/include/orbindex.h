#ifndef ORBINDEX_H
#define ORBINDEX_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum OrbStatus {
  ORB_STATUS_OK = 0,
  ORB_STATUS_NULL_ARGUMENT = 1,
  ORB_STATUS_INVALID_UTF8 = 2,
  ORB_STATUS_PARSE = 3,
  ORB_STATUS_INVALID = 4,
  ORB_STATUS_NOT_FOUND = 5,
  ORB_STATUS_COMPUTATION = 6,
  ORB_STATUS_PANIC = 7,
} OrbStatus;

/**
 * A characteristic cycle table together with the names it refers to.
 */
typedef struct OrbTable OrbTable;

/**
 * A loaded set of named complexes, functions, actions, charts and tables.
 */
typedef struct OrbWorkspace OrbWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *orb_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *orb_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void orb_string_free(char *s);

/**
 * Load every `*.json` file in a directory.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum OrbStatus orb_workspace_load(const char *path, struct OrbWorkspace **out);

/**
 * Build a workspace from `n` named JSON documents held in memory.
 *
 * # Safety
 * `names` and `texts` must each point to `n` NUL-terminated strings; `out`
 * must be writable.
 */
enum OrbStatus orb_workspace_from_sources(const char *const *names,
                                          const char *const *texts,
                                          uintptr_t n,
                                          struct OrbWorkspace **out);

/**
 * # Safety
 * `ws` must be NULL or a handle from this library, not yet freed.
 */
void orb_workspace_free(struct OrbWorkspace *ws);

/**
 * Euler integral of a named function.
 *
 * # Safety
 * Pointers must be valid; `out` receives a string to free with
 * [`orb_string_free`].
 */
enum OrbStatus orb_euler_integral(const struct OrbWorkspace *ws, const char *function, char **out);

/**
 * Sum of local Morse indices for a seeded random vertex order.
 *
 * # Safety
 * As for [`orb_euler_integral`].
 */
enum OrbStatus orb_morse_evaluate(const struct OrbWorkspace *ws,
                                  const char *function,
                                  uint64_t seed,
                                  char **out);

/**
 * Characteristic cycle of a named function on a named chart.
 *
 * # Safety
 * Pointers must be valid; `out` receives a handle to free with
 * [`orb_table_free`].
 */
enum OrbStatus orb_cc(const struct OrbWorkspace *ws,
                      const char *function,
                      const char *chart,
                      struct OrbTable **out);

/**
 * A table stored in the workspace.
 *
 * # Safety
 * As for [`orb_cc`].
 */
enum OrbStatus orb_table_get(const struct OrbWorkspace *ws,
                             const char *name,
                             struct OrbTable **out);

/**
 * Number of nonzero chamber multiplicities.
 *
 * # Safety
 * `table` must be a live handle; `out` must be writable.
 */
enum OrbStatus orb_table_len(const struct OrbTable *table, uintptr_t *out);

/**
 * Intersection with the zero section at the default generic covector.
 *
 * # Safety
 * As for [`orb_euler_integral`].
 */
enum OrbStatus orb_table_intersect(const struct OrbTable *table, char **out);

/**
 * The table as a workspace JSON document.
 *
 * # Safety
 * As for [`orb_euler_integral`].
 */
enum OrbStatus orb_table_to_json(const struct OrbTable *table, char **out);

/**
 * The function whose characteristic cycle is `table`, as a JSON document.
 *
 * # Safety
 * As for [`orb_euler_integral`].
 */
enum OrbStatus orb_table_inverse(const struct OrbTable *table, char **out);

/**
 * # Safety
 * `table` must be NULL or a handle from this library, not yet freed.
 */
void orb_table_free(struct OrbTable *table);

/**
 * Orbifold integral of the class of a named function under a named action.
 *
 * # Safety
 * As for [`orb_euler_integral`].
 */
enum OrbStatus orb_orbifold_integral(const struct OrbWorkspace *ws,
                                     const char *function,
                                     const char *action,
                                     char **out);

/**
 * `∫ p_!(f)·ι` on the coarse space, after regularizing the action.
 *
 * # Safety
 * As for [`orb_euler_integral`].
 */
enum OrbStatus orb_coarse_weighted_integral(const struct OrbWorkspace *ws,
                                            const char *function,
                                            const char *action,
                                            char **out);

/**
 * Run the command-line interface in process. `argv` excludes the program
 * name. Standard output and error are captured into `out` and `err`
 * (either may be NULL to discard) and the exit code is stored in `code`.
 *
 * # Safety
 * `argv` must point to `argc` NUL-terminated strings; `code` must be
 * writable.
 */
enum OrbStatus orb_cli_run(const char *const *argv,
                           uintptr_t argc,
                           char **out,
                           char **err,
                           int32_t *code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBINDEX_H */
