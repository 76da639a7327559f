#ifndef ORBITKIT_H
#define ORBITKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum OkStatus {
  OK_STATUS_OK = 0,
  OK_STATUS_NULL_POINTER = 1,
  OK_STATUS_INVALID_UTF8 = 2,
  OK_STATUS_PARSE = 3,
  OK_STATUS_DIMENSION = 4,
  OK_STATUS_INVALID_ARGUMENT = 5,
  OK_STATUS_CAPACITY = 6,
  /**
   * A result does not fit the fixed-width output type.
   */
  OK_STATUS_OVERFLOW = 7,
  OK_STATUS_INTERNAL = 8,
} OkStatus;

/**
 * Three-valued answer of a decider.
 */
typedef enum OkVerdict {
  OK_VERDICT_NO = 0,
  OK_VERDICT_YES = 1,
  OK_VERDICT_UNKNOWN = 2,
} OkVerdict;

/**
 * Opaque finitely generated subgroup of a free group.
 */
typedef struct OkSubgroup OkSubgroup;

/**
 * Opaque free-group element.
 */
typedef struct OkWord OkWord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ok_version(void);

/**
 * Message describing the last failure on this thread, or NULL after a
 * successful call. Valid until the next call on the same thread.
 */
const char *ok_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ok_string_free(char *s);

/**
 * Parses a word such as `"abA"` in the free group of the given rank.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum OkStatus ok_word_parse(const char *text, size_t rank, struct OkWord **out);

/**
 * Releases a word. NULL is ignored.
 *
 * # Safety
 * `w` must come from this library and not have been freed already.
 */
void ok_word_free(struct OkWord *w);

/**
 * Writes the reduced spelling of `w` (`"1"` for the identity).
 *
 * # Safety
 * `w` must be a live handle and `out` writable.
 */
enum OkStatus ok_word_to_string(const struct OkWord *w, char **out);

/**
 * Writes the reduced length of `w`.
 *
 * # Safety
 * `w` must be a live handle and `out` writable.
 */
enum OkStatus ok_word_length(const struct OkWord *w, size_t *out);

/**
 * Writes the reduced product `u·v` as a new handle.
 *
 * # Safety
 * `u`, `v` must be live handles and `out` writable.
 */
enum OkStatus ok_word_multiply(const struct OkWord *u, const struct OkWord *v, struct OkWord **out);

/**
 * Decides whether `x⁻¹·u·x = v` for some `x`. On yes, and if `witness` is
 * not NULL, a new handle holding `x` is written there (else NULL).
 *
 * # Safety
 * `u`, `v` must be live handles, `result` writable, `witness` NULL or
 * writable.
 */
enum OkStatus ok_conjugacy(const struct OkWord *u,
                           const struct OkWord *v,
                           enum OkVerdict *result,
                           struct OkWord **witness);

/**
 * Decides whether some automorphism maps `u` to `v`. On yes, and if
 * `certificate_json` is not NULL, the Whitehead move sequence is written
 * there as JSON (else NULL).
 *
 * # Safety
 * `u`, `v` must be live handles, `result` writable, `certificate_json`
 * NULL or writable.
 */
enum OkStatus ok_aut_orbit(const struct OkWord *u,
                           const struct OkWord *v,
                           enum OkVerdict *result,
                           char **certificate_json);

/**
 * Writes whether `w` is part of a free basis.
 *
 * # Safety
 * `w` must be a live handle and `out` writable.
 */
enum OkStatus ok_is_primitive(const struct OkWord *w, bool *out);

/**
 * Builds the subgroup generated by `count` words of the given rank.
 *
 * # Safety
 * `gens` must point to `count` live handles (or be NULL with `count = 0`)
 * and `out` must be writable.
 */
enum OkStatus ok_subgroup_build(size_t rank,
                                const struct OkWord *const *gens,
                                size_t count,
                                struct OkSubgroup **out);

/**
 * Releases a subgroup. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ok_subgroup_free(struct OkSubgroup *s);

/**
 * Writes whether `w` lies in the subgroup.
 *
 * # Safety
 * `s`, `w` must be live handles and `out` writable.
 */
enum OkStatus ok_subgroup_contains(const struct OkSubgroup *s, const struct OkWord *w, bool *out);

/**
 * Writes a free basis of the subgroup as a JSON list of words.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum OkStatus ok_subgroup_basis_json(const struct OkSubgroup *s, char **out);

/**
 * Decides whether `x·α` lies in the lattice spanned by the `rows` rows of
 * `gens` (row-major, `rows × n`) for some `α ∈ GL_n(Z)`. On yes, and if
 * `witness_json` is not NULL, `{"alpha", "image", "coefficients"}` is
 * written there (else NULL).
 *
 * # Safety
 * `x` must hold `n` values, `gens` `rows·n` values, `result` must be
 * writable and `witness_json` NULL or writable.
 */
enum OkStatus ok_sod_gl(const int64_t *x,
                        size_t n,
                        const int64_t *gens,
                        size_t rows,
                        enum OkVerdict *result,
                        char **witness_json);

/**
 * Twisted conjugacy in `Z^n`: decides whether `x·(I − A) = v − u` has an
 * integer solution. On yes, and if `x_out` is not NULL, the solution is
 * written to its `n` entries; `OK_STATUS_OVERFLOW` is returned if an entry
 * does not fit in `int64_t`.
 *
 * # Safety
 * `a` must hold `n·n` values, `u`, `v` `n` values each, `result` must be
 * writable and `x_out` NULL or writable for `n` values.
 */
enum OkStatus ok_tcp(const int64_t *a,
                     size_t n,
                     const int64_t *u,
                     const int64_t *v,
                     enum OkVerdict *result,
                     int64_t *x_out);

/**
 * Runs one command-line invocation in-process. `argv` holds `argc`
 * arguments *without* the program name, e.g. `{"fg-conj", "--rank", "2",
 * "abA", "b"}`. The exit code follows the command-line tool (0 decided,
 * 1 verification failed, 2 unknown, 3 input error, 4 capacity); stdout and
 * stderr are returned as new strings when the pointers are not NULL.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; the out pointers must be
 * writable or NULL (`exit_code` is required).
 */
enum OkStatus ok_run(size_t argc,
                     const char *const *argv,
                     int32_t *exit_code,
                     char **stdout_out,
                     char **stderr_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBITKIT_H */
