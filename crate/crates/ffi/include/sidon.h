#ifndef SIDON_H
#define SIDON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero values match the CLI exit codes.
 */
typedef enum SidonStatus {
  SIDON_STATUS_OK = 0,
  SIDON_STATUS_VERIFICATION_FAILED = 1,
  SIDON_STATUS_BAD_INPUT = 2,
  SIDON_STATUS_BUDGET_EXCEEDED = 3,
  SIDON_STATUS_NULL_POINTER = 4,
  SIDON_STATUS_PANIC = 5,
} SidonStatus;

typedef enum SidonMode {
  SIDON_MODE_DIFFERENCE = 0,
  SIDON_MODE_SUM = 1,
  SIDON_MODE_PRODUCT = 2,
  SIDON_MODE_RATIO = 3,
} SidonMode;

/**
 * Opaque set handle.
 */
typedef struct SidonSet SidonSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sidon_last_error(void);

/**
 * Parse a set from JSON or the text format.
 *
 * # Safety
 * `text` must be a valid nul-terminated string and `out` a valid pointer.
 */
enum SidonStatus sidon_set_parse(const char *text, struct SidonSet **out);

/**
 * A set of integers; duplicates are merged.
 *
 * # Safety
 * `values` must point to `len` readable integers (or be null with `len == 0`)
 * and `out` must be a valid pointer.
 */
enum SidonStatus sidon_set_from_ints(const int64_t *values, size_t len, struct SidonSet **out);

/**
 * # Safety
 * `set` must come from this library and not be used afterwards.
 */
void sidon_set_free(struct SidonSet *set);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t sidon_set_len(const struct SidonSet *set);

/**
 * Copy up to `cap` integer elements into `buf`; `written` receives the count.
 * Fails with `BadInput` for sets in the plane.
 *
 * # Safety
 * `set` must be a live handle, `buf` must have room for `cap` values and
 * `written` must be a valid pointer.
 */
enum SidonStatus sidon_set_ints(const struct SidonSet *set,
                                int64_t *buf,
                                size_t cap,
                                size_t *written);

/**
 * Canonical JSON for the set.
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
enum SidonStatus sidon_set_to_json(const struct SidonSet *set, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void sidon_string_free(char *s);

/**
 * `E_k` in the given mode, as a decimal string.
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
enum SidonStatus sidon_energy(const struct SidonSet *set,
                              uint32_t k,
                              enum SidonMode mode,
                              char **out);

/**
 * `E'_k` (all entries distinct) in the given mode, as a decimal string.
 *
 * # Safety
 * `set` must be a live handle and `out` a valid pointer.
 */
enum SidonStatus sidon_energy_prime(const struct SidonSet *set,
                                    uint32_t k,
                                    enum SidonMode mode,
                                    char **out);

/**
 * `Ok` when every non-identity count is at most `g`, `VerificationFailed`
 * otherwise (the witness is in the error message).
 *
 * # Safety
 * `set` must be a live handle.
 */
enum SidonStatus sidon_verify_multiplicity(const struct SidonSet *set,
                                           uint64_t g,
                                           enum SidonMode mode);

/**
 * Membership in `B°_k[g]`; same return convention as
 * [`sidon_verify_multiplicity`].
 *
 * # Safety
 * `set` must be a live handle.
 */
enum SidonStatus sidon_verify_bfamily(const struct SidonSet *set, uint32_t k, uint32_t g);

/**
 * Exact `Sid_k` by exhaustive search; `witness` may be null.
 *
 * # Safety
 * `set` must be a live handle, `size` a valid pointer, `witness` null or valid.
 */
enum SidonStatus sidon_sid_exact(const struct SidonSet *set,
                                 uint32_t k,
                                 enum SidonMode mode,
                                 size_t cap,
                                 size_t *size,
                                 struct SidonSet **witness);

/**
 * Randomized extraction; `out` receives a subset whose non-identity counts
 * are at most `bound` (3k-3 for differences, 2k-2 for sums and products).
 *
 * # Safety
 * `set` must be a live handle; `out` and `bound` valid pointers (`bound`
 * may be null).
 */
enum SidonStatus sidon_extract(const struct SidonSet *set,
                               uint32_t k,
                               enum SidonMode mode,
                               uint64_t seed,
                               uint64_t trials,
                               struct SidonSet **out,
                               uint64_t *bound);

/**
 * Run the `sidon` command line with `argc` arguments (excluding the program
 * name) and return its exit code.
 *
 * # Safety
 * `argv` must point to `argc` valid nul-terminated strings.
 */
int32_t sidon_cli_run(size_t argc, const char *const *argv);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIDON_H */
