#ifndef TERNSTEM_H
#define TERNSTEM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_ARGUMENT = 2,
  TS_STATUS_NONEXISTENT = 3,
  TS_STATUS_VERIFICATION_FAILED = 4,
  TS_STATUS_INTERNAL = 5,
} TsStatus;

/**
 * Incremental square-freeness checker.
 */
typedef struct TsChecker TsChecker;

/**
 * A ternary morphism.
 */
typedef struct TsMorphism TsMorphism;

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *ts_last_error(void);

/**
 * Library version as a static string.
 */
const char *ts_version(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ts_string_free(char *s);

/**
 * Certified n-uniform square-free cyclic shift morphism.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
TsStatus ts_morphism_construct(size_t n, TsMorphism **out);

/**
 * The cyclic shift morphism with `f(0) = seed` (uncertified).
 *
 * # Safety
 * `seed` must be a NUL-terminated string and `out` a valid pointer.
 */
TsStatus ts_morphism_from_seed(const char *seed, TsMorphism **out);

/**
 * # Safety
 * `m` must come from this library and not have been freed. Null is ignored.
 */
void ts_morphism_free(TsMorphism *m);

/**
 * Common image length, or 0 if the morphism is not uniform.
 *
 * # Safety
 * `m` must be a live handle or null.
 */
size_t ts_morphism_length(const TsMorphism *m);

/**
 * Image of `letter` (0, 1 or 2).
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
TsStatus ts_morphism_image(const TsMorphism *m, uint8_t letter, char **out);

/**
 * Image of a word.
 *
 * # Safety
 * `m` must be a live handle, `word` NUL-terminated, `out` valid.
 */
TsStatus ts_morphism_apply(const TsMorphism *m, const char *word, char **out);

/**
 * Berstel square-freeness test of a uniform morphism.
 *
 * # Safety
 * `m` must be a live handle and `verdict` a valid pointer.
 */
TsStatus ts_morphism_berstel(const TsMorphism *m, bool *verdict);

/**
 * # Safety
 * `word` must be NUL-terminated and `out` valid.
 */
TsStatus ts_is_square_free(const char *word, bool *out);

TsChecker *ts_checker_new(void);

/**
 * # Safety
 * `c` must come from [`ts_checker_new`] and not have been freed. Null is
 * ignored.
 */
void ts_checker_free(TsChecker *c);

/**
 * Appends `letter` if the word stays square-free; `accepted` reports
 * whether it did. A rejected letter leaves the checker unchanged.
 *
 * # Safety
 * `c` must be a live handle and `accepted` a valid pointer.
 */
TsStatus ts_checker_push(TsChecker *c, uint8_t letter, bool *accepted);

/**
 * Removes the last letter, writing it to `letter`.
 *
 * # Safety
 * `c` must be a live handle and `letter` a valid pointer.
 */
TsStatus ts_checker_pop(TsChecker *c, uint8_t *letter);

/**
 * # Safety
 * `c` must be a live handle or null (returns 0).
 */
size_t ts_checker_len(const TsChecker *c);

/**
 * Exhaustive seed search as a JSON record. `all` selects every solution
 * instead of the first; `budget` 0 means unlimited.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
TsStatus ts_search_json(size_t n, bool all, uint64_t budget, char **out);

/**
 * The bracketed word r of length 4k - 1 (k >= 6).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
TsStatus ts_make_x(size_t k, char **out);

#endif  /* TERNSTEM_H */
