#ifndef SHADOWTRACE_H
#define SHADOWTRACE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShtStatus {
  SHT_STATUS_OK = 0,
  SHT_STATUS_NULL_POINTER = 1,
  SHT_STATUS_INVALID_UTF8 = 2,
  SHT_STATUS_PARSE = 3,
  SHT_STATUS_INVALID_INPUT = 4,
  SHT_STATUS_OUT_OF_RANGE = 5,
  SHT_STATUS_PANIC = 6,
} ShtStatus;

/**
 * A finite cover of classifying spaces, given by a subgroup.
 */
typedef struct ShtCover ShtCover;

/**
 * A finite group with its named subgroups.
 */
typedef struct ShtGroup ShtGroup;

/**
 * An integer conjugacy-class transfer matrix.
 */
typedef struct ShtTransfer ShtTransfer;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *sht_version(void);

/**
 * The last error message on this thread, or NULL. The caller owns the
 * returned string.
 */
char *sht_last_error(void);

/**
 * # Safety
 * `s` is NULL or a string returned by this library and not yet freed.
 */
void sht_string_free(char *s);

/**
 * Loads a group from its JSON description.
 *
 * # Safety
 * `json` is a NUL-terminated string and `out` is writable.
 */
enum ShtStatus sht_group_from_json(const char *json, struct ShtGroup **out);

/**
 * Order of the group; 0 for NULL.
 *
 * # Safety
 * `g` is NULL or a live group handle.
 */
size_t sht_group_order(const struct ShtGroup *g);

/**
 * # Safety
 * `g` is NULL or a group handle not yet freed.
 */
void sht_group_free(struct ShtGroup *g);

/**
 * The cover of a subgroup given as `{0,2}`, `<(1 2 3)>` or a name.
 *
 * # Safety
 * `g` is a live group handle, `subgroup` a NUL-terminated string and
 * `out` writable.
 */
enum ShtStatus sht_cover_new(const struct ShtGroup *g, const char *subgroup, struct ShtCover **out);

/**
 * Number of sheets `[G:K]`; 0 for NULL.
 *
 * # Safety
 * `c` is NULL or a live cover handle.
 */
size_t sht_cover_index(const struct ShtCover *c);

/**
 * # Safety
 * `c` is NULL or a cover handle not yet freed.
 */
void sht_cover_free(struct ShtCover *c);

/**
 * The degree of transfer followed by projection on the trivial class.
 *
 * # Safety
 * `c` is a live cover handle and `out` writable.
 */
enum ShtStatus sht_becker_gottlieb(const struct ShtCover *c, int64_t *out);

/**
 * Compares the bimodule trace of the restriction with the transfer.
 *
 * # Safety
 * `c` is a live cover handle and `pass` writable.
 */
enum ShtStatus sht_cross_model_check(const struct ShtCover *c, bool *pass);

/**
 * # Safety
 * `c` is a live cover handle and `out` writable.
 */
enum ShtStatus sht_loop_transfer(const struct ShtCover *c, struct ShtTransfer **out);

/**
 * Rows are classes of the subgroup; 0 for NULL.
 *
 * # Safety
 * `t` is NULL or a live transfer handle.
 */
size_t sht_transfer_rows(const struct ShtTransfer *t);

/**
 * Columns are classes of the group; 0 for NULL.
 *
 * # Safety
 * `t` is NULL or a live transfer handle.
 */
size_t sht_transfer_cols(const struct ShtTransfer *t);

/**
 * # Safety
 * `t` is a live transfer handle and `out` writable.
 */
enum ShtStatus sht_transfer_entry(const struct ShtTransfer *t,
                                  size_t row,
                                  size_t col,
                                  int64_t *out);

/**
 * The matrix as a JSON document with class labels and sizes.
 *
 * # Safety
 * `t` is a live transfer handle and `out` writable; free the result with
 * [`sht_string_free`].
 */
enum ShtStatus sht_transfer_to_json(const struct ShtTransfer *t, char **out);

/**
 * # Safety
 * `t` is NULL or a transfer handle not yet freed.
 */
void sht_transfer_free(struct ShtTransfer *t);

/**
 * Runs the command-line front end on `argv` (without the program name).
 * Returns the exit code; either output pointer may be NULL to discard it.
 *
 * # Safety
 * `argv` holds `argc` NUL-terminated strings; output pointers are NULL or
 * writable, and receive strings to free with [`sht_string_free`].
 */
int32_t sht_run(size_t argc, const char *const *argv, char **out_stdout, char **out_stderr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHADOWTRACE_H */
