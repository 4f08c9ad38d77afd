#ifndef BGPMATCH_H
#define BGPMATCH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Bumped whenever a signature or the meaning of a status changes.
 */
#define BGP_ABI_VERSION 1

typedef enum BgpStatus {
  BGP_STATUS_OK = 0,
  BGP_STATUS_NULL_ARGUMENT = 1,
  BGP_STATUS_INVALID_UTF8 = 2,
  BGP_STATUS_IO_ERROR = 3,
  BGP_STATUS_DATA_PARSE_ERROR = 4,
  BGP_STATUS_QUERY_PARSE_ERROR = 5,
  BGP_STATUS_OUT_OF_RANGE = 6,
  BGP_STATUS_INTERNAL = 7,
} BgpStatus;

/**
 * The answer to one query: variables and rows of N-Triples terms.
 */
typedef struct BgpSolutions BgpSolutions;

/**
 * A loaded dataset.
 */
typedef struct BgpStore BgpStore;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

uint32_t bgp_abi_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *bgp_last_error(void);

/**
 * Loads an N-Triples file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BgpStatus bgp_store_open(const char *path, struct BgpStore **out);

/**
 * Parses `len` bytes of N-Triples text.
 *
 * # Safety
 * `data` must point to `len` readable bytes and `out` must be valid.
 */
enum BgpStatus bgp_store_from_ntriples(const uint8_t *data, size_t len, struct BgpStore **out);

/**
 * # Safety
 * `store` must come from this library and not be used afterwards. Null is
 * ignored.
 */
void bgp_store_free(struct BgpStore *store);

/**
 * Statements loaded, duplicates included.
 *
 * # Safety
 * `store` must be a live handle and `out` valid.
 */
enum BgpStatus bgp_store_triple_count(const struct BgpStore *store, size_t *out);

/**
 * Distinct subjects and objects, i.e. graph vertices.
 *
 * # Safety
 * `store` must be a live handle and `out` valid.
 */
enum BgpStatus bgp_store_vertex_count(const struct BgpStore *store, size_t *out);

/**
 * Distinct statements, i.e. graph edges.
 *
 * # Safety
 * `store` must be a live handle and `out` valid.
 */
enum BgpStatus bgp_store_edge_count(const struct BgpStore *store, size_t *out);

/**
 * Answers a query. `threads` of 0 uses the default worker pool.
 *
 * # Safety
 * `store` must be a live handle, `query` NUL-terminated, `out` valid.
 */
enum BgpStatus bgp_store_query(const struct BgpStore *store,
                               const char *query,
                               size_t threads,
                               struct BgpSolutions **out);

/**
 * # Safety
 * `solutions` must come from this library and not be used afterwards.
 * Null is ignored.
 */
void bgp_solutions_free(struct BgpSolutions *solutions);

/**
 * Number of rows; 0 for a null handle.
 *
 * # Safety
 * `solutions` must be null or a live handle.
 */
size_t bgp_solutions_row_count(const struct BgpSolutions *solutions);

/**
 * Number of projected variables; 0 for a null handle.
 *
 * # Safety
 * `solutions` must be null or a live handle.
 */
size_t bgp_solutions_var_count(const struct BgpSolutions *solutions);

/**
 * Name of column `col`, without the `?`.
 *
 * # Safety
 * `solutions` must be a live handle and `out` valid. Free the string with
 * [`bgp_string_free`].
 */
enum BgpStatus bgp_solutions_var_name(const struct BgpSolutions *solutions, size_t col, char **out);

/**
 * Term at (`row`, `col`) in N-Triples syntax.
 *
 * # Safety
 * `solutions` must be a live handle and `out` valid. Free the string with
 * [`bgp_string_free`].
 */
enum BgpStatus bgp_solutions_term(const struct BgpSolutions *solutions,
                                  size_t row,
                                  size_t col,
                                  char **out);

/**
 * Whole result as TSV, the same bytes the CLI prints.
 *
 * # Safety
 * `solutions` must be a live handle and `out` valid.
 */
enum BgpStatus bgp_solutions_to_tsv(const struct BgpSolutions *solutions, char **out);

/**
 * Whole result as JSON: `{"vars": [...], "rows": [[...], ...]}`.
 *
 * # Safety
 * `solutions` must be a live handle and `out` valid.
 */
enum BgpStatus bgp_solutions_to_json(const struct BgpSolutions *solutions, char **out);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void bgp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BGPMATCH_H */
