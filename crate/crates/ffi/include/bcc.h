/* SPDX-License-Identifier: Apache-2.0 */
/* Generated by cbindgen; do not edit. */

#ifndef BCC_H
#define BCC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BccAlgorithm {
  BCC_ALGORITHM_ONLINE = 0,
  BCC_ALGORITHM_LP = 1,
  BCC_ALGORITHM_L2P = 2,
} BccAlgorithm;

// Result codes of every fallible call.
typedef enum BccStatus {
  BCC_STATUS_OK = 0,
  // The query ran but no community satisfies it; a result is still returned.
  BCC_STATUS_INFEASIBLE = 1,
  // Null pointer, bad UTF-8 or an out-of-range parameter.
  BCC_STATUS_INVALID_ARGUMENT = 2,
  // A file could not be read.
  BCC_STATUS_IO = 3,
  // An input file is malformed.
  BCC_STATUS_PARSE = 4,
  // The query was rejected, e.g. unknown vertex or same labels.
  BCC_STATUS_QUERY = 5,
  // A panic was caught at the boundary.
  BCC_STATUS_INTERNAL = 6,
} BccStatus;

// A loaded labeled graph.
typedef struct BccGraph BccGraph;

// A search result with vertices translated to external ids.
typedef struct BccResult BccResult;

// Two-vertex query. A negative `k1` or `k2` selects the query vertex's
// coreness. Start from [`bcc_query_params_default`].
typedef struct BccQueryParams {
  uint64_t q_l;
  uint64_t q_r;
  int32_t k1;
  int32_t k2;
  uint64_t b;
  enum BccAlgorithm algorithm;
  size_t eta;
  uint32_t rho;
  double gamma1;
  double gamma2;
} BccQueryParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default query parameters: automatic cores, `b = 1`, lp mode.
struct BccQueryParams bcc_query_params_default(void);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *bcc_last_error(void);

// Loads a graph from an edge file and a label file.
//
// # Safety
// Paths must be null or NUL-terminated strings; `out` must be writable.
enum BccStatus bcc_graph_load(const char *edges_path,
                              const char *labels_path,
                              struct BccGraph **out);

// Releases a graph. Null is ignored.
//
// # Safety
// `g` must be null or come from [`bcc_graph_load`] and not be freed twice.
void bcc_graph_free(struct BccGraph *g);

// # Safety
// `g` must be null or a live graph handle.
size_t bcc_graph_vertex_count(const struct BccGraph *g);

// # Safety
// `g` must be null or a live graph handle.
size_t bcc_graph_edge_count(const struct BccGraph *g);

// Runs a two-vertex search. Returns `BCC_STATUS_OK` or
// `BCC_STATUS_INFEASIBLE` with a result in `*out`; other codes leave
// `*out` untouched.
//
// # Safety
// `g` must be a live graph handle, `params` readable and `out` writable.
enum BccStatus bcc_query(const struct BccGraph *g,
                         const struct BccQueryParams *params,
                         struct BccResult **out);

// Runs a search over `m >= 2` query vertices of distinct labels. `ks` may
// be null for automatic cores; otherwise it holds `m` entries where a
// negative value means automatic.
//
// # Safety
// `g` must be a live graph handle, `queries` must hold `m` ids, `ks` must
// be null or hold `m` values, and `out` must be writable.
enum BccStatus bcc_query_multi(const struct BccGraph *g,
                               const uint64_t *queries,
                               const int32_t *ks,
                               size_t m,
                               uint64_t b,
                               enum BccAlgorithm algorithm,
                               struct BccResult **out);

// # Safety
// `r` must be null or a live result handle.
bool bcc_result_found(const struct BccResult *r);

// Community vertices in ascending id order; `*len` receives the count.
// The array lives as long as the result.
//
// # Safety
// `r` must be null or a live result handle; `len` must be null or writable.
const uint64_t *bcc_result_vertices(const struct BccResult *r, size_t *len);

// # Safety
// `r` must be null or a live result handle.
uint32_t bcc_result_query_distance(const struct BccResult *r);

// # Safety
// `r` must be null or a live result handle.
uint32_t bcc_result_diameter(const struct BccResult *r);

// Writes the leader pair (the first pair for multi-vertex searches).
// Returns false when the result has none.
//
// # Safety
// `r` must be null or a live result handle; outputs must be writable.
bool bcc_result_leaders(const struct BccResult *r, uint64_t *v_l, uint64_t *v_r);

// Machine-readable infeasibility reason such as `core-infeasible:left`,
// or null for a found community.
//
// # Safety
// `r` must be null or a live result handle.
const char *bcc_result_reason(const struct BccResult *r);

// Releases a result. Null is ignored.
//
// # Safety
// `r` must be null or come from a query call and not be freed twice.
void bcc_result_free(struct BccResult *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BCC_H */
