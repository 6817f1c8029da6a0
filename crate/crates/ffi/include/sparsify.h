#ifndef SPARSIFY_H
#define SPARSIFY_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum SparsifyStatus {
  SparsifyStatus_Ok = 0,
  SparsifyStatus_InvalidArgument = 1,
  SparsifyStatus_NoPath = 2,
  SparsifyStatus_ParseError = 3,
  SparsifyStatus_IoError = 4,
  SparsifyStatus_InternalError = 5,
  SparsifyStatus_NullPointer = 6,
} SparsifyStatus;

/**
 * Opaque graph handle.
 */
typedef struct SparsifyGraph SparsifyGraph;

/**
 * A flat edge buffer: `len` edges as 2*len node ids. Free with
 * `sparsify_edges_free`.
 */
typedef struct SparsifyEdges {
  uint32_t *nodes;
  uintptr_t len;
  uintptr_t capacity;
} SparsifyEdges;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message for the calling thread into `buf` (NUL
 * terminated, truncated to `cap`). Returns the full message length.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes, or be null (length query).
 */
uintptr_t sparsify_last_error(char *buf, uintptr_t cap);

/**
 * Parses an edge-list text ("u v" lines, '#' comments, optional "n <count>"
 * header) into a new graph handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` a valid pointer.
 */
enum SparsifyStatus sparsify_graph_parse(const char *text, struct SparsifyGraph **out);

/**
 * Seeded uniform random graph with exactly `m` edges.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SparsifyStatus sparsify_graph_random(uintptr_t n,
                                          uintptr_t m,
                                          uint64_t seed,
                                          struct SparsifyGraph **out);

/**
 * Frees a graph handle. Null is a no-op.
 *
 * # Safety
 * `g` must come from this library and not be freed twice.
 */
void sparsify_graph_free(struct SparsifyGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
uintptr_t sparsify_graph_nodes(const struct SparsifyGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
uintptr_t sparsify_graph_edges(const struct SparsifyGraph *g);

/**
 * Hop distance; -1 when unreachable.
 *
 * # Safety
 * `g` must be a live graph handle; `out` a valid pointer.
 */
enum SparsifyStatus sparsify_graph_distance(const struct SparsifyGraph *g,
                                            uint32_t u,
                                            uint32_t v,
                                            int64_t *out);

/**
 * Frees an edge buffer produced by this library. Null contents are a no-op.
 *
 * # Safety
 * The buffer must come from this library and not be freed twice.
 */
void sparsify_edges_free(struct SparsifyEdges *edges);

/**
 * Union of canonical shortest paths over the demand pairs (2*pair_count ids
 * in `pairs`).
 *
 * # Safety
 * `g` live handle; `pairs` holds 2*pair_count ids; `out` valid.
 */
enum SparsifyStatus sparsify_naive_preserver(const struct SparsifyGraph *g,
                                             const uint32_t *pairs,
                                             uintptr_t pair_count,
                                             struct SparsifyEdges *out);

/**
 * Detection-based preserver. `epsilon < 0` selects the automatic threshold.
 *
 * # Safety
 * As `sparsify_naive_preserver`.
 */
enum SparsifyStatus sparsify_new_preserver(const struct SparsifyGraph *g,
                                           const uint32_t *pairs,
                                           uintptr_t pair_count,
                                           double epsilon,
                                           double c_detect,
                                           struct SparsifyEdges *out);

/**
 * Subset spanner over `node_count` subset nodes with additive budget n^d.
 *
 * # Safety
 * `g` live handle; `nodes` holds node_count ids; `out` valid.
 */
enum SparsifyStatus sparsify_subset_spanner(const struct SparsifyGraph *g,
                                            const uint32_t *nodes,
                                            uintptr_t node_count,
                                            double d,
                                            struct SparsifyEdges *out);

/**
 * Standard additive spanner with budget 8 n^d.
 *
 * # Safety
 * `g` live handle; `out` valid.
 */
enum SparsifyStatus sparsify_standard_spanner(const struct SparsifyGraph *g,
                                              double d,
                                              double a,
                                              double b,
                                              uint64_t seed,
                                              struct SparsifyEdges *out);

/**
 * Audits subgraph edges (2*edge_count ids) against the demands; writes the
 * maximum additive error and the violation count.
 *
 * # Safety
 * `g` live handle; flat buffers sized as documented; outputs valid.
 */
enum SparsifyStatus sparsify_verify(const struct SparsifyGraph *g,
                                    const uint32_t *h_edges,
                                    uintptr_t edge_count,
                                    const uint32_t *pairs,
                                    uintptr_t pair_count,
                                    double budget,
                                    uint32_t *out_max_error,
                                    uintptr_t *out_violations);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SPARSIFY_H */
