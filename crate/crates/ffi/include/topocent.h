#ifndef TOPOCENT_H
#define TOPOCENT_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_PARSE = 3,
  TC_STATUS_DISCONNECTED = 4,
  TC_STATUS_NODE_OUT_OF_RANGE = 5,
  TC_STATUS_INVALID_GRAPH = 6,
  TC_STATUS_INVALID_ARGUMENT = 7,
  TC_STATUS_BUFFER_SIZE = 8,
  TC_STATUS_NUMERICAL = 9,
  TC_STATUS_PANIC = 10,
} TcStatus;

// Opaque graph handle.
typedef struct TcGraph TcGraph;

// Opaque handle to `L⁺` and its derived quantities.
typedef struct TcSpectral TcSpectral;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a whitespace-separated edge list (`u v [w]` per line, `#`
// comments).
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum TcStatus tc_graph_parse(const char *text, struct TcGraph **out);

// Builds a graph on `n` nodes from `m` edges `(us[k], vs[k])`. `weights`
// may be null for an unweighted graph.
//
// # Safety
// `us` and `vs` (and `weights` when non-null) must point to `m` elements.
enum TcStatus tc_graph_from_edges(size_t n,
                                  const size_t *us,
                                  const size_t *vs,
                                  const double *weights,
                                  size_t m,
                                  struct TcGraph **out);

// # Safety
// `g` must come from a `tc_graph_*` constructor and not be freed twice.
void tc_graph_free(struct TcGraph *g);

// # Safety
// `g` must be a live graph handle.
enum TcStatus tc_graph_node_count(const struct TcGraph *g, size_t *out);

// # Safety
// `g` must be a live graph handle.
enum TcStatus tc_graph_edge_count(const struct TcGraph *g, size_t *out);

// Computes `L⁺` for a connected graph.
//
// # Safety
// `g` must be a live graph handle.
enum TcStatus tc_spectral_build(const struct TcGraph *g, struct TcSpectral **out);

// # Safety
// `s` must come from [`tc_spectral_build`] and not be freed twice.
void tc_spectral_free(struct TcSpectral *s);

// Writes `C*(i) = 1/l⁺_ii` for every node; `len` must equal the node count.
//
// # Safety
// `buf` must hold `len` doubles.
enum TcStatus tc_spectral_cstar(const struct TcSpectral *s, double *buf, size_t len);

// Writes `diag(L⁺)`; `len` must equal the node count.
//
// # Safety
// `buf` must hold `len` doubles.
enum TcStatus tc_spectral_lplus_diag(const struct TcSpectral *s, double *buf, size_t len);

// `K = Tr(L⁺)` and `K* = 1/K`. Either output may be null.
//
// # Safety
// `s` must be a live spectral handle.
enum TcStatus tc_spectral_kirchhoff(const struct TcSpectral *s, double *k, double *kstar);

// # Safety
// `s` must be a live spectral handle.
enum TcStatus tc_spectral_effective_resistance(const struct TcSpectral *s,
                                               size_t i,
                                               size_t j,
                                               double *out);

// Exact expected hitting time `H(i, j)`.
//
// # Safety
// `g` must be a live graph handle.
enum TcStatus tc_hitting_time(const struct TcGraph *g, size_t i, size_t j, double *out);

// Monte Carlo estimate of `H(i, j)` over `runs` seeded walks.
// `std_error` may be null.
//
// # Safety
// `g` must be a live graph handle.
enum TcStatus tc_hitting_time_mc(const struct TcGraph *g,
                                 size_t i,
                                 size_t j,
                                 uint64_t runs,
                                 uint64_t seed,
                                 double *mean,
                                 double *std_error);

// Message for the last failed call on this thread, or null. The caller
// owns the string and releases it with [`tc_string_free`].
char *tc_last_error_message(void);

// # Safety
// `s` must come from this library and not be freed twice.
void tc_string_free(char *s);

// Library version as a static NUL-terminated string.
const char *tc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOPOCENT_H */
