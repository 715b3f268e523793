#ifndef CALAB_H
#define CALAB_H

/* C interface to the cellular-automata and tiling workbench. Handles are
 * opaque; every entry point reports failure through the thread-local error
 * slot read by calab_last_error / calab_last_error_message. Functions
 * returning pointers yield NULL on failure, functions returning int yield
 * -1. Returned strings are owned by the caller and released with
 * calab_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  CALAB_OK = 0,
  CALAB_E_INVALID_ARGUMENT = 1,
  CALAB_E_PARSE = 2,
  CALAB_E_CAP = 3,
  CALAB_E_BUDGET = 4,
  CALAB_E_INCOMPATIBLE = 5,
  CALAB_E_CONE = 6,
  CALAB_E_INTERNAL = 7
};

typedef struct calab_rule calab_rule;
typedef struct calab_tileset calab_tileset;
typedef struct calab_reduction calab_reduction;

/* Error code of the most recent failing call on this thread; CALAB_OK once
 * a call succeeds. The message pointer stays valid until the next failing
 * call on the same thread. */
int calab_last_error(void);
const char* calab_last_error_message(void);

void calab_string_free(char* s);

/* ------------------------------------------------------------------ rules */

/* Parses the line-oriented rule format (see formats.hpp for the grammar). */
calab_rule* calab_rule_parse(const char* text);
void calab_rule_free(calab_rule* r);
/* 1 or 2. */
int calab_rule_dim(const calab_rule* r);
/* Canonical rule text with an explicit table. */
char* calab_rule_emit(const calab_rule* r);

/* ------------------------------------------------------- 2d rule analysis */

/* 1 when the Moore corner gamma acts as a permutation for every context,
 * else 0. */
int calab_gamma_permutive(const calab_rule* r, long long gx, long long gy);

/* Report text; *issued is 1 when a certificate exists, else 0. */
char* calab_quasi_expansivity(const calab_rule* r, int* issued);

/* Slices along nu at each direction v (x,y pairs flattened into v_xy) and
 * reports both 1d closing verdicts per direction; *refuted is 1 when some
 * direction fails on both sides, and the lifted witness is described and
 * re-verified in the text. */
char* calab_closing_evidence(const calab_rule* r, long long nx, long long ny,
                             const long long* v_xy, size_t n_v, int* refuted);

/* Blocking-word search over the sliced rule; *answer is 0 for sensitivity
 * evidence, 1 for non-sensitivity evidence, 2 for undecided. */
char* calab_sensitivity(const calab_rule* r, long long nx, long long ny,
                        long long vx, long long vy, int* answer);

/* Summary of the sliced 1d rule; with emit_rulefile the canonical rule text
 * of the sliced rule is returned instead. */
char* calab_slice(const calab_rule* r, long long nx, long long ny, long long vx,
                  long long vy, int emit_rulefile);

/* One tab-separated row "w t count ratio" per (w, t) pair, widths outer.
 * Sampled counts are lower bounds and marked by ratio rows ending in "+". */
char* calab_entropy(const calab_rule* r, const int* ws, size_t n_w, const int* ts,
                    size_t n_t, int exact, uint64_t samples, uint64_t seed);

/* ------------------------------------------------------- 1d rule analysis */

/* First line CLOSING, NOT_CLOSING or UNKNOWN; a violation is printed below
 * it. With oracle_head > 0 an independent brute-force search over heads of
 * that length (tail periods up to oracle_period) is run and compared.
 * *verdict is 0, 1 or 2 in the order above. */
char* calab_closing1d(const calab_rule* r, int side_right, int oracle_head,
                      int oracle_period, int* verdict);

/* Scans words of length s..max_len; *found is 1 when a word is confirmed
 * blocking, else 0. */
char* calab_blocking(const calab_rule* r, int s, int max_len, int horizon,
                     int* found);

/* ------------------------------------------------------------------ tiles */

calab_tileset* calab_tiles_parse(const char* text);
void calab_tiles_free(calab_tileset* ts);
char* calab_tiles_emit(const calab_tileset* ts);

/* Grid of tile ids (top row first) on success, UNSAT when no tiling exists,
 * UNKNOWN on node-budget overrun; *sat is 0, 1 or 2 respectively. Torus
 * searches wrap, square searches have free boundaries. */
char* calab_tile_search(const calab_tileset* ts, int torus, long long p,
                        long long q, int* sat);

/* -------------------------------------------------- hierarchy and stretch */

/* Label grid of the nested-cross pattern; anchor is sw, south, east or
 * center. with_path appends one summary line per serpentine path and the
 * grid of path indices. */
char* calab_hierarchy(int step, const char* anchor, int with_path);

/* Plain PBM (P1) bitmap of the pattern, cross cells 1. */
char* calab_hierarchy_pbm(int step, const char* anchor);

/* Builds the parallelogram macro-shape for the periods and stretches the
 * tile set over it; reports the geometry. With verify_p/q > 0 the tiling
 * counts of the base and stretched tori are compared and *verified is set
 * to 1 on agreement, 0 otherwise; without verification it is left at -1. */
char* calab_stretch_report(const calab_tileset* ts, long long nx, long long ny,
                           long long mx, long long my, long long verify_p,
                           long long verify_q, int* verified);

/* -------------------------------------------------------------- reduction */

/* Product CA whose bit layer xors along macro-tile directions only inside
 * locally valid double tilings. */
calab_reduction* calab_reduction_build(const calab_tileset* tau, long long nx,
                                       long long ny, long long mx, long long my,
                                       int step);
void calab_reduction_free(calab_reduction* red);

/* Builds the asymptotic witness pair (kind_numu 0 splits along nu, 1 along
 * both periods) and describes it. With check nonzero, equal one-step images
 * are verified over the witness core and over centered windows up to
 * window x window; *ok is 1 when every checked window passes, 0 otherwise,
 * -1 when checking is skipped. */
char* calab_reduction_witness(const calab_reduction* red, int kind_numu,
                              long long window, int check, int* ok);

#ifdef __cplusplus
}
#endif

#endif /* CALAB_H */
