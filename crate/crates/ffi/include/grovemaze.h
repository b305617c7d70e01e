#ifndef GROVEMAZE_H
#define GROVEMAZE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GmSearchStatus {
  GM_SEARCH_STATUS_CONVERGED_OPTIMAL = 0,
  GM_SEARCH_STATUS_BUDGET_EXHAUSTED = 1,
  GM_SEARCH_STATUS_DEGENERATE = 2,
} GmSearchStatus;

typedef enum GmStatus {
  GM_STATUS_OK = 0,
  GM_STATUS_NULL_POINTER = 1,
  GM_STATUS_INVALID_ARGUMENT = 2,
  GM_STATUS_PARSE = 3,
  GM_STATUS_INVALID_MAZE = 4,
  GM_STATUS_CAP_EXCEEDED = 5,
  GM_STATUS_DEGENERATE = 6,
  GM_STATUS_IO = 7,
  GM_STATUS_PANIC = 8,
} GmStatus;

/**
 * Opaque maze handle.
 */
typedef struct GmMaze GmMaze;

/**
 * Opaque result of a search.
 */
typedef struct GmOutcome GmOutcome;

/**
 * Search options. Zero in `max_rounds` or `samples` selects the default
 * (`U − C₁ + 1` rounds, automatic shot count).
 */
typedef struct GmSearchOptions {
  int64_t initial_cutoff;
  double epsilon;
  uint32_t max_rounds;
  /**
   * 0 known-k, 1 guessed-k.
   */
  uint32_t policy;
  /**
   * 0 switch to ≥ at the optimum, 1 always strict.
   */
  uint32_t strict;
  uint32_t samples;
  uint64_t seed;
  bool stop_at_optimum;
} GmSearchOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *gm_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void gm_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum GmStatus gm_maze_generate(size_t m, uint64_t seed, struct GmMaze **out);

/**
 * Parses the maze text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` valid for one pointer write.
 */
enum GmStatus gm_maze_parse(const char *text, struct GmMaze **out);

/**
 * # Safety
 * `maze` must be a live handle; `out` valid for one pointer write.
 */
enum GmStatus gm_maze_serialize(const struct GmMaze *maze, char **out);

/**
 * Side length, or 0 for a null handle.
 *
 * # Safety
 * `maze` must be null or a live handle.
 */
size_t gm_maze_size(const struct GmMaze *maze);

/**
 * Length of the unique start-to-goal path.
 *
 * # Safety
 * `maze` must be a live handle; `out` valid for one write.
 */
enum GmStatus gm_maze_solution_length(const struct GmMaze *maze, size_t *out);

/**
 * # Safety
 * `maze` must be null or a handle from this library, not yet freed.
 */
void gm_maze_free(struct GmMaze *maze);

/**
 * Fitness of path `index` (length `n`). `formula`: 0 power-of-two offset,
 * 1 linear. `mode`: 0 wall-aware, 1 bounds only, 2 wall-blind.
 *
 * # Safety
 * `maze` must be a live handle; `out` valid for one write.
 */
enum GmStatus gm_path_fitness(const struct GmMaze *maze,
                              uint32_t n,
                              uint64_t index,
                              uint32_t formula,
                              uint32_t mode,
                              int64_t *out);

struct GmSearchOptions gm_search_options_default(void);

/**
 * Adaptive-cutoff search over paths of length `n`. `options` may be null
 * for the defaults.
 *
 * # Safety
 * `maze` must be a live handle, `options` null or valid, `out` valid for
 * one pointer write.
 */
enum GmStatus gm_solve(const struct GmMaze *maze,
                       uint32_t n,
                       uint32_t formula,
                       uint32_t mode,
                       const struct GmSearchOptions *options,
                       struct GmOutcome **out);

/**
 * # Safety
 * `outcome` must be a live handle; `out` valid for one write.
 */
enum GmStatus gm_outcome_status(const struct GmOutcome *outcome, enum GmSearchStatus *out);

/**
 * Best sampled path. Returns `GM_STATUS_DEGENERATE` when no round ran.
 *
 * # Safety
 * `outcome` must be a live handle; `index` and `fitness` valid for one write.
 */
enum GmStatus gm_outcome_best(const struct GmOutcome *outcome, uint64_t *index, int64_t *fitness);

/**
 * Rounds run, or 0 for a null handle.
 *
 * # Safety
 * `outcome` must be null or a live handle.
 */
size_t gm_outcome_rounds(const struct GmOutcome *outcome);

/**
 * Full outcome as JSON.
 *
 * # Safety
 * `outcome` must be a live handle; `out` valid for one pointer write.
 */
enum GmStatus gm_outcome_to_json(const struct GmOutcome *outcome, char **out);

/**
 * # Safety
 * `outcome` must be null or a handle from this library, not yet freed.
 */
void gm_outcome_free(struct GmOutcome *outcome);

/**
 * `sin²((2r+1)θ)` with `θ = arcsin √(k/4ⁿ)`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GmStatus gm_success_probability(uint32_t n, uint64_t k, uint64_t r, double *out);

/**
 * `max(0, ⌊π/(4θ) − 1/2⌋)`; `GM_STATUS_DEGENERATE` for `k = 0`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum GmStatus gm_optimal_rounds(uint32_t n, uint64_t k, uint64_t *out);

/**
 * Path letters (`N`, `E`, `S`, `W`) of `index` at length `n`.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum GmStatus gm_path_letters(uint64_t index, uint32_t n, char **out);

/**
 * Largest supported path length.
 */
uint32_t gm_max_path_len(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROVEMAZE_H */
