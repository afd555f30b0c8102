/* C interface of the sequence place-recognition engine.
 *
 * All functions returning mrsvpr_status set a thread-local error message
 * retrievable with mrsvpr_last_error() on failure. Handles are opaque;
 * every *_create / *_from_* pairs with the matching *_destroy. String
 * outputs follow the usual two-call pattern: pass buf == NULL (or a short
 * buffer) to learn the required size via *needed, then call again.
 */
#ifndef MRSVPR_H
#define MRSVPR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MRSVPR_API __declspec(dllexport)
#else
#define MRSVPR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrsvpr_status {
  MRSVPR_OK = 0,
  MRSVPR_ERR_INVALID_ARGUMENT = 1, /* bad data or handle misuse */
  MRSVPR_ERR_CONFIG = 2,           /* unknown key or bad config value */
  MRSVPR_ERR_INFEASIBLE = 3,       /* schedule/search cannot be satisfied */
  MRSVPR_ERR_IO = 4,               /* ingest/serialize failure */
  MRSVPR_ERR_DEGENERATE = 5,       /* particle population collapsed */
  MRSVPR_ERR_INTERNAL = 6          /* unexpected failure */
} mrsvpr_status;

typedef struct mrsvpr_config mrsvpr_config;     /* key/value run settings */
typedef struct mrsvpr_sequence mrsvpr_sequence; /* descriptor sequence */
typedef struct mrsvpr_result mrsvpr_result;     /* match/baseline/bench */

/* Message describing the most recent failure on this thread ("" if none). */
MRSVPR_API const char* mrsvpr_last_error(void);

/* Stable lowercase name of a status code, e.g. "config". */
MRSVPR_API const char* mrsvpr_status_name(mrsvpr_status status);

/* ---- configuration ---------------------------------------------------- */

MRSVPR_API mrsvpr_config* mrsvpr_config_create(void);
MRSVPR_API void mrsvpr_config_destroy(mrsvpr_config* config);

/* Sets one dotted key, e.g. ("pipeline.tau", "2.0"). Unknown keys and
 * malformed values are rejected with MRSVPR_ERR_CONFIG. */
MRSVPR_API mrsvpr_status mrsvpr_config_set(mrsvpr_config* config,
                                           const char* key,
                                           const char* value);

/* Reads back the effective value of a key (defaults included). */
MRSVPR_API mrsvpr_status mrsvpr_config_get(const mrsvpr_config* config,
                                           const char* key, char* buf,
                                           size_t buf_len, size_t* needed);

/* ---- sequences --------------------------------------------------------- */

/* Wraps `count` densely packed descriptors of length `dim` (row-major). */
MRSVPR_API mrsvpr_status mrsvpr_sequence_from_descriptors(
    const double* values, int64_t count, int64_t dim, mrsvpr_sequence** out);

/* Converts `count` grayscale frames (row-major, width*height doubles per
 * frame) into descriptors using the descriptor.* settings of `config`. */
MRSVPR_API mrsvpr_status mrsvpr_sequence_from_gray_frames(
    const double* pixels, int64_t count, int64_t width, int64_t height,
    const mrsvpr_config* config, mrsvpr_sequence** out);

/* Same for interleaved RGB frames (3 doubles per pixel). */
MRSVPR_API mrsvpr_status mrsvpr_sequence_from_rgb_frames(
    const double* pixels, int64_t count, int64_t width, int64_t height,
    const mrsvpr_config* config, mrsvpr_sequence** out);

MRSVPR_API int64_t mrsvpr_sequence_size(const mrsvpr_sequence* seq);
MRSVPR_API int64_t mrsvpr_sequence_dim(const mrsvpr_sequence* seq);

/* Copies frame `index` (0-based) into buf (buf_len >= dim doubles). */
MRSVPR_API mrsvpr_status mrsvpr_sequence_copy_frame(const mrsvpr_sequence* seq,
                                                    int64_t index, double* buf,
                                                    size_t buf_len);

MRSVPR_API void mrsvpr_sequence_destroy(mrsvpr_sequence* seq);

/* ---- synthetic data ----------------------------------------------------- */

/* Generates a synthetic reference/test pair from the synth.* settings of
 * `config`. `truth_end` receives the reference end index the test sequence
 * was embedded at. */
MRSVPR_API mrsvpr_status mrsvpr_synth_generate(const mrsvpr_config* config,
                                               uint64_t seed,
                                               mrsvpr_sequence** ref_out,
                                               mrsvpr_sequence** test_out,
                                               int64_t* truth_end);

/* ---- matching ----------------------------------------------------------- */

/* Coarse-to-fine particle search. Requires pipeline.seed to be set. */
MRSVPR_API mrsvpr_status mrsvpr_match(const mrsvpr_sequence* reference,
                                      const mrsvpr_sequence* test,
                                      const mrsvpr_config* config,
                                      mrsvpr_result** out);

/* Exhaustive sequence matcher over the full reference. */
MRSVPR_API mrsvpr_status mrsvpr_baseline(const mrsvpr_sequence* reference,
                                         const mrsvpr_sequence* test,
                                         const mrsvpr_config* config,
                                         mrsvpr_result** out);

/* Multi-trial synthetic benchmark of both methods (bench.* + synth.* +
 * pipeline.* settings). */
MRSVPR_API mrsvpr_status mrsvpr_bench_run(const mrsvpr_config* config,
                                          mrsvpr_result** out);

/* ---- results ------------------------------------------------------------ */

/* Best full-resolution reference end index (1-based); -1 for bench results. */
MRSVPR_API int64_t mrsvpr_result_best_index(const mrsvpr_result* result);
MRSVPR_API double mrsvpr_result_best_score(const mrsvpr_result* result);

/* JSON payload of the result. include_timing == 0 omits the "timing"
 * subtree, leaving only fields that are byte-reproducible for a seed. */
MRSVPR_API mrsvpr_status mrsvpr_result_json(const mrsvpr_result* result,
                                            int include_timing, char* buf,
                                            size_t buf_len, size_t* needed);

/* CSV table of the result. Tables: "levels" (match); "trials", "pr_curve"
 * (bench). Unknown tables are rejected. */
MRSVPR_API mrsvpr_status mrsvpr_result_csv(const mrsvpr_result* result,
                                           const char* table, char* buf,
                                           size_t buf_len, size_t* needed);

MRSVPR_API void mrsvpr_result_destroy(mrsvpr_result* result);

#ifdef __cplusplus
}
#endif

#endif /* MRSVPR_H */
