/* C interface to the orientation laboratory. Everything the CLI (or any
 * other front end) needs goes through these functions: opaque sequence
 * handles, JSON-configured runs, and JSON reports.
 *
 * Conventions:
 *   - all returned strings are heap-allocated; release them with ol_free
 *   - on any non-OK status, ol_last_error() describes what went wrong
 *   - status values double as recommended process exit codes
 */
#ifndef ORIENTLAB_H
#define ORIENTLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  OL_OK = 0,
  OL_EINVAL = 2,  /* bad arguments, unparsable input, unknown names */
  OL_EABORT = 3,  /* an op was rejected or an internal invariant broke */
  OL_EVERIFY = 4  /* a requested verification check failed */
} ol_status;

/* Opaque update sequence. */
typedef struct ol_seq ol_seq;

/* Most recent error message on this thread; never NULL. */
const char* ol_last_error(void);

/* Releases a string returned by this API. NULL is fine. */
void ol_free(char* s);

/* ------------------------------------------------------------ sequences */

ol_status ol_seq_from_text(const char* text, ol_seq** out);
ol_status ol_seq_load(const char* path, ol_seq** out);
ol_status ol_seq_to_text(const ol_seq* seq, char** out);
ol_status ol_seq_save(const ol_seq* seq, const char* path);
size_t ol_seq_size(const ol_seq* seq);
void ol_seq_destroy(ol_seq* seq);

/* Gadget and workload generators. `kind` is one of "random", "blowup",
 * "farflip", "gi", "gialpha"; `params_json` carries the kind-specific
 * knobs (see the CLI `gadget` subcommand for the schema). When `meta_json`
 * is non-NULL it receives gadget metadata (marked vertices, sizes). */
ol_status ol_seq_generate(const char* kind, const char* params_json, ol_seq** out,
                          char** meta_json);

/* ----------------------------------------------------------- centralized */

/* Replays `seq` under one engine. config_json schema:
 *   { "algo": "bf" | "bf-largest" | "antireset" | "bf-member" | "flipgame" |
 *             "flipgame-threshold" | "matching-local" | "matching-flipgame" |
 *             "adjacency",
 *     "delta": 4, "alpha": 1, "delta_prime": 0,
 *     "order": "fifo" | "lifo" | "largest",
 *     "rule": "arbitrary" | "higher" | "directive",
 *     "track_flip_distance": false, "track_vertex_peaks": false,
 *     "stream_path": "per-op metrics JSONL, optional" }
 * On success *metrics_json receives the run's counters (plus the cost
 * ledger for game engines and the final matching for matching engines). */
ol_status ol_run(const ol_seq* seq, const char* config_json, char** metrics_json);

/* ----------------------------------------------------------- distributed */

/* Synchronous message-passing replay. config_json schema:
 *   { "engine": "antireset-dist" | "matching-dist",
 *     "delta": 14, "alpha": 2, "round_limit": 100000,
 *     "trace_path": "message trace JSONL, optional" }
 * The report carries global metrics, one record per triggered cascade, and
 * the results of the end-of-run representation and memory checks. */
ol_status ol_sim_run(const ol_seq* seq, const char* config_json, char** report_json);

/* ----------------------------------------------------------- verification */

/* Replays `seq` and runs the requested oracle checks. config_json schema:
 *   { "checks": ["arboricity", "minmaxoutdeg", "matching", "forests",
 *                "representation"],
 *     ... engine knobs as for ol_run / ol_sim_run ... }
 * Oracle size limits are reported as "skip", not failure. Returns
 * OL_EVERIFY when any check fails; *report_json is filled either way. */
ol_status ol_verify(const ol_seq* seq, const char* config_json, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* ORIENTLAB_H */
