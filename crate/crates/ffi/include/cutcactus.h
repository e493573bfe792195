#ifndef CUTCACTUS_H
#define CUTCACTUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes shared by every function.
 */
typedef enum CcStatus {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_POINTER = 1,
  CC_STATUS_INVALID_UTF8 = 2,
  CC_STATUS_INVALID_GRAPH = 3,
  CC_STATUS_INVALID_ARGUMENT = 4,
  CC_STATUS_BUDGET_EXCEEDED = 5,
  CC_STATUS_THRESHOLD_ABSENT = 6,
  CC_STATUS_STRUCTURAL = 7,
  CC_STATUS_OUT_OF_RANGE = 8,
  CC_STATUS_VERIFICATION_FAILED = 9,
  CC_STATUS_PANIC = 10,
} CcStatus;

/*
 Opaque analysis handle.
 */
typedef struct CcAnalysis CcAnalysis;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Runs the pipeline on a JSON graph document. `mode` is one of "ends",
 "global", "thin", "slim"; `k` is used by thin and slim and ignored when
 not positive. On success `*out` holds a new handle.

 # Safety
 `graph_json` and `mode` must be NUL-terminated strings; `out` must be
 writable.
 */
enum CcStatus cc_analyze(const char *graph_json,
                         const char *mode,
                         int32_t k,
                         struct CcAnalysis **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `handle` must come from `cc_analyze` and not be freed twice.
 */
void cc_analysis_free(struct CcAnalysis *handle);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void cc_string_free(char *s);

/*
 Writes the analysis as a JSON document.

 # Safety
 `handle` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_analysis_to_json(const struct CcAnalysis *handle, char **out);

/*
 Writes the cactus in DOT format.

 # Safety
 `handle` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_analysis_to_dot(const struct CcAnalysis *handle, char **out);

/*
 Number of cut classes.

 # Safety
 `handle` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_analysis_class_count(const struct CcAnalysis *handle, size_t *out);

/*
 Number of cactus vertices.

 # Safety
 `handle` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_analysis_vertex_count(const struct CcAnalysis *handle, size_t *out);

/*
 Cactus vertex of terminal `terminal`.

 # Safety
 `handle` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_analysis_terminal_vertex(const struct CcAnalysis *handle,
                                          size_t terminal,
                                          size_t *out);

/*
 The two cactus edges class `class_index` maps to.

 # Safety
 `handle` must be a live handle; `first` and `second` must be writable.
 */
enum CcStatus cc_analysis_cut_edges(const struct CcAnalysis *handle,
                                    size_t class_index,
                                    size_t *first,
                                    size_t *second);

/*
 Verifies a graph against the brute-force oracle and writes the report
 as JSON. Returns `VerificationFailed` when any check fails; the report
 is written either way.

 # Safety
 `graph_json` and `mode` must be NUL-terminated strings; `report` must be
 writable.
 */
enum CcStatus cc_verify(const char *graph_json, const char *mode, int32_t k, char **report);

/*
 Static description of a status code. The string must not be freed.
 */
const char *cc_status_message(enum CcStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUTCACTUS_H */
