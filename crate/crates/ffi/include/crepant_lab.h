#ifndef CREPANT_LAB_H
#define CREPANT_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_NULL_POINTER = 1,
  CL_STATUS_INVALID_UTF8 = 2,
  CL_STATUS_PARSE = 3,
  CL_STATUS_NOT_GORENSTEIN = 4,
  CL_STATUS_BUDGET = 5,
  CL_STATUS_INTERNAL = 6,
  CL_STATUS_PANIC = 7,
} ClStatus;

typedef enum ClVerdict {
  CL_VERDICT_RESOLVABLE = 0,
  CL_VERDICT_NOT_RESOLVABLE = 1,
  CL_VERDICT_UNDECIDED = 2,
} ClVerdict;

// Opaque decision report.
typedef struct ClReport ClReport;

// Opaque parsed quotient type.
typedef struct ClType ClType;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a type such as `1/12(1,2,3,6)` or `1/2(1,1,0,0)x1/2(0,1,1,0)`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum ClStatus cl_type_parse(const char *text, struct ClType **out);

// # Safety
// `t` must come from `cl_type_parse` or be null.
void cl_type_free(struct ClType *t);

// Group order `l`.
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum ClStatus cl_type_order(const struct ClType *t, uint64_t *out);

// Ambient dimension `r`.
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum ClStatus cl_type_dim(const struct ClType *t, size_t *out);

// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum ClStatus cl_type_is_gorenstein(const struct ClType *t, bool *out);

// Number of lattice points in the `nu`-th dilate of the junior simplex, as a decimal string.
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum ClStatus cl_ehrhart_eval(const struct ClType *t, uint64_t nu, char **out);

// Runs the decision pipeline. `node_budget` 0 selects the default.
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum ClStatus cl_pipeline_run(const struct ClType *t, size_t node_budget, struct ClReport **out);

// Writes the verdict and the deciding step (0 when no step decided).
//
// # Safety
// `r` must be a live handle; `verdict` and `step` must be valid pointers.
enum ClStatus cl_report_verdict(const struct ClReport *r, enum ClVerdict *verdict, uint8_t *step);

// # Safety
// `r` must be a live handle and `out` a valid pointer.
enum ClStatus cl_report_json(const struct ClReport *r, char **out);

// # Safety
// `r` must come from `cl_pipeline_run` or be null.
void cl_report_free(struct ClReport *r);

// # Safety
// `s` must come from this library or be null.
void cl_string_free(char *s);

// Message of the last failure on this thread, or null. Valid until the next failing call.
const char *cl_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CREPANT_LAB_H */
