#ifndef FML2HOL_H
#define FML2HOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Fml2holStatus {
  FML2HOL_STATUS_OK = 0,
  FML2HOL_STATUS_NULL_ARGUMENT = 1,
  FML2HOL_STATUS_INVALID_UTF8 = 2,
  FML2HOL_STATUS_PARSE_ERROR = 3,
  FML2HOL_STATUS_CONFIG_ERROR = 4,
  FML2HOL_STATUS_EMBED_ERROR = 5,
  FML2HOL_STATUS_SEARCH_ERROR = 6,
  FML2HOL_STATUS_PANIC = 7,
} Fml2holStatus;

typedef enum Fml2holVerdict {
  /*
   A countermodel was found.
   */
  FML2HOL_VERDICT_COUNTER_SATISFIABLE = 0,
  /*
   None within the bounds. Not a proof.
   */
  FML2HOL_VERDICT_NO_COUNTERMODEL = 1,
  FML2HOL_VERDICT_TIMEOUT = 2,
} Fml2holVerdict;

/*
 Opaque parsed and validated modal problem.
 */
typedef struct Fml2holProblem Fml2holProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until
 the next call into the library on this thread.
 */
const char *fml2hol_last_error(void);

/*
 Static, nul-terminated version string.
 */
const char *fml2hol_version(void);

/*
 Parse qmf text into a problem handle.

 # Safety
 `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum Fml2holStatus fml2hol_problem_parse(const char *text, struct Fml2holProblem **out);

/*
 # Safety
 `problem` must come from [`fml2hol_problem_parse`] and not be freed
 already. Null is ignored.
 */
void fml2hol_problem_free(struct Fml2holProblem *problem);

/*
 Number of annotated formulas in the problem, 0 for null.

 # Safety
 `problem` must be a live handle or null.
 */
uintptr_t fml2hol_problem_unit_count(const struct Fml2holProblem *problem);

/*
 Translate to a self-contained thf0 problem. `format` is
 `thf:<logic>:<domain>`.

 # Safety
 `problem` must be a live handle, `format` a nul-terminated string and
 `out_thf` a valid pointer. The result is freed with
 [`fml2hol_string_free`].
 */
enum Fml2holStatus fml2hol_translate(const struct Fml2holProblem *problem,
                                     const char *format,
                                     char **out_thf);

/*
 Bounded countermodel search. A `timeout_secs` of zero or less means no
 budget. On a countermodel, `*out_model` (if `out_model` is not null)
 receives the model in fixture format; otherwise it is set to null.

 # Safety
 `problem` must be a live handle, `format` a nul-terminated string,
 `out_verdict` a valid pointer and `out_model` valid or null.
 */
enum Fml2holStatus fml2hol_check(const struct Fml2holProblem *problem,
                                 const char *format,
                                 uint32_t max_worlds,
                                 uint32_t max_individuals,
                                 double timeout_secs,
                                 enum Fml2holVerdict *out_verdict,
                                 char **out_model);

/*
 # Safety
 `s` must be a string returned by this library and not yet freed. Null
 is ignored.
 */
void fml2hol_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FML2HOL_H */
