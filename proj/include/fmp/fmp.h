/* C interface to the feature-membership library.
 *
 * All handles are opaque. Functions returning fmp_status leave a message in
 * fmp_last_error() (per thread) when they fail. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * fmp_string_free(). Features are 1-based.
 */
#ifndef FMP_FMP_H
#define FMP_FMP_H

#include <stddef.h>

#if defined(FMP_BUILDING_LIBRARY)
#define FMP_API __attribute__((visibility("default")))
#else
#define FMP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fmp_status {
  FMP_OK = 0,
  FMP_ERR_PARSE = 1,
  FMP_ERR_INVALID_ARGUMENT = 2,
  FMP_ERR_PRECONDITION = 3,
  FMP_ERR_IO = 4,
  FMP_ERR_SOLVER = 5,
  FMP_ERR_LIMIT = 6,
  FMP_ERR_INTERNAL = 7
} fmp_status;

typedef enum fmp_method { FMP_ONE_STEP = 0, FMP_TWO_STEP = 1 } fmp_method;

typedef enum fmp_answer { FMP_YES = 0, FMP_NO = 1, FMP_TIMEOUT = 2 } fmp_answer;

typedef enum fmp_explanation { FMP_AXP = 0, FMP_CXP = 1 } fmp_explanation;

/* A classifier bound to the instance being explained. */
typedef struct fmp_classifier fmp_classifier;
typedef struct fmp_result fmp_result;

FMP_API const char *fmp_version(void);
FMP_API const char *fmp_status_name(fmp_status status);
/* Message of the last failure on this thread; "" if none. */
FMP_API const char *fmp_last_error(void);
FMP_API void fmp_string_free(char *s);

/* Loaders. The instance's class must equal the classifier's prediction. */
FMP_API fmp_status fmp_load_sdd(const char *sdd_path, const char *vtree_path,
                                const char *instance_path, fmp_classifier **out);
FMP_API fmp_status fmp_load_obdd(const char *obdd_path, const char *instance_path,
                                 fmp_classifier **out);
FMP_API fmp_status fmp_load_dt(const char *dt_path, const char *instance_path,
                               fmp_classifier **out);
/* instance_path may be NULL: an explanation graph already encodes its
 * instance. When given, only its length is checked. */
FMP_API fmp_status fmp_load_xpg(const char *xpg_path, const char *instance_path,
                                fmp_classifier **out);
/* Same loaders over in-memory text. */
FMP_API fmp_status fmp_load_sdd_text(const char *sdd, const char *vtree,
                                     const char *instance, fmp_classifier **out);
FMP_API fmp_status fmp_load_xpg_text(const char *xpg, fmp_classifier **out);
FMP_API void fmp_classifier_free(fmp_classifier *clf);

FMP_API int fmp_classifier_num_features(const fmp_classifier *clf);
FMP_API int fmp_classifier_num_nodes(const fmp_classifier *clf);

/* Is the feature set (count entries of features) a weak AXp / weak CXp? */
FMP_API fmp_status fmp_is_weak(const fmp_classifier *clf, fmp_explanation kind,
                               const int *features, int count, int *result);

/* One AXp / CXp by deletion from all features, ascending. Writes up to
 * capacity features and the full size to *count. */
FMP_API fmp_status fmp_find(const fmp_classifier *clf, fmp_explanation kind,
                            int *features, int capacity, int *count);

/* Every AXp / CXp by exhaustive search, as "{1,3} {2}" (at most 16 features). */
FMP_API fmp_status fmp_enumerate(const fmp_classifier *clf, fmp_explanation kind,
                                 char **text);

typedef struct fmp_query_options {
  int target;
  fmp_method method;
  /* NULL or "internal" for the built-in solver, "external:<cmd>" otherwise. */
  const char *backend;
  /* <= 0: no limit. */
  double time_limit_s;
} fmp_query_options;

FMP_API void fmp_query_options_init(fmp_query_options *options);

FMP_API fmp_status fmp_decide(const fmp_classifier *clf, const fmp_query_options *options,
                              fmp_result **out);
FMP_API void fmp_result_free(fmp_result *result);
FMP_API fmp_answer fmp_result_answer(const fmp_result *result);
/* Witness size (0 unless FMP_YES); copies up to capacity features. */
FMP_API int fmp_result_witness(const fmp_result *result, int *features, int capacity);
FMP_API int fmp_result_num_vars(const fmp_result *result);
FMP_API int fmp_result_num_clauses(const fmp_result *result);
FMP_API double fmp_result_solve_seconds(const fmp_result *result);
FMP_API double fmp_result_total_seconds(const fmp_result *result);

/* DIMACS with a `c map` legend; nothing is solved. */
FMP_API fmp_status fmp_encode(const fmp_classifier *clf, int target, fmp_method method,
                              char **dimacs);

typedef struct fmp_bench_options {
  const char *kind; /* "obdd" (explanation-graph route) or "shannon-sdd" */
  int num_features;
  int num_nodes;
  int classifiers;
  int queries;
  unsigned long long seed;
  int workers;
  double time_limit_s;
  const char *backend;
} fmp_bench_options;

FMP_API void fmp_bench_options_init(fmp_bench_options *options);
/* Random classifiers, random instances and targets; CSV with one row per
 * classifier and method. */
FMP_API fmp_status fmp_bench(const fmp_bench_options *options, char **csv);

/* Random classifier text. For "obdd" *vtree is set to NULL; for
 * "shannon-sdd" *diagram is the SDD and *vtree its vtree. */
FMP_API fmp_status fmp_generate(const char *kind, int num_features, int num_nodes,
                                unsigned long long seed, char **diagram, char **vtree);

#ifdef __cplusplus
}
#endif

#endif
