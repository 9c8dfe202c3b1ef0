/* C interface to the weak SRK library.
 *
 * Every function returns a wsrk_status. On failure, wsrk_last_error() holds a
 * message for the calling thread until its next call into the library.
 * Handles are opaque and must be released with the matching *_free function;
 * strings returned through char** are released with wsrk_string_free. */
#ifndef WSRK_H
#define WSRK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(WSRK_BUILDING_LIBRARY)
#    define WSRK_API __declspec(dllexport)
#  else
#    define WSRK_API __declspec(dllimport)
#  endif
#else
#  define WSRK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wsrk_status {
    WSRK_OK = 0,
    WSRK_INVALID_ARGUMENT = 1,
    WSRK_PARSE_ERROR = 2,
    WSRK_CONSTRAINT_VIOLATION = 3,
    WSRK_DIVERGED = 4,
    WSRK_UNKNOWN_NAME = 5,
    WSRK_INTERNAL = 6
} wsrk_status;

typedef struct wsrk_tableau wsrk_tableau;
typedef struct wsrk_report wsrk_report;
typedef struct wsrk_problem wsrk_problem;
typedef struct wsrk_study wsrk_study;

WSRK_API const char* wsrk_last_error(void);
/* Name of the violated constraint after WSRK_CONSTRAINT_VIOLATION, else "". */
WSRK_API const char* wsrk_last_constraint(void);
WSRK_API void wsrk_string_free(char* s);

/* ---- tableaux ---- */

WSRK_API wsrk_status wsrk_tableau_from_name(const char* name, wsrk_tableau** out);
WSRK_API wsrk_status wsrk_tableau_from_json(const char* text, wsrk_tableau** out);
WSRK_API wsrk_status wsrk_tableau_from_file(const char* path, wsrk_tableau** out);

/* Free parameters of a coefficient family. Bit k of c_set marks c[k] as
 * given (k = 1..11, c[0] unused); unset parameters take the family defaults. */
typedef struct wsrk_family_params {
    double c[12];
    uint32_t c_set;
    double lambda;
    int lambda_set;
    int sign_branch; /* +1 or -1; 0 means +1 */
} wsrk_family_params;

WSRK_API void wsrk_family_params_init(wsrk_family_params* p);
WSRK_API wsrk_status wsrk_tableau_from_family(const char* family, const wsrk_family_params* p,
                                              wsrk_tableau** out);
/* Order (p_D, p_S) a family is classified for. */
WSRK_API wsrk_status wsrk_family_order(const char* family, int* deterministic, int* stochastic);
/* Space-separated list of family identifiers. */
WSRK_API const char* wsrk_family_names(void);
/* Space-separated list of named schemes. */
WSRK_API const char* wsrk_scheme_names(void);

WSRK_API void wsrk_tableau_free(wsrk_tableau* t);
WSRK_API size_t wsrk_tableau_stages(const wsrk_tableau* t);
WSRK_API const char* wsrk_tableau_name(const wsrk_tableau* t);
WSRK_API wsrk_status wsrk_tableau_to_json(const wsrk_tableau* t, char** out);
/* WSRK_OK when the tableau is well formed; otherwise WSRK_INVALID_ARGUMENT
 * with the first violation in wsrk_last_error(). */
WSRK_API wsrk_status wsrk_tableau_validate(const wsrk_tableau* t);

/* ---- order conditions ---- */

/* Indices follow the registry order W1..W50, D3A..D4C, T1, T2. Out-of-range
 * indices give NULL strings and NaN residuals. */
WSRK_API size_t wsrk_condition_count(void);
WSRK_API const char* wsrk_condition_id(size_t index);
WSRK_API const char* wsrk_condition_formula(size_t index);

WSRK_API wsrk_status wsrk_conditions_evaluate(const wsrk_tableau* t, double tolerance,
                                              wsrk_report** out);
WSRK_API void wsrk_report_free(wsrk_report* r);
WSRK_API double wsrk_report_residual(const wsrk_report* r, size_t index);
WSRK_API int wsrk_report_satisfied(const wsrk_report* r, size_t index);
WSRK_API void wsrk_report_order(const wsrk_report* r, int* deterministic, int* stochastic);
WSRK_API wsrk_status wsrk_report_text(const wsrk_report* r, char** out);
WSRK_API wsrk_status wsrk_report_csv(const wsrk_report* r, char** out);

/* ---- cost ---- */

typedef struct wsrk_cost {
    uint64_t drift_evals;
    uint64_t diffusion_column_evals;
    uint64_t random_draws;
} wsrk_cost;

WSRK_API wsrk_status wsrk_evaluation_cost(const wsrk_tableau* t, size_t noise_dim,
                                          wsrk_cost* out);

/* ---- problems ---- */

/* "nonlinear16", "system18" or "linear:a=..,b=..,p=..". */
WSRK_API wsrk_status wsrk_problem_from_name(const char* spec, wsrk_problem** out);
WSRK_API void wsrk_problem_free(wsrk_problem* p);
WSRK_API const char* wsrk_problem_name(const wsrk_problem* p);
WSRK_API size_t wsrk_problem_dim(const wsrk_problem* p);
WSRK_API size_t wsrk_problem_noise_dim(const wsrk_problem* p);
WSRK_API double wsrk_problem_t0(const wsrk_problem* p);
WSRK_API double wsrk_problem_t_eval(const wsrk_problem* p);
WSRK_API wsrk_status wsrk_problem_exact(const wsrk_problem* p, double t, double* out);

/* E f(Y_1) of one step of size h from (t0, x0) of the problem, exact over
 * the finite increment support; noise dimension at most 4. */
WSRK_API wsrk_status wsrk_one_step_expectation(const wsrk_tableau* t, const wsrk_problem* p,
                                               double h, double* out);

/* ---- Monte Carlo studies ---- */

typedef struct wsrk_study_options {
    size_t batches;      /* 0 means 20 */
    unsigned threads;    /* 0 means hardware concurrency */
    int allow_divergence;
    int gaussian;        /* Gaussian increments; schemes without beta2..beta4 only */
    double t_eval;       /* <= 0 means the problem's default */
} wsrk_study_options;

WSRK_API void wsrk_study_options_init(wsrk_study_options* o);

/* Schemes are named schemes or "EXEM"; extra tableaux may be passed
 * alongside (either list may be empty). */
WSRK_API wsrk_status wsrk_study_run(const wsrk_problem* p, const char* const* scheme_names,
                                    size_t scheme_count, const wsrk_tableau* const* tableaux,
                                    size_t tableau_count, const double* step_sizes,
                                    size_t step_count, uint64_t M, uint64_t seed,
                                    const wsrk_study_options* options, wsrk_study** out);
WSRK_API void wsrk_study_free(wsrk_study* s);
WSRK_API size_t wsrk_study_scheme_count(const wsrk_study* s);
WSRK_API const char* wsrk_study_scheme_name(const wsrk_study* s, size_t index);
WSRK_API double wsrk_study_fitted_order(const wsrk_study* s, size_t index);
WSRK_API size_t wsrk_study_warning_count(const wsrk_study* s, size_t index);
WSRK_API const char* wsrk_study_warning(const wsrk_study* s, size_t index, size_t k);
WSRK_API uint64_t wsrk_study_diverged(const wsrk_study* s, size_t index);
WSRK_API wsrk_status wsrk_study_errors_csv(const wsrk_study* s, char** out);
WSRK_API wsrk_status wsrk_study_orders_csv(const wsrk_study* s, char** out);

#ifdef __cplusplus
}
#endif

#endif
