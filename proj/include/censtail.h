/* censtail -- extreme value index estimation under random right censoring.
 *
 * C interface to the censtail core. All functions return a ct_status; on
 * failure ct_error_message() gives a thread-local description of the last
 * error raised on the calling thread. Samples are opaque handles owned by
 * the caller and released with ct_sample_free().
 */
#ifndef CENSTAIL_H
#define CENSTAIL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ct_status {
    CT_OK = 0,
    CT_E_DOMAIN = 1,            /* invalid argument or precondition */
    CT_E_FULLY_CENSORED = 2,    /* no noncensored observations in the top k */
    CT_E_KM_DEGENERATE = 3,     /* Kaplan-Meier denominator vanished */
    CT_E_ONE_STEP = 4,          /* singular Hessian in the one-step update */
    CT_E_SECOND_ORDER = 5,      /* second-order parameter estimation failed */
    CT_E_DEGENERATE_SAMPLE = 6, /* all censored or all noncensored */
    CT_E_UNSTABLE_BOOTSTRAP = 7,/* more than 5% of replicates failed */
    CT_E_IO = 8,
    CT_E_INVALID = 9,           /* null handle / internal failure */
    CT_E_NOMEM = 10
} ct_status;

/* Order matches the result-table row order. */
typedef enum ct_estimator {
    CT_EST_HILL = 0,
    CT_EST_MVRB = 1,
    CT_EST_ZIPF = 2,
    CT_EST_UH = 3,
    CT_EST_WW_KM = 4,
    CT_EST_WW_L = 5,
    CT_EST_MOM = 6,
    CT_EST_MOMR = 7,
    CT_EST_PMOM = 8,
    CT_EST_POT = 9,
    CT_EST_POT_L = 10,
    CT_EST_ERM = 11,
    CT_EST_COUNT = 12
} ct_estimator;

typedef enum ct_family {
    CT_DIST_BURR = 0,
    CT_DIST_PARETO = 1,
    CT_DIST_FRECHET = 2
} ct_family;

typedef enum ct_format {
    CT_FORMAT_TEXT = 0,
    CT_FORMAT_CSV = 1,
    CT_FORMAT_JSON = 2
} ct_format;

typedef struct ct_sample ct_sample;

/* Thread-local message for the last failing call on this thread. */
const char* ct_error_message(void);
const char* ct_status_name(ct_status status);

/* Table name ("Hill", "WW.KM", ...). */
const char* ct_estimator_name(ct_estimator e);
/* Lower-case CLI name ("hill", "wwkm", ...). */
const char* ct_estimator_cli_name(ct_estimator e);
ct_status ct_estimator_from_name(const char* name, ct_estimator* out);

/* --- samples ------------------------------------------------------------ */

/* z[i] > 0 finite, delta[i] in {0,1} (1 = event observed), n >= 1. */
ct_status ct_sample_new(const double* z, const int* delta, size_t n, ct_sample** out);
void ct_sample_free(ct_sample* sample);
size_t ct_sample_size(const ct_sample* sample);

/* Proportion of noncensored observations among the k largest. */
ct_status ct_p_hat(const ct_sample* sample, int k, double* out);

/* --- estimation ---------------------------------------------------------- */

#define CT_AUX_SIGMA 1u
#define CT_AUX_B 2u
#define CT_AUX_RHO 4u
#define CT_AUX_BETA 8u

typedef struct ct_estimate_result {
    int estimator;   /* ct_estimator */
    int k;
    double raw;      /* EVI of the observed Z sample */
    double adapted;  /* EVI of the underlying event variable */
    double sigma, b, rho, beta;
    unsigned aux_mask;  /* CT_AUX_* bits valid in this result */
    int converged;
} ct_estimate_result;

ct_status ct_estimate(const ct_sample* sample, ct_estimator estimator, int k,
                      ct_estimate_result* out);

/* --- bootstrap ----------------------------------------------------------- */

typedef struct ct_interval {
    double lower, upper;
    double level;
    int replicates; /* replicate values used */
    int dropped;    /* replicates discarded due to estimator failure */
} ct_interval;

/* Percentile interval from `replicates` conditional block bootstrap
 * resamples; d is the per-block quota of the minority censoring class. */
ct_status ct_bootstrap_ci(const ct_sample* sample, ct_estimator estimator, int k,
                          int replicates, double alpha, int d, uint64_t seed,
                          ct_interval* out);

/* --- distributions -------------------------------------------------------- */

/* Burr: p1=eta, p2=tau, p3=lambda. Pareto/Frechet: p1=alpha. */
typedef struct ct_model {
    int family; /* ct_family */
    double p1, p2, p3;
} ct_model;

ct_status ct_model_from_gamma(int family, double gamma1, ct_model* out);
ct_status ct_model_gamma(const ct_model* model, double* out);
ct_status ct_model_quantile(const ct_model* model, double u, double* out);

/* Censored sample with right-tail censoring proportion censor_p. */
ct_status ct_generate_censored(const ct_model* model, double censor_p, size_t n,
                               uint64_t seed, ct_sample** out);

/* --- simulation study ----------------------------------------------------- */

typedef struct ct_study_config {
    ct_model model;
    double censor_p;
    size_t n;
    double k_fraction;
    int repetitions;          /* R */
    int bootstrap_replicates; /* B */
    double alpha;
    int d;
    uint64_t seed;
    int workers;              /* 0 = hardware concurrency */
    int median_length;        /* nonzero: median interval length instead of mean */
} ct_study_config;

typedef struct ct_study_row {
    int estimator;
    double mad, med_bias, coverage, avg_length;
    int failures;
    int failed; /* nonzero when every repetition failed */
} ct_study_row;

/* Runs the Monte Carlo study for the listed estimators; rows[] must hold
 * n_estimators entries and is filled in table row order. */
ct_status ct_run_study(const ct_study_config* config, const ct_estimator* estimators,
                       size_t n_estimators, ct_study_row* rows);

/* Renders study rows; *out is heap-allocated, release with ct_string_free. */
ct_status ct_format_study_table(const ct_study_row* rows, size_t n_rows,
                                ct_format format, char** out);
void ct_string_free(char* s);

/* --- threshold selection --------------------------------------------------- */

/* Pairwise-agreement threshold choice over k in [k_min, k_max]. k values
 * where any estimator fails are skipped (objective/estimates set to NaN).
 * `objective` (length k_max-k_min+1) and `estimates` (row-major,
 * n_estimators x (k_max-k_min+1)) are optional outputs; pass NULL to skip. */
ct_status ct_kopt(const ct_sample* sample, const ct_estimator* estimators,
                  size_t n_estimators, int k_min, int k_max, int* k_opt,
                  double* objective, double* estimates);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CENSTAIL_H */
