#ifndef DECAY_POVM_C_API_H
#define DECAY_POVM_C_API_H

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the nonzero values double as process exit codes for dp_run. */
typedef enum {
  DP_OK = 0,
  DP_INVALID_ARGUMENT = 1,
  DP_CONFIG_ERROR = 2,
  DP_PRECONDITION_FAILED = 3,
  DP_NUMERICAL_FAILURE = 4,
  DP_INTERNAL_ERROR = 5
} dp_status;

typedef struct dp_potential dp_potential;

/* Message of the last failing call on this thread; empty when none. */
const char* dp_last_error(void);
const char* dp_version(void);

/* Strings returned through char** out parameters are allocated with malloc. */
void dp_string_free(char* s);

dp_status dp_potential_from_json(const char* json_text, dp_potential** out);
dp_status dp_potential_from_file(const char* path, dp_potential** out);
void dp_potential_free(dp_potential* p);
dp_status dp_potential_to_json(const dp_potential* p, char** out);

/* out[7] = {Re T, Im T, Re R, Im R, Re R', Im R', Theta} at wavenumber k. */
dp_status dp_amplitudes(const dp_potential* p, double k, double* out);

/* CSV with header k,re_T,im_T,re_R,im_R,theta over n points (log-spaced when log_spaced != 0). */
dp_status dp_amplitudes_csv(const dp_potential* p, double k_min, double k_max, int n, int log_spaced, char** out);

/* JSON coefficient report at k0. */
dp_status dp_coefficients_json(const dp_potential* p, double k0, char** out);

/* Regime report at (k0, sigma) for a packet centered at a/2 and a detector at L.
   thresholds_json may be NULL or an object overriding cond1, cond2, cond3, extra, potential_only. */
dp_status dp_classify_json(const dp_potential* p, double k0, double sigma, double L, const char* thresholds_json,
                           char** out);

/* Regime map over an (k0, sigma) grid as CSV. */
dp_status dp_classify_sweep_csv(const dp_potential* p, double k_min, double k_max, int nk, double sigma_min,
                                double sigma_max, int nsigma, double L, const char* thresholds_json, char** out);

/* Coefficient table over k as CSV: k,T2,lambda,xi,beta,s,w,argR,Gamma. */
dp_status dp_sweep_csv(const dp_potential* p, double k_min, double k_max, int n, int log_spaced, char** out);

/* Runs an experiment config. The return value is the exit status; *report (may be NULL) receives a
   JSON object with message, output_dir, files and regime_text. */
dp_status dp_run(const char* config_path, const char* output_override, char** report);

#ifdef __cplusplus
}
#endif

#endif
