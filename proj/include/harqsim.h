/* harqsim - multi-cell HARQ link-adaptation and scheduling simulator.
 *
 * C interface to the simulation engine. All functions are thread-safe as
 * long as each harqsim_config object is used from one thread at a time.
 * Functions returning int use the harqsim_status codes below; on any
 * failure harqsim_last_error() describes the problem for the calling
 * thread.
 */
#ifndef HARQSIM_H
#define HARQSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum harqsim_status {
    HARQSIM_OK = 0,
    HARQSIM_ERR_RUNTIME = 1, /* unexpected failure (I/O, internal) */
    HARQSIM_ERR_CONFIG = 2,  /* invalid configuration or arguments */
    HARQSIM_ERR_NUMERIC = 3  /* quadrature / root search did not converge */
} harqsim_status;

/* Opaque configuration handle (sectioned key=value model). */
typedef struct harqsim_config harqsim_config;

const char* harqsim_version(void);
const char* harqsim_status_name(int status);

/* Last error message of the calling thread; empty string if none. */
const char* harqsim_last_error(void);

/* --- configuration ------------------------------------------------------ */

harqsim_config* harqsim_config_create(void);
harqsim_config* harqsim_config_clone(const harqsim_config* cfg);
void harqsim_config_destroy(harqsim_config* cfg);

/* Merge a config file into cfg. Unknown keys are rejected. */
int harqsim_config_load_file(harqsim_config* cfg, const char* path);

/* Set/get one "section.key" value using the file grammar. */
int harqsim_config_set(harqsim_config* cfg, const char* key, const char* value);
int harqsim_config_get(const harqsim_config* cfg, const char* key, char* buf, size_t buflen);

/* Write the full config in canonical order. */
int harqsim_config_write_file(const harqsim_config* cfg, const char* path);

/* Validate without running anything. */
int harqsim_config_validate(const harqsim_config* cfg);

/* --- scalar queries (single link at [rate_opt]/[scenario] geometry) ------ */

/* Throughput-optimal source rate and its expected throughput for `approx`
 * ("ga" or "ipla") at radius user_radius_m, angle scenario.user_theta_deg. */
int harqsim_rate_opt(const harqsim_config* cfg, const char* approx, double user_radius_m,
                     double* r_star, double* s_at_r_star);

/* Delay-limited throughput at a fixed source rate. */
int harqsim_dlt(const harqsim_config* cfg, const char* approx, double user_radius_m, double rate,
                double* value);

/* Outage probability after `attempts` transmissions at a fixed rate. */
int harqsim_outage(const harqsim_config* cfg, const char* approx, double user_radius_m,
                   int attempts, double rate, double* value);

/* --- experiment runners (write tables + manifest into out_dir) ----------- */

int harqsim_run_dlt_curves(const harqsim_config* cfg, const char* out_dir);
int harqsim_run_qq(const harqsim_config* cfg, const char* out_dir);
int harqsim_run_simulate(const harqsim_config* cfg, const char* out_dir,
                         const char* trace_file /* nullable */);
int harqsim_run_rate_opt(const harqsim_config* cfg, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HARQSIM_H */
