#ifndef FLOWNET_H
#define FLOWNET_H

/* C interface to the flow-network simulation and certification library.
 * Every function that can fail returns a flownet_status; on failure the
 * thread-local message from flownet_last_error() explains what went wrong.
 * Strings returned by getters are owned by the handle they came from and
 * stay valid until the next call on that handle or its free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum flownet_status {
  FLOWNET_OK = 0,
  FLOWNET_ERR_DOMAIN = 1,     /* argument outside the mathematical domain */
  FLOWNET_ERR_STRUCTURAL = 2, /* graph or dimension structure broken */
  FLOWNET_ERR_VALIDATION = 3, /* semantic rule violated */
  FLOWNET_ERR_PARSE = 4,      /* malformed JSON */
  FLOWNET_ERR_SCHEMA = 5,     /* well-formed JSON, wrong shape */
  FLOWNET_ERR_NUMERIC = 6,    /* computation failed or left its guarantees */
  FLOWNET_ERR_IO = 7,         /* file system problem */
  FLOWNET_ERR_PARAM = 8,      /* bad named parameter override */
  FLOWNET_ERR_OTHER = 9
} flownet_status;

typedef struct flownet_scenario flownet_scenario; /* loaded, validated scenario */
typedef struct flownet_reports flownet_reports;   /* certificate evaluation results */
typedef struct flownet_sim flownet_sim;           /* finished simulation */

/* Last error message for the calling thread ("" if none). Valid until the
 * next failing call on the same thread. */
const char* flownet_last_error(void);

const char* flownet_version(void);

/* --- scenarios --------------------------------------------------------- */

flownet_status flownet_scenario_open_file(const char* path, flownet_scenario** out);
flownet_status flownet_scenario_open_bundled(const char* name, flownet_scenario** out);
flownet_status flownet_scenario_parse(const char* json_text, const char* origin,
                                      flownet_scenario** out);
void flownet_scenario_free(flownet_scenario* scenario);

const char* flownet_scenario_name(const flownet_scenario* scenario);
int flownet_scenario_link_count(const flownet_scenario* scenario);
/* Canonical JSON form. */
const char* flownet_scenario_json(const flownet_scenario* scenario);

/* Named overrides (A, phi, kappa, lambda<i>, lambda<C>_<i>). */
flownet_status flownet_scenario_set_param(flownet_scenario* scenario, const char* key,
                                          double value);

/* Bundled catalog. Indexes run 0..count-1; out of range returns NULL. */
int flownet_bundled_count(void);
const char* flownet_bundled_name(int index);
const char* flownet_bundled_summary(int index);

/* --- certificates ------------------------------------------------------ */

flownet_status flownet_certify(const flownet_scenario* scenario, flownet_reports** out);
void flownet_reports_free(flownet_reports* reports);

int flownet_reports_count(const flownet_reports* reports);
const char* flownet_report_condition(const flownet_reports* reports, int index);
const char* flownet_report_verdict(const flownet_reports* reports, int index);
double flownet_report_lhs(const flownet_reports* reports, int index);
/* rhs is NaN when unknown; *rhs_known receives 0/1 (pointer may be NULL). */
double flownet_report_rhs(const flownet_reports* reports, int index, int* rhs_known);
double flownet_report_margin(const flownet_reports* reports, int index);
/* "certified", "necessarily-unstable", or "not-certified". */
const char* flownet_reports_overall(const flownet_reports* reports);
/* Versioned JSON document; with_timestamp = 0 makes reruns byte-identical. */
const char* flownet_reports_json(flownet_reports* reports, int with_timestamp);
const char* flownet_reports_text(flownet_reports* reports);

/* --- simulation -------------------------------------------------------- */

typedef struct flownet_sim_options {
  double dt;        /* <= 0 keeps the scenario's value */
  double horizon;   /* <= 0 keeps the scenario's value */
  const char* mode; /* NULL keeps; else "smooth" or "inclusion" */
  int store_every;  /* <= 0 keeps */
  int run_monitors; /* 0 or 1 */
} flownet_sim_options;

/* Fills the "keep everything, run monitors" defaults. */
void flownet_sim_options_init(flownet_sim_options* options);

flownet_status flownet_simulate(const flownet_scenario* scenario,
                                const flownet_sim_options* options, flownet_sim** out);
void flownet_sim_free(flownet_sim* sim);

/* "bounded", "diverging", or "horizon-reached". */
const char* flownet_sim_verdict(const flownet_sim* sim);
int flownet_sim_monitor_count(const flownet_sim* sim);
const char* flownet_sim_monitor_name(const flownet_sim* sim, int index);
int flownet_sim_monitor_pass(const flownet_sim* sim, int index);
double flownet_sim_monitor_worst(const flownet_sim* sim, int index);

/* One CSV per commodity (single-commodity runs write basename.csv). */
flownet_status flownet_sim_write_csv(flownet_sim* sim, const char* directory,
                                     const char* basename);
const char* flownet_sim_summary_json(flownet_sim* sim, int with_timestamp);

#ifdef __cplusplus
}
#endif

#endif /* FLOWNET_H */
