/* C interface to the dephasing-channel stabilizer simulator.
 *
 * Every function returns a ts_status; on anything but TS_OK a thread-local
 * message is available from ts_last_error(). Out-parameters are written only
 * on TS_OK. Handles are created and destroyed by the matching pair below and
 * are not thread-safe individually; distinct handles may be used from
 * distinct threads freely.
 */
#ifndef TORICSIM_H
#define TORICSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
    TS_OK = 0,
    TS_ERR_INVALID = 1, /* bad argument or configuration */
    TS_ERR_FAILED = 2,  /* computation could not produce a valid result */
    TS_ERR_IO = 3       /* file could not be read, written or parsed */
} ts_status;

const char* ts_status_name(ts_status s);

/* Message for the most recent failure on this thread; never NULL. */
const char* ts_last_error(void);

/* Frees strings returned through char** out-parameters. */
void ts_string_free(char* s);

typedef struct ts_lattice ts_lattice;
typedef struct ts_state ts_state;

ts_status ts_lattice_create(uint32_t lx, uint32_t ly, ts_lattice** out);
void ts_lattice_destroy(ts_lattice* lat);

/* Toric-code stabilizer state; with_logicals != 0 makes it pure and tracks
 * the two winding X operators. */
ts_status ts_state_create(const ts_lattice* lat, int with_logicals, ts_state** out);
void ts_state_destroy(ts_state* st);

/* One stochastic dephasing layer: each link decoheres with probability r,
 * driven by a counter RNG stream of the given seed. decohered_out (optional)
 * receives the number of hit links. */
ts_status ts_state_apply_layer(ts_state* st, const ts_lattice* lat, double r, uint64_t seed,
                               uint32_t* decohered_out);

ts_status ts_state_chi_i(const ts_state* st, const ts_lattice* lat, double* out);
ts_status ts_state_chi_ii(const ts_state* st, const ts_lattice* lat, double* out);
/* Entanglement negativity of the standard nested region with parameter k_a. */
ts_status ts_state_negativity(const ts_state* st, const ts_lattice* lat, uint32_t k_a,
                              double* out);
/* log2 Tr[rho^2]. */
ts_status ts_state_purity_exponent(const ts_state* st, int32_t* out);
/* 1 if the tracked logical of that index has been annihilated. */
ts_status ts_state_logical_dead(const ts_state* st, uint32_t index, int* out);

/* Monte-Carlo sweep from a JSON config (text or file). Output directory
 * precedence: out_override, then the config "output" key, then runs/<name>.
 * Seed precedence: cli seed, then the config "seed" key, then env seed.
 * threads_override = 0 keeps the config value. resolved_out (optional)
 * receives the output directory actually used. */
ts_status ts_sweep_run_json(const char* config_json, const char* out_override, int has_cli_seed,
                            uint64_t cli_seed, int has_env_seed, uint64_t env_seed,
                            uint32_t threads_override, char* resolved_out,
                            size_t resolved_out_len);
ts_status ts_sweep_run_file(const char* config_path, const char* out_override, int has_cli_seed,
                            uint64_t cli_seed, int has_env_seed, uint64_t env_seed,
                            uint32_t threads_override, char* resolved_out,
                            size_t resolved_out_len);

/* Truth-table validation on one small lattice. corrupt_shift != 0 swaps in a
 * deliberately broken Kraus pairing (negative control). Writes a JSON report
 * to json_path when non-NULL. text_out (optional) receives printable
 * PASS/FAIL lines (free with ts_string_free). all_pass_out receives 1 or 0. */
ts_status ts_validate_run(uint32_t lx, uint32_t ly, int corrupt_shift, const char* json_path,
                          int* all_pass_out, char** text_out);

/* Per-trajectory comparison of the simulated Renyi-2 string correlator with
 * the link-connectivity prediction, written as CSV rows
 * trajectory,string,stabilizer_CII,oracle_CII,match. mismatches_out receives
 * the number of disagreeing rows. */
ts_status ts_oracle_check_run(uint32_t lx, uint32_t ly, uint64_t trajectories, double r,
                              uint64_t seed, const char* out_csv_path, uint64_t* mismatches_out);

/* Finite-size scaling fit of the run directory produced by a sweep; writes
 * fit.json and collapsed.csv back into it. Any of the result pointers may be
 * NULL. */
ts_status ts_collapse_run(const char* run_dir, uint64_t resamples, uint64_t seed, double* r_c_out,
                          double* nu_out, double* zeta_out, double* quality_out);

/* Tidy plot data (figure ids fig2c, fig3b, fig4b) from a sweep summary. */
ts_status ts_emit_plot(const char* summary_csv_path, const char* figure_id,
                       const char* out_csv_path);

/* Bond-percolation threshold estimate from wrapping-probability curve
 * crossings of the given linear sizes. */
ts_status ts_percolation_threshold(const uint32_t* sizes, size_t n_sizes, double r_lo,
                                   double r_hi, double step, uint64_t samples_per_point,
                                   uint64_t seed, double* out);

#ifdef __cplusplus
}
#endif

#endif /* TORICSIM_H */
