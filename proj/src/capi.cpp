#include "toricsim.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "toricsim/channel.hpp"
#include "toricsim/ensemble.hpp"
#include "toricsim/lattice.hpp"
#include "toricsim/observables.hpp"
#include "toricsim/percolation.hpp"
#include "toricsim/rng.hpp"
#include "toricsim/scaling.hpp"
#include "toricsim/stabilizer_state.hpp"
#include "toricsim/validate.hpp"

using namespace toricsim;

struct ts_lattice {
    TorusLattice lat;
};

struct ts_state {
    MixedStabilizerState st;
};

namespace {

thread_local std::string g_error = "no error";

bool io_message(const std::string& w) {
    return w.rfind("cannot ", 0) == 0 || w.rfind("failed writing", 0) == 0 ||
           w.find("summary") != std::string::npos;
}

template <typename F>
ts_status guard(F&& f) {
    try {
        f();
        return TS_OK;
    } catch (const std::invalid_argument& e) {
        g_error = e.what();
        return TS_ERR_INVALID;
    } catch (const std::runtime_error& e) {
        g_error = e.what();
        return io_message(e.what()) ? TS_ERR_IO : TS_ERR_FAILED;
    } catch (const std::exception& e) {
        g_error = e.what();
        return TS_ERR_FAILED;
    }
}

ts_status invalid(const char* msg) {
    g_error = msg;
    return TS_ERR_INVALID;
}

void copy_out(char* dst, size_t len, const std::string& src) {
    if (!dst || len == 0) return;
    size_t n = src.size() < len - 1 ? src.size() : len - 1;
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

}  // namespace

extern "C" {

const char* ts_status_name(ts_status s) {
    switch (s) {
        case TS_OK: return "ok";
        case TS_ERR_INVALID: return "invalid argument";
        case TS_ERR_FAILED: return "computation failed";
        case TS_ERR_IO: return "io error";
    }
    return "unknown";
}

const char* ts_last_error(void) { return g_error.c_str(); }

void ts_string_free(char* s) { delete[] s; }

ts_status ts_lattice_create(uint32_t lx, uint32_t ly, ts_lattice** out) {
    if (!out) return invalid("out is NULL");
    return guard([&] { *out = new ts_lattice{TorusLattice(lx, ly)}; });
}

void ts_lattice_destroy(ts_lattice* lat) { delete lat; }

ts_status ts_state_create(const ts_lattice* lat, int with_logicals, ts_state** out) {
    if (!lat || !out) return invalid("lat or out is NULL");
    return guard([&] { *out = new ts_state{lat->lat.toric_code_state(with_logicals != 0)}; });
}

void ts_state_destroy(ts_state* st) { delete st; }

ts_status ts_state_apply_layer(ts_state* st, const ts_lattice* lat, double r, uint64_t seed,
                               uint32_t* decohered_out) {
    if (!st || !lat) return invalid("st or lat is NULL");
    return guard([&] {
        SplitMix64 rng(seed);
        DecoherencePattern pat = apply_stochastic_layer(st->st, lat->lat, r, rng);
        if (decohered_out) *decohered_out = static_cast<uint32_t>(pat.links.size());
    });
}

ts_status ts_state_chi_i(const ts_state* st, const ts_lattice* lat, double* out) {
    if (!st || !lat || !out) return invalid("st, lat or out is NULL");
    return guard([&] { *out = chi_I(st->st, lat->lat); });
}

ts_status ts_state_chi_ii(const ts_state* st, const ts_lattice* lat, double* out) {
    if (!st || !lat || !out) return invalid("st, lat or out is NULL");
    return guard([&] { *out = chi_II(st->st, lat->lat); });
}

ts_status ts_state_negativity(const ts_state* st, const ts_lattice* lat, uint32_t k_a,
                              double* out) {
    if (!st || !lat || !out) return invalid("st, lat or out is NULL");
    return guard([&] {
        std::vector<uint32_t> region = lat->lat.region_links(k_a);
        *out = negativity(st->st, region);
    });
}

ts_status ts_state_purity_exponent(const ts_state* st, int32_t* out) {
    if (!st || !out) return invalid("st or out is NULL");
    *out = st->st.purity_exponent();
    return TS_OK;
}

ts_status ts_state_logical_dead(const ts_state* st, uint32_t index, int* out) {
    if (!st || !out) return invalid("st or out is NULL");
    if (index >= st->st.num_tracked_logicals()) return invalid("logical index out of range");
    *out = st->st.logical_alive(index) ? 0 : 1;
    return TS_OK;
}

ts_status ts_sweep_run_json(const char* config_json, const char* out_override, int has_cli_seed,
                            uint64_t cli_seed, int has_env_seed, uint64_t env_seed,
                            uint32_t threads_override, char* resolved_out,
                            size_t resolved_out_len) {
    if (!config_json) return invalid("config_json is NULL");
    return guard([&] {
        RunConfig cfg = run_config_from_json(config_json);
        if (!cfg.seed_in_file && has_env_seed) cfg.master_seed = env_seed;
        if (has_cli_seed) cfg.master_seed = cli_seed;
        if (out_override && *out_override) cfg.output_dir = out_override;
        if (cfg.output_dir.empty()) cfg.output_dir = "runs/" + cfg.name;
        if (threads_override) cfg.threads = threads_override;
        run_sweep(cfg);
        copy_out(resolved_out, resolved_out_len, cfg.output_dir);
    });
}

ts_status ts_sweep_run_file(const char* config_path, const char* out_override, int has_cli_seed,
                            uint64_t cli_seed, int has_env_seed, uint64_t env_seed,
                            uint32_t threads_override, char* resolved_out,
                            size_t resolved_out_len) {
    if (!config_path) return invalid("config_path is NULL");
    std::ifstream in(config_path);
    if (!in) {
        g_error = std::string("cannot read ") + config_path;
        return TS_ERR_IO;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    return ts_sweep_run_json(text.c_str(), out_override, has_cli_seed, cli_seed, has_env_seed,
                             env_seed, threads_override, resolved_out, resolved_out_len);
}

ts_status ts_validate_run(uint32_t lx, uint32_t ly, int corrupt_shift, const char* json_path,
                          int* all_pass_out, char** text_out) {
    return guard([&] {
        ValidationReport rep =
            run_validation(lx, ly, corrupt_shift ? KrausBuilder(corrupt_shift_kraus)
                                                 : KrausBuilder(zx_kraus));
        if (json_path) {
            std::ofstream out(json_path);
            if (!out) throw std::runtime_error(std::string("cannot write ") + json_path);
            out << report_to_json(rep) << "\n";
        }
        if (text_out) {
            std::string text;
            for (const ValidationCell& c : rep.cells) {
                text += (c.pass ? "PASS " : "FAIL ") + c.name + " -- " + c.detail + "\n";
            }
            for (const std::string& i : rep.info) text += "INFO " + i + "\n";
            char* buf = new char[text.size() + 1];
            std::memcpy(buf, text.c_str(), text.size() + 1);
            *text_out = buf;
        }
        if (all_pass_out) *all_pass_out = rep.all_pass() ? 1 : 0;
    });
}

ts_status ts_oracle_check_run(uint32_t lx, uint32_t ly, uint64_t trajectories, double r,
                              uint64_t seed, const char* out_csv_path, uint64_t* mismatches_out) {
    if (!out_csv_path) return invalid("out_csv_path is NULL");
    if (trajectories == 0) return invalid("trajectories must be >= 1");
    return guard([&] {
        TorusLattice lat(lx, ly);
        const MixedStabilizerState initial = lat.toric_code_state(false);
        std::filesystem::path path(out_csv_path);
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << "trajectory,string,stabilizer_CII,oracle_CII,match\n";
        uint64_t mismatches = 0;
        for (uint64_t t = 0; t < trajectories; t++) {
            SplitMix64 rng(mix_fields({seed, t}));
            MixedStabilizerState st = initial;
            DecoherencePattern pat = apply_stochastic_layer(st, lat, r, rng);
            std::vector<std::vector<int>> flags = chi_II_strings(st, lat);
            PatternConnectivity conn(lat, pat);
            for (uint32_t ix = 0; ix < lat.lx(); ix++) {
                for (uint32_t len = 1; len + 3 <= lat.ly(); len++) {
                    int sim = flags[ix][len - 1];
                    int oracle =
                        conn.connected(conn.vertex(ix, 0), conn.vertex(ix, len)) ? 1 : 0;
                    bool match = sim == oracle;
                    if (!match) mismatches++;
                    out << t << ",ix" << ix << "_len" << len << ',' << sim << ',' << oracle << ','
                        << (match ? 1 : 0) << "\n";
                }
            }
        }
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + path.string());
        if (mismatches_out) *mismatches_out = mismatches;
    });
}

ts_status ts_collapse_run(const char* run_dir, uint64_t resamples, uint64_t seed, double* r_c_out,
                          double* nu_out, double* zeta_out, double* quality_out) {
    if (!run_dir) return invalid("run_dir is NULL");
    return guard([&] {
        ScalingFit fit = collapse_run_dir(run_dir, resamples, seed);
        if (r_c_out) *r_c_out = fit.r_c;
        if (nu_out) *nu_out = fit.nu;
        if (zeta_out) *zeta_out = fit.zeta;
        if (quality_out) *quality_out = fit.quality;
    });
}

ts_status ts_emit_plot(const char* summary_csv_path, const char* figure_id,
                       const char* out_csv_path) {
    if (!summary_csv_path || !figure_id || !out_csv_path) {
        return invalid("summary_csv_path, figure_id or out_csv_path is NULL");
    }
    return guard([&] {
        std::vector<SummaryRow> rows = read_summary_csv(summary_csv_path);
        std::string csv = emit_plot_csv(rows, figure_id);
        std::filesystem::path path(out_csv_path);
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << csv;
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + path.string());
    });
}

ts_status ts_percolation_threshold(const uint32_t* sizes, size_t n_sizes, double r_lo,
                                   double r_hi, double step, uint64_t samples_per_point,
                                   uint64_t seed, double* out) {
    if (!sizes || n_sizes == 0 || !out) return invalid("sizes or out is NULL/empty");
    return guard([&] {
        *out = estimate_threshold(std::span<const uint32_t>(sizes, n_sizes), r_lo, r_hi, step,
                                  samples_per_point, seed);
    });
}

}  // extern "C"
