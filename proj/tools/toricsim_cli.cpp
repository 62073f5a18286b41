// Command-line front end. Everything goes through the C API in toricsim.h;
// the core library is never linked directly.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "toricsim.h"

namespace {

int exit_code(ts_status s) {
    switch (s) {
        case TS_OK: return 0;
        case TS_ERR_FAILED: return 1;
        case TS_ERR_INVALID: return 2;
        case TS_ERR_IO: return 3;
    }
    return 1;
}

int fail(ts_status s) {
    std::fprintf(stderr, "error (%s): %s\n", ts_status_name(s), ts_last_error());
    return exit_code(s);
}

// Strict uint64 parse for the TORICSIM_SEED environment variable.
bool parse_seed(const char* text, uint64_t* out) {
    if (!text || !*text) return false;
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(text, &end, 10);
    if (errno != 0 || end == text || *end != '\0') return false;
    *out = static_cast<uint64_t>(v);
    return true;
}

struct SeedEnv {
    bool has = false;
    bool bad = false;
    uint64_t value = 0;
};

SeedEnv read_seed_env() {
    SeedEnv env;
    const char* text = std::getenv("TORICSIM_SEED");
    if (!text) return env;
    if (parse_seed(text, &env.value)) {
        env.has = true;
    } else {
        env.bad = true;
    }
    return env;
}

std::string negativity_config(uint64_t samples) {
    std::ostringstream os;
    os << "{\n  \"name\": \"negativity\",\n  \"sizes\": [[20, 6]],\n  \"r_grid\": [";
    for (int i = 0; i <= 20; i++) {
        if (i) os << ", ";
        os << i / 20.0;
    }
    os << "],\n  \"samples\": " << samples
       << ",\n  \"initial\": \"mixed\",\n  \"observables\": [\"negativity\"]\n}\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toric-code dephasing simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    uint64_t seed = 0;
    uint32_t threads = 0;

    auto add_shared = [&](CLI::App* sub, bool with_config) {
        CLI::Option* seed_opt = sub->add_option("--seed", seed, "Master seed (overrides config and environment)");
        sub->add_option("--out", out_path, "Output path override");
        sub->add_option("--threads", threads, "Worker threads (0 keeps the config value)");
        if (with_config) sub->add_option("--config", config_path, "JSON config file")->required();
        return seed_opt;
    };

    CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep from a JSON config");
    CLI::Option* sweep_seed = add_shared(sweep, true);

    uint64_t neg_samples = 200;
    CLI::App* neg = app.add_subcommand("negativity", "Preset 20x6 negativity-vs-r sweep");
    CLI::Option* neg_seed = add_shared(neg, false);
    neg->add_option("--samples", neg_samples, "Trajectories per r value");

    std::string run_dir;
    uint64_t resamples = 200;
    CLI::App* collapse = app.add_subcommand("collapse", "Finite-size collapse of a finished run");
    collapse->add_option("--run", run_dir, "Run directory containing summary.csv")->required();
    collapse->add_option("--resamples", resamples, "Bootstrap resamples");
    CLI::Option* collapse_seed = collapse->add_option("--seed", seed, "Bootstrap seed");

    uint32_t val_lx = 6, val_ly = 6;
    bool corrupt_shift = false;
    CLI::App* validate = app.add_subcommand("validate", "Check the symmetry and order-parameter tables");
    validate->add_option("--lx", val_lx, "Lattice width");
    validate->add_option("--ly", val_ly, "Lattice height");
    validate->add_flag("--corrupt-shift", corrupt_shift, "Misalign the Kraus operators (negative control; must fail)");
    validate->add_option("--out", out_path, "Write the report as JSON to this path");

    uint32_t or_lx = 12, or_ly = 12;
    uint64_t or_traj = 500;
    double or_r = 0.5;
    std::string or_out = "oracle_check.csv";
    CLI::App* oracle = app.add_subcommand("oracle-check", "Compare string correlators against the percolation oracle");
    oracle->add_option("--lx", or_lx, "Lattice width");
    oracle->add_option("--ly", or_ly, "Lattice height");
    oracle->add_option("--trajectories", or_traj, "Number of trajectories");
    oracle->add_option("--r", or_r, "Dephasing probability");
    CLI::Option* oracle_seed = oracle->add_option("--seed", seed, "Trajectory seed");
    oracle->add_option("--out", or_out, "Comparison CSV path");

    std::string summary_path, figure_id;
    CLI::App* plot = app.add_subcommand("emit-plot", "Extract a plot-ready CSV from a run summary");
    plot->add_option("--summary", summary_path, "summary.csv produced by a sweep")->required();
    plot->add_option("--figure", figure_id, "Figure id: fig2c, fig3b or fig4b")->required();
    plot->add_option("--out", out_path, "Destination CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    SeedEnv env = read_seed_env();
    if (env.bad) {
        std::fprintf(stderr, "error (invalid argument): TORICSIM_SEED is not an unsigned integer\n");
        return 2;
    }

    char resolved[4096] = {0};

    if (sweep->parsed()) {
        ts_status s = ts_sweep_run_file(config_path.c_str(), out_path.c_str(),
                                        sweep_seed->count() > 0, seed, env.has, env.value,
                                        threads, resolved, sizeof(resolved));
        if (s != TS_OK) return fail(s);
        std::printf("run written to %s\n", resolved);
        return 0;
    }

    if (neg->parsed()) {
        std::string cfg = negativity_config(neg_samples);
        ts_status s = ts_sweep_run_json(cfg.c_str(), out_path.c_str(), neg_seed->count() > 0,
                                        seed, env.has, env.value, threads, resolved,
                                        sizeof(resolved));
        if (s != TS_OK) return fail(s);
        std::printf("run written to %s\n", resolved);
        return 0;
    }

    if (collapse->parsed()) {
        uint64_t boot_seed = collapse_seed->count() > 0 ? seed : (env.has ? env.value : 1);
        double r_c = 0, nu = 0, zeta = 0, quality = 0;
        ts_status s = ts_collapse_run(run_dir.c_str(), resamples, boot_seed, &r_c, &nu, &zeta,
                                      &quality);
        if (s != TS_OK) return fail(s);
        std::printf("r_c     = %.6f\n", r_c);
        std::printf("nu      = %.6f\n", nu);
        std::printf("zeta    = %.6f\n", zeta);
        std::printf("quality = %.6g\n", quality);
        std::printf("fit written to %s/fit.json\n", run_dir.c_str());
        return 0;
    }

    if (validate->parsed()) {
        int all_pass = 0;
        char* text = nullptr;
        ts_status s = ts_validate_run(val_lx, val_ly, corrupt_shift ? 1 : 0,
                                      out_path.empty() ? nullptr : out_path.c_str(), &all_pass,
                                      &text);
        if (s != TS_OK) return fail(s);
        if (text) {
            std::fputs(text, stdout);
            ts_string_free(text);
        }
        std::printf("%s\n", all_pass ? "all cells pass" : "some cells FAILED");
        return all_pass ? 0 : 1;
    }

    if (oracle->parsed()) {
        uint64_t or_seed = oracle_seed->count() > 0 ? seed : (env.has ? env.value : 1);
        uint64_t mismatches = 0;
        ts_status s = ts_oracle_check_run(or_lx, or_ly, or_traj, or_r, or_seed, or_out.c_str(),
                                          &mismatches);
        if (s != TS_OK) return fail(s);
        std::printf("%" PRIu64 " trajectories, %" PRIu64 " mismatches, table in %s\n", or_traj,
                    mismatches, or_out.c_str());
        return mismatches == 0 ? 0 : 1;
    }

    if (plot->parsed()) {
        ts_status s = ts_emit_plot(summary_path.c_str(), figure_id.c_str(), out_path.c_str());
        if (s != TS_OK) return fail(s);
        std::printf("plot data written to %s\n", out_path.c_str());
        return 0;
    }

    return 2;
}
