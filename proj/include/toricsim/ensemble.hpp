#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toricsim/lattice.hpp"

namespace toricsim {

// Streaming accumulator of central moments up to fourth order, with an exact
// merge, so mean, unbiased variance and the sampling variance of the variance
// are all available without a second pass.
class MomentAccumulator {
  public:
    void add(double x);
    void merge(const MomentAccumulator& other);

    uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    // Unbiased (n-1) sample variance; 0 below two samples.
    double variance() const;
    // sqrt(variance / n).
    double stderr_of_mean() const;
    // Estimated Var[s^2] of the sample variance; 0 below two samples.
    double variance_of_variance() const;

  private:
    uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;  // sum (x-mean)^2
    double m3_ = 0.0;  // sum (x-mean)^3
    double m4_ = 0.0;  // sum (x-mean)^4
};

struct SizeSpec {
    uint32_t lx = 0;
    uint32_t ly = 0;
};

struct RunConfig {
    std::string name = "run";
    std::vector<SizeSpec> sizes = {{8, 8}, {12, 12}, {16, 16}, {20, 20}};
    std::vector<double> r_grid;
    uint64_t samples = 1000;
    uint64_t master_seed = 1;
    // Whether the parsed config text itself carried a seed; used to order
    // seed precedence (CLI flag, then config, then environment).
    bool seed_in_file = false;
    // Pure initial state carries the two tracked X-logicals as generators;
    // the mixed variant traces them out.
    bool initial_pure = false;
    bool measure_chi_i = false;
    bool measure_chi_ii = true;
    bool measure_negativity = false;
    bool measure_logicals = false;
    bool measure_symmetry = false;
    bool chi_anchor_average = false;
    bool record_patterns = true;
    uint32_t threads = 1;
    // Empty: no files, results stay in memory. Otherwise a directory that will
    // receive config.json, trajectories.jsonl and summary.csv.
    std::string output_dir;
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

// Ensemble statistics of one (lattice size, r) grid point.
struct PointData {
    uint32_t lx = 0;
    uint32_t ly = 0;
    double r = 0.0;
    uint64_t samples = 0;
    MomentAccumulator chi_i, chi_ii, o1, o2, d1, d2;
    std::vector<MomentAccumulator> negativity;     // index = k_A
    std::vector<MomentAccumulator> logical_dead;   // index = tracked logical
    uint64_t minus_anomalies = 0;
    std::vector<double> chi_ii_samples;  // raw values, kept for resampling
};

struct EnsembleDataset {
    RunConfig config;
    std::vector<PointData> points;           // size-major, r-minor
    std::vector<double> negativity_offsets;  // per size; NaN when not measured

    const PointData* find(uint32_t lx, uint32_t ly, double r) const;
};

// Runs the full (size, r, sample) grid. Each trajectory draws its own counter
// stream seeded from (master_seed, size index, r index, sample index), so the
// result is identical for any thread count, and bit-identical files are
// written when output_dir is set.
EnsembleDataset run_sweep(const RunConfig& config);

// Offset c of the fully dephased state's negativity line N_A(k_A) = 3 k_A + c,
// measured by simulating the r=1 channel once. Throws if the measured profile
// is not exactly linear with slope 3 over k_A >= 1.
double calibrate_negativity_offset(const TorusLattice& lat);

// Sum over k_A >= 1 of (E[N_A(k_A)] - (3 k_A + offset))^2.
double delta0_negativity(const PointData& point, double offset);

// F = Lx (Ly-3) Var[chi_II], and its sampling error from Var[s^2].
double rescaled_variance(const PointData& point);
double rescaled_variance_error(const PointData& point);

// Long-format summary table. write_summary_csv emits the header
// Lx,Ly,r,observable,mean,var,stderr,n and one row per point and observable,
// full precision; read_summary_csv parses that format back.
struct SummaryRow {
    uint32_t lx = 0;
    uint32_t ly = 0;
    double r = 0.0;
    std::string observable;
    double mean = 0.0;
    double var = 0.0;
    double std_error = 0.0;
    uint64_t n = 0;
};

std::vector<SummaryRow> summarize(const EnsembleDataset& data);
void write_summary_csv(const EnsembleDataset& data, const std::string& path);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

// Tidy per-figure data extracted from a summary table:
//   fig2c: r,delta0_NA,Lx        fig3b: r,mean_chiII,stderr,Lx,Ly
//   fig4b: r,F,Lx
// Unknown figure ids throw std::invalid_argument.
std::string emit_plot_csv(const std::vector<SummaryRow>& rows, const std::string& figure_id);

}  // namespace toricsim
