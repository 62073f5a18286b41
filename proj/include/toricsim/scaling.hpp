#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "toricsim/ensemble.hpp"

namespace toricsim {

// One size's F(r) series with per-point errors, ordered by ascending r.
struct ScalingCurve {
    uint32_t lx = 0;  // scaling length
    std::vector<double> r;
    std::vector<double> f;
    std::vector<double> sigma;
};

struct ScalingFit {
    double r_c = 0.0;
    double nu = 0.0;
    double zeta = 0.0;
    double quality = 0.0;
    double err_r_c = 0.0;
    double err_nu = 0.0;
    double err_zeta = 0.0;
    uint64_t bootstrap_resamples = 0;
    bool converged = false;
    std::vector<std::string> log;
};

// Extract per-size (r, F, sigma_F) curves; points with sigma_F <= 0 are
// dropped. The dataset variant requires chi_II to have been measured; the row
// variant reads the "F" rows of a summary table, grouped by (Lx, Ly).
std::vector<ScalingCurve> scaling_curves(const EnsembleDataset& data);
std::vector<ScalingCurve> scaling_curves(const std::vector<SummaryRow>& rows);

// Collapse deviation statistic: every point is scaled to
// x = (r - r_c) Lx^{1/nu}, y = F Lx^{-zeta/nu}, then compared with the master
// curve value interpolated linearly (error-weighted) through the bracketing
// points of the other sizes. Near 1 means the curves collapse within errors.
// Points no other size brackets are skipped.
double collapse_quality(std::span<const ScalingCurve> curves, double r_c, double nu, double zeta);

// Minimizes collapse_quality by Nelder-Mead descent restarted from a 3x3x3
// grid around init. Refuses fewer than 3 sizes or fewer than 5 usable points
// per size. No bootstrap errors (run collapse_with_bootstrap for those).
ScalingFit collapse(std::span<const ScalingCurve> curves,
                    std::array<double, 3> init = {0.5, 4.0 / 3.0, 2.5});

// Full pipeline on an in-memory dataset: fit, then refit `resamples`
// trajectory resamplings of every point to get per-parameter errors.
ScalingFit collapse_with_bootstrap(const EnsembleDataset& data, uint64_t resamples, uint64_t seed);

// Same pipeline on a run directory: curves from summary.csv, per-trajectory
// chi_II samples from trajectories.jsonl, then fit.json and collapsed.csv are
// written back into the directory.
ScalingFit collapse_run_dir(const std::string& run_dir, uint64_t resamples, uint64_t seed);

std::string fit_to_json(const ScalingFit& fit);

// Scaled data table for plotting: Lx,r,x,y,dy at the fitted parameters.
std::string collapsed_csv(std::span<const ScalingCurve> curves, const ScalingFit& fit);

}  // namespace toricsim
