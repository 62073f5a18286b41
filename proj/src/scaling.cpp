#include "toricsim/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "toricsim/rng.hpp"

namespace toricsim {

namespace {

constexpr double kPenalty = 1e9;

struct ScaledCurve {
    std::vector<double> x, y, dy;
};

void check_curves(std::span<const ScalingCurve> curves) {
    if (curves.size() < 3) {
        throw std::invalid_argument("scaling collapse needs at least 3 sizes");
    }
    for (const ScalingCurve& c : curves) {
        if (c.r.size() < 5) {
            throw std::invalid_argument("scaling collapse needs at least 5 r points per size");
        }
        if (c.r.size() != c.f.size() || c.r.size() != c.sigma.size()) {
            throw std::invalid_argument("ragged scaling curve");
        }
        for (double s : c.sigma) {
            if (!(s > 0.0)) throw std::invalid_argument("scaling collapse needs positive sigma_F");
        }
        for (size_t i = 1; i < c.r.size(); i++) {
            if (c.r[i] <= c.r[i - 1]) throw std::invalid_argument("curve r values not increasing");
        }
    }
}

}  // namespace

double collapse_quality(std::span<const ScalingCurve> curves, double r_c, double nu, double zeta) {
    std::vector<ScaledCurve> scaled(curves.size());
    for (size_t i = 0; i < curves.size(); i++) {
        double l = static_cast<double>(curves[i].lx);
        double a = std::pow(l, 1.0 / nu);
        double b = std::pow(l, -zeta / nu);
        size_t n = curves[i].r.size();
        scaled[i].x.resize(n);
        scaled[i].y.resize(n);
        scaled[i].dy.resize(n);
        for (size_t p = 0; p < n; p++) {
            scaled[i].x[p] = (curves[i].r[p] - r_c) * a;
            scaled[i].y[p] = curves[i].f[p] * b;
            scaled[i].dy[p] = curves[i].sigma[p] * b;
        }
    }

    double sum = 0.0;
    uint64_t used = 0;
    for (size_t i = 0; i < scaled.size(); i++) {
        for (size_t p = 0; p < scaled[i].x.size(); p++) {
            double x = scaled[i].x[p];
            // Master-curve estimate: from every other size take the nearest
            // point on each side of x, then an error-weighted straight line.
            double k = 0, kx = 0, ky = 0, kxx = 0, kxy = 0;
            bool left = false, right = false;
            size_t selected = 0;
            for (size_t j = 0; j < scaled.size(); j++) {
                if (j == i) continue;
                const std::vector<double>& xs = scaled[j].x;
                size_t hi = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
                for (size_t cand : {hi, hi - 1}) {
                    if (cand >= xs.size()) continue;  // hi-1 wraps when hi == 0
                    double w = 1.0 / (scaled[j].dy[cand] * scaled[j].dy[cand]);
                    k += w;
                    kx += w * xs[cand];
                    ky += w * scaled[j].y[cand];
                    kxx += w * xs[cand] * xs[cand];
                    kxy += w * xs[cand] * scaled[j].y[cand];
                    (xs[cand] <= x ? left : right) = true;
                    selected++;
                }
            }
            if (!left || !right || selected < 2) continue;
            double det = k * kxx - kx * kx;
            if (!(det > 1e-300)) continue;
            double slope = (k * kxy - kx * ky) / det;
            double icept = (kxx * ky - kx * kxy) / det;
            double master = slope * x + icept;
            double master_var = (kxx - 2.0 * x * kx + x * x * k) / det;
            double resid = scaled[i].y[p] - master;
            sum += resid * resid / (scaled[i].dy[p] * scaled[i].dy[p] + master_var);
            used++;
        }
    }
    if (used == 0) return kPenalty;
    return sum / static_cast<double>(used);
}

namespace {

struct NelderMeadResult {
    std::array<double, 3> x = {0.0, 1.0, 0.0};
    double f = kPenalty;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::array<double, 3>&)>& fn,
                             std::array<double, 3> start, int max_iter, double step_scale = 1.0) {
    constexpr int kDim = 3;
    constexpr double kAlpha = 1.0, kGamma = 2.0, kRho = 0.5, kSigma = 0.5;
    std::array<double, 3> steps = {0.02 * step_scale, 0.1 * step_scale, 0.1 * step_scale};

    std::array<std::array<double, 3>, kDim + 1> xs;
    std::array<double, kDim + 1> fs;
    xs[0] = start;
    fs[0] = fn(start);
    for (int i = 0; i < kDim; i++) {
        xs[i + 1] = start;
        xs[i + 1][i] += steps[i];
        fs[i + 1] = fn(xs[i + 1]);
    }

    auto order = [&] {
        std::array<int, kDim + 1> idx = {0, 1, 2, 3};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<std::array<double, 3>, kDim + 1> nx;
        std::array<double, kDim + 1> nf;
        for (int i = 0; i <= kDim; i++) {
            nx[i] = xs[idx[i]];
            nf[i] = fs[idx[i]];
        }
        xs = nx;
        fs = nf;
    };

    NelderMeadResult res;
    for (int iter = 0; iter < max_iter; iter++) {
        order();
        if (std::abs(fs[kDim] - fs[0]) < 1e-10 * (1.0 + std::abs(fs[0]))) {
            res.converged = true;
            break;
        }
        std::array<double, 3> centroid = {0, 0, 0};
        for (int i = 0; i < kDim; i++) {
            for (int d = 0; d < kDim; d++) centroid[d] += xs[i][d] / kDim;
        }
        auto blend = [&](double t) {
            std::array<double, 3> p;
            for (int d = 0; d < kDim; d++) p[d] = centroid[d] + t * (centroid[d] - xs[kDim][d]);
            return p;
        };
        std::array<double, 3> refl = blend(kAlpha);
        double f_refl = fn(refl);
        if (f_refl < fs[0]) {
            std::array<double, 3> exp_pt = blend(kGamma);
            double f_exp = fn(exp_pt);
            if (f_exp < f_refl) {
                xs[kDim] = exp_pt;
                fs[kDim] = f_exp;
            } else {
                xs[kDim] = refl;
                fs[kDim] = f_refl;
            }
        } else if (f_refl < fs[kDim - 1]) {
            xs[kDim] = refl;
            fs[kDim] = f_refl;
        } else {
            std::array<double, 3> contr = blend(f_refl < fs[kDim] ? kRho : -kRho);
            double f_contr = fn(contr);
            if (f_contr < std::min(f_refl, fs[kDim])) {
                xs[kDim] = contr;
                fs[kDim] = f_contr;
            } else {
                for (int i = 1; i <= kDim; i++) {
                    for (int d = 0; d < kDim; d++) {
                        xs[i][d] = xs[0][d] + kSigma * (xs[i][d] - xs[0][d]);
                    }
                    fs[i] = fn(xs[i]);
                }
            }
        }
    }
    order();
    res.x = xs[0];
    res.f = fs[0];
    return res;
}

std::string fmt_params(const std::array<double, 3>& p, double q) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "r_c=%.6g nu=%.6g zeta=%.6g quality=%.6g", p[0], p[1], p[2],
                  q);
    return buf;
}

}  // namespace

ScalingFit collapse(std::span<const ScalingCurve> curves, std::array<double, 3> init) {
    check_curves(curves);
    double r_min = std::numeric_limits<double>::infinity(), r_max = -r_min;
    for (const ScalingCurve& c : curves) {
        r_min = std::min(r_min, c.r.front());
        r_max = std::max(r_max, c.r.back());
    }
    double span = std::max(r_max - r_min, 0.1);
    auto objective = [&](const std::array<double, 3>& p) {
        if (p[1] < 0.2 || p[1] > 10.0) return kPenalty;
        if (p[0] < r_min - span || p[0] > r_max + span) return kPenalty;
        if (std::abs(p[2]) > 20.0) return kPenalty;
        return collapse_quality(curves, p[0], p[1], p[2]);
    };

    ScalingFit fit;
    NelderMeadResult best;
    for (double drc : {-0.05, 0.0, 0.05}) {
        for (double snu : {0.75, 1.0, 1.25}) {
            for (double dz : {-0.5, 0.0, 0.5}) {
                std::array<double, 3> start = {init[0] + drc, init[1] * snu, init[2] + dz};
                NelderMeadResult res = nelder_mead(objective, start, 400);
                fit.log.push_back("start " + fmt_params(start, 0.0) + " -> " +
                                  fmt_params(res.x, res.f));
                if (res.f < best.f) best = res;
            }
        }
    }
    // A fresh simplex escapes the shrink-to-start stagnation the restarts can
    // hit on noisy data; probe a few simplex sizes around the winner.
    for (double scale : {1.0, 0.3, 0.1, 2.0, 0.03}) {
        NelderMeadResult res = nelder_mead(objective, best.x, 400, scale);
        if (res.f < best.f - 1e-12 * (1.0 + std::abs(best.f))) {
            best = res;
            fit.log.push_back("polish scale=" + std::to_string(scale) + " -> " +
                              fmt_params(best.x, best.f));
        }
    }
    fit.r_c = best.x[0];
    fit.nu = best.x[1];
    fit.zeta = best.x[2];
    fit.quality = best.f;
    fit.converged = best.converged;
    return fit;
}

std::vector<ScalingCurve> scaling_curves(const EnsembleDataset& data) {
    if (!data.config.measure_chi_ii) {
        throw std::invalid_argument("dataset has no chi_II samples to build F curves from");
    }
    std::vector<ScalingCurve> curves;
    for (size_t si = 0; si < data.config.sizes.size(); si++) {
        ScalingCurve c;
        c.lx = data.config.sizes[si].lx;
        for (size_t ri = 0; ri < data.config.r_grid.size(); ri++) {
            const PointData& pt = data.points.at(si * data.config.r_grid.size() + ri);
            double sigma = rescaled_variance_error(pt);
            if (!(sigma > 0.0)) continue;
            c.r.push_back(pt.r);
            c.f.push_back(rescaled_variance(pt));
            c.sigma.push_back(sigma);
        }
        if (!c.r.empty()) curves.push_back(std::move(c));
    }
    return curves;
}

std::vector<ScalingCurve> scaling_curves(const std::vector<SummaryRow>& rows) {
    std::vector<std::pair<uint32_t, uint32_t>> keys;
    std::vector<ScalingCurve> curves;
    for (const SummaryRow& row : rows) {
        if (row.observable != "F" || !(row.std_error > 0.0)) continue;
        std::pair<uint32_t, uint32_t> key = {row.lx, row.ly};
        size_t ci = std::find(keys.begin(), keys.end(), key) - keys.begin();
        if (ci == keys.size()) {
            keys.push_back(key);
            curves.push_back({row.lx, {}, {}, {}});
        }
        curves[ci].r.push_back(row.r);
        curves[ci].f.push_back(row.mean);
        curves[ci].sigma.push_back(row.std_error);
    }
    for (ScalingCurve& c : curves) {
        std::vector<size_t> idx(c.r.size());
        for (size_t i = 0; i < idx.size(); i++) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return c.r[a] < c.r[b]; });
        ScalingCurve s;
        s.lx = c.lx;
        for (size_t i : idx) {
            s.r.push_back(c.r[i]);
            s.f.push_back(c.f[i]);
            s.sigma.push_back(c.sigma[i]);
        }
        c = std::move(s);
    }
    return curves;
}

namespace {

// One grid point's raw chi_II samples, for trajectory resampling.
struct BootstrapPoint {
    uint32_t lx = 0;
    uint32_t ly = 0;
    double r = 0.0;
    const std::vector<double>* samples = nullptr;
};

void add_bootstrap_errors(ScalingFit& fit, const std::vector<BootstrapPoint>& points,
                          uint64_t resamples, uint64_t seed) {
    if (resamples == 0) return;
    MomentAccumulator acc_rc, acc_nu, acc_zeta;
    for (uint64_t b = 0; b < resamples; b++) {
        // Group resampled points into per-(lx,ly) curves, ordered by r.
        std::vector<std::pair<uint32_t, uint32_t>> keys;
        std::vector<ScalingCurve> boot;
        for (size_t pi = 0; pi < points.size(); pi++) {
            const BootstrapPoint& pt = points[pi];
            const std::vector<double>& xs = *pt.samples;
            if (xs.size() < 2) continue;
            SplitMix64 rng(mix_fields({seed, b, pi}));
            MomentAccumulator acc;
            for (size_t s = 0; s < xs.size(); s++) acc.add(xs[rng.below(xs.size())]);
            double a = static_cast<double>(pt.lx) * (static_cast<double>(pt.ly) - 3.0);
            double sigma = a * std::sqrt(acc.variance_of_variance());
            if (!(sigma > 0.0)) continue;
            std::pair<uint32_t, uint32_t> key = {pt.lx, pt.ly};
            size_t ci = std::find(keys.begin(), keys.end(), key) - keys.begin();
            if (ci == keys.size()) {
                keys.push_back(key);
                boot.push_back({pt.lx, {}, {}, {}});
            }
            boot[ci].r.push_back(pt.r);
            boot[ci].f.push_back(a * acc.variance());
            boot[ci].sigma.push_back(sigma);
        }
        std::erase_if(boot, [](const ScalingCurve& c) { return c.r.size() < 5; });
        if (boot.size() < 3) continue;
        double r_min = boot.front().r.front(), r_max = boot.front().r.back();
        for (const ScalingCurve& c : boot) {
            r_min = std::min(r_min, c.r.front());
            r_max = std::max(r_max, c.r.back());
        }
        double span = std::max(r_max - r_min, 0.1);
        auto objective = [&](const std::array<double, 3>& p) {
            if (p[1] < 0.2 || p[1] > 10.0) return kPenalty;
            if (p[0] < r_min - span || p[0] > r_max + span) return kPenalty;
            if (std::abs(p[2]) > 20.0) return kPenalty;
            return collapse_quality(boot, p[0], p[1], p[2]);
        };
        // One local descent from the full-sample optimum per resample.
        NelderMeadResult res = nelder_mead(objective, {fit.r_c, fit.nu, fit.zeta}, 200);
        acc_rc.add(res.x[0]);
        acc_nu.add(res.x[1]);
        acc_zeta.add(res.x[2]);
    }
    fit.bootstrap_resamples = acc_rc.count();
    fit.err_r_c = std::sqrt(acc_rc.variance());
    fit.err_nu = std::sqrt(acc_nu.variance());
    fit.err_zeta = std::sqrt(acc_zeta.variance());
}

}  // namespace

ScalingFit collapse_with_bootstrap(const EnsembleDataset& data, uint64_t resamples,
                                   uint64_t seed) {
    std::vector<ScalingCurve> curves = scaling_curves(data);
    ScalingFit fit = collapse(curves);
    std::vector<BootstrapPoint> points;
    for (const PointData& pt : data.points) {
        points.push_back({pt.lx, pt.ly, pt.r, &pt.chi_ii_samples});
    }
    add_bootstrap_errors(fit, points, resamples, seed);
    return fit;
}

ScalingFit collapse_run_dir(const std::string& run_dir, uint64_t resamples, uint64_t seed) {
    std::filesystem::path dir(run_dir);
    std::vector<SummaryRow> rows = read_summary_csv((dir / "summary.csv").string());
    std::vector<ScalingCurve> curves = scaling_curves(rows);
    ScalingFit fit = collapse(curves);

    // Raw per-trajectory chi_II values keyed by grid point.
    std::vector<std::tuple<uint32_t, uint32_t, double>> keys;
    std::vector<std::vector<double>> samples;
    std::ifstream in(dir / "trajectories.jsonl");
    if (in) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            if (!j.contains("chi_II")) continue;
            std::tuple<uint32_t, uint32_t, double> key = {j.at("lx").get<uint32_t>(),
                                                          j.at("ly").get<uint32_t>(),
                                                          j.at("r").get<double>()};
            size_t ki = std::find(keys.begin(), keys.end(), key) - keys.begin();
            if (ki == keys.size()) {
                keys.push_back(key);
                samples.emplace_back();
            }
            samples[ki].push_back(j.at("chi_II").get<double>());
        }
        std::vector<BootstrapPoint> points;
        for (size_t ki = 0; ki < keys.size(); ki++) {
            points.push_back({std::get<0>(keys[ki]), std::get<1>(keys[ki]), std::get<2>(keys[ki]),
                              &samples[ki]});
        }
        add_bootstrap_errors(fit, points, resamples, seed);
    }

    std::ofstream fj(dir / "fit.json");
    if (!fj) throw std::runtime_error("cannot write " + (dir / "fit.json").string());
    fj << fit_to_json(fit) << "\n";
    std::ofstream cc(dir / "collapsed.csv");
    if (!cc) throw std::runtime_error("cannot write " + (dir / "collapsed.csv").string());
    cc << collapsed_csv(curves, fit);
    return fit;
}

std::string fit_to_json(const ScalingFit& fit) {
    nlohmann::json j;
    j["r_c"] = fit.r_c;
    j["nu"] = fit.nu;
    j["zeta"] = fit.zeta;
    j["quality"] = fit.quality;
    j["errors"] = {{"r_c", fit.err_r_c}, {"nu", fit.err_nu}, {"zeta", fit.err_zeta}};
    j["bootstrap_resamples"] = fit.bootstrap_resamples;
    j["converged"] = fit.converged;
    j["log"] = fit.log;
    return j.dump(2);
}

std::string collapsed_csv(std::span<const ScalingCurve> curves, const ScalingFit& fit) {
    std::string out = "Lx,r,x,y,dy\n";
    char buf[200];
    for (const ScalingCurve& c : curves) {
        double l = static_cast<double>(c.lx);
        double a = std::pow(l, 1.0 / fit.nu);
        double b = std::pow(l, -fit.zeta / fit.nu);
        for (size_t p = 0; p < c.r.size(); p++) {
            std::snprintf(buf, sizeof(buf), "%u,%.17g,%.17g,%.17g,%.17g\n", c.lx, c.r[p],
                          (c.r[p] - fit.r_c) * a, c.f[p] * b, c.sigma[p] * b);
            out += buf;
        }
    }
    return out;
}

}  // namespace toricsim
