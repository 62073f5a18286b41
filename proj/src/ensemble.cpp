#include "toricsim/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "toricsim/channel.hpp"
#include "toricsim/observables.hpp"
#include "toricsim/rng.hpp"
#include "toricsim/stabilizer_state.hpp"

namespace toricsim {

void MomentAccumulator::add(double x) {
    uint64_t n1 = n_;
    n_++;
    double n = static_cast<double>(n_);
    double delta = x - mean_;
    double dn = delta / n;
    double dn2 = dn * dn;
    double term1 = delta * dn * static_cast<double>(n1);
    mean_ += dn;
    m4_ += term1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2_ - 4.0 * dn * m3_;
    m3_ += term1 * dn * (n - 2.0) - 3.0 * dn * m2_;
    m2_ += term1;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.n_ == 0) return;
    if (n_ == 0) {
        *this = other;
        return;
    }
    double na = static_cast<double>(n_);
    double nb = static_cast<double>(other.n_);
    double n = na + nb;
    double delta = other.mean_ - mean_;
    double d2 = delta * delta;
    double m2 = m2_ + other.m2_ + d2 * na * nb / n;
    double m3 = m3_ + other.m3_ + d2 * delta * na * nb * (na - nb) / (n * n) +
                3.0 * delta * (na * other.m2_ - nb * m2_) / n;
    double m4 = m4_ + other.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                6.0 * d2 * (na * na * other.m2_ + nb * nb * m2_) / (n * n) +
                4.0 * delta * (na * other.m3_ - nb * m3_) / n;
    mean_ += delta * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += other.n_;
}

double MomentAccumulator::variance() const {
    return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double MomentAccumulator::stderr_of_mean() const {
    return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double MomentAccumulator::variance_of_variance() const {
    if (n_ < 2) return 0.0;
    double n = static_cast<double>(n_);
    double m4c = m4_ / n;
    double s2 = variance();
    double v = (m4c - (n - 3.0) / (n - 1.0) * s2 * s2) / n;
    return v > 0.0 ? v : 0.0;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_config(const RunConfig& c) {
    if (c.sizes.empty()) throw std::invalid_argument("config: no lattice sizes");
    if (c.r_grid.empty()) throw std::invalid_argument("config: empty r grid");
    if (c.samples < 1) throw std::invalid_argument("config: samples must be >= 1");
    for (double r : c.r_grid) {
        if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("config: r outside [0,1]");
    }
    for (const SizeSpec& s : c.sizes) {
        if (s.lx < 3 || s.ly < 3) throw std::invalid_argument("config: lattice below 3x3");
        if (c.measure_chi_ii && s.ly < 4) {
            throw std::invalid_argument("config: chi_II needs Ly >= 4");
        }
        if (c.measure_negativity && (s.lx < 4 || s.ly < 4)) {
            throw std::invalid_argument("config: negativity profile needs Lx,Ly >= 4");
        }
    }
}

// Everything measured on one trajectory, gathered before any aggregation so
// worker threads never share mutable state.
struct TrajectoryRecord {
    uint64_t seed = 0;
    std::vector<uint32_t> pattern;
    double chi_i = 0.0;
    double chi_ii = 0.0;
    std::vector<double> negativity;
    std::vector<uint8_t> logical_dead;
    SymmetryDiagnostics sym;
    uint64_t minus_count = 0;
};

TrajectoryRecord run_trajectory(const RunConfig& cfg, const TorusLattice& lat,
                                const MixedStabilizerState& initial, uint32_t size_index,
                                uint32_t r_index, uint32_t sample_index, double r) {
    TrajectoryRecord rec;
    rec.seed = trajectory_seed(cfg.master_seed, size_index, r_index, sample_index);
    SplitMix64 rng(rec.seed);
    MixedStabilizerState st = initial;
    DecoherencePattern pat = apply_stochastic_layer(st, lat, r, rng);
    if (cfg.record_patterns) rec.pattern = std::move(pat.links);
    if (cfg.measure_chi_ii) rec.chi_ii = chi_II(st, lat);
    if (cfg.measure_negativity) rec.negativity = negativity_profile(st, lat);
    if (cfg.measure_logicals) {
        for (size_t i = 0; i < st.num_tracked_logicals(); i++) {
            rec.logical_dead.push_back(st.logical_alive(i) ? 0 : 1);
        }
    }
    // Membership-based quantities last: they canonicalize the state copy.
    if (cfg.measure_symmetry) rec.sym = symmetry_diagnostics(st, lat);
    if (cfg.measure_chi_i) {
        rec.chi_i = chi_I(st, lat, cfg.chi_anchor_average, &rec.minus_count);
    }
    return rec;
}

std::string trajectory_json(const RunConfig& cfg, const SizeSpec& size, double r,
                            uint32_t sample_index, const TrajectoryRecord& rec) {
    nlohmann::json j;
    j["lx"] = size.lx;
    j["ly"] = size.ly;
    j["r"] = r;
    j["sample"] = sample_index;
    j["seed"] = rec.seed;
    if (cfg.record_patterns) j["pattern"] = rec.pattern;
    if (cfg.measure_chi_i) {
        j["chi_I"] = rec.chi_i;
        j["minus_anomalies"] = rec.minus_count;
    }
    if (cfg.measure_chi_ii) j["chi_II"] = rec.chi_ii;
    if (cfg.measure_negativity) {
        nlohmann::json arr = nlohmann::json::array();
        for (size_t k = 0; k < rec.negativity.size(); k++) {
            arr.push_back({k, rec.negativity[k]});
        }
        j["negativity_by_kA"] = std::move(arr);
    }
    if (cfg.measure_logicals) j["p_logical_dead"] = rec.logical_dead;
    if (cfg.measure_symmetry) {
        j["O1"] = rec.sym.o1;
        j["O2"] = rec.sym.o2;
        j["D1"] = rec.sym.d1;
        j["D2"] = rec.sym.d2;
    }
    return j.dump();
}

}  // namespace

const PointData* EnsembleDataset::find(uint32_t lx, uint32_t ly, double r) const {
    for (const PointData& p : points) {
        if (p.lx == lx && p.ly == ly && p.r == r) return &p;
    }
    return nullptr;
}

double calibrate_negativity_offset(const TorusLattice& lat) {
    MixedStabilizerState st = lat.toric_code_state(false);
    apply_maximal(st, lat);
    std::vector<double> prof = negativity_profile(st, lat);
    if (prof.size() < 2) throw std::invalid_argument("lattice too small to calibrate negativity");
    double c = prof[1] - 3.0;
    for (size_t k = 1; k < prof.size(); k++) {
        if (prof[k] != 3.0 * static_cast<double>(k) + c) {
            throw std::runtime_error("fully dephased negativity profile is not slope-3 linear");
        }
    }
    return c;
}

double delta0_negativity(const PointData& point, double offset) {
    if (point.negativity.size() < 2) throw std::invalid_argument("no negativity data beyond k_A=0");
    double sum = 0.0;
    for (size_t k = 1; k < point.negativity.size(); k++) {
        double d = point.negativity[k].mean() - (3.0 * static_cast<double>(k) + offset);
        sum += d * d;
    }
    return sum;
}

double rescaled_variance(const PointData& point) {
    double a = static_cast<double>(point.lx) * (static_cast<double>(point.ly) - 3.0);
    return a * point.chi_ii.variance();
}

double rescaled_variance_error(const PointData& point) {
    double a = static_cast<double>(point.lx) * (static_cast<double>(point.ly) - 3.0);
    return a * std::sqrt(point.chi_ii.variance_of_variance());
}

EnsembleDataset run_sweep(const RunConfig& config) {
    check_config(config);
    EnsembleDataset data;
    data.config = config;

    std::ofstream traj;
    if (!config.output_dir.empty()) {
        std::filesystem::create_directories(config.output_dir);
        std::filesystem::path dir(config.output_dir);
        std::ofstream cfg(dir / "config.json");
        if (!cfg) throw std::runtime_error("cannot write " + (dir / "config.json").string());
        cfg << run_config_to_json(config) << "\n";
        traj.open(dir / "trajectories.jsonl", std::ios::trunc);
        if (!traj) throw std::runtime_error("cannot write " + (dir / "trajectories.jsonl").string());
    }

    uint32_t workers = config.threads == 0 ? 1 : config.threads;
    for (uint32_t si = 0; si < config.sizes.size(); si++) {
        const SizeSpec& size = config.sizes[si];
        TorusLattice lat(size.lx, size.ly);
        // Constructor validation is quadratic in generator count; build the
        // initial state once per size and copy it per trajectory.
        const MixedStabilizerState initial = lat.toric_code_state(config.initial_pure);
        data.negativity_offsets.push_back(config.measure_negativity
                                              ? calibrate_negativity_offset(lat)
                                              : std::numeric_limits<double>::quiet_NaN());
        for (uint32_t ri = 0; ri < config.r_grid.size(); ri++) {
            double r = config.r_grid[ri];
            std::vector<TrajectoryRecord> records(config.samples);
            auto work = [&](uint32_t first) {
                for (uint64_t s = first; s < config.samples; s += workers) {
                    records[s] = run_trajectory(config, lat, initial, si, ri,
                                                static_cast<uint32_t>(s), r);
                }
            };
            if (workers == 1) {
                work(0);
            } else {
                std::vector<std::thread> pool;
                pool.reserve(workers);
                for (uint32_t t = 0; t < workers; t++) pool.emplace_back(work, t);
                for (std::thread& t : pool) t.join();
            }

            PointData pt;
            pt.lx = size.lx;
            pt.ly = size.ly;
            pt.r = r;
            pt.samples = config.samples;
            if (config.measure_chi_ii) pt.chi_ii_samples.reserve(config.samples);
            for (uint64_t s = 0; s < config.samples; s++) {
                const TrajectoryRecord& rec = records[s];
                if (config.measure_chi_i) {
                    pt.chi_i.add(rec.chi_i);
                    pt.minus_anomalies += rec.minus_count;
                }
                if (config.measure_chi_ii) {
                    pt.chi_ii.add(rec.chi_ii);
                    pt.chi_ii_samples.push_back(rec.chi_ii);
                }
                if (config.measure_negativity) {
                    pt.negativity.resize(rec.negativity.size());
                    for (size_t k = 0; k < rec.negativity.size(); k++) {
                        pt.negativity[k].add(rec.negativity[k]);
                    }
                }
                if (config.measure_logicals) {
                    pt.logical_dead.resize(rec.logical_dead.size());
                    for (size_t i = 0; i < rec.logical_dead.size(); i++) {
                        pt.logical_dead[i].add(rec.logical_dead[i]);
                    }
                }
                if (config.measure_symmetry) {
                    pt.o1.add(rec.sym.o1);
                    pt.o2.add(rec.sym.o2);
                    pt.d1.add(rec.sym.d1);
                    pt.d2.add(rec.sym.d2);
                }
                if (traj.is_open()) {
                    traj << trajectory_json(config, size, r, static_cast<uint32_t>(s), rec)
                         << "\n";
                }
            }
            data.points.push_back(std::move(pt));
        }
    }
    if (traj.is_open()) {
        traj.flush();
        if (!traj) throw std::runtime_error("failed writing trajectories.jsonl");
    }
    if (!config.output_dir.empty()) {
        write_summary_csv(data,
                          (std::filesystem::path(config.output_dir) / "summary.csv").string());
    }
    return data;
}

std::vector<SummaryRow> summarize(const EnsembleDataset& data) {
    std::vector<SummaryRow> rows;
    auto push = [&](const PointData& pt, const std::string& name, double mean, double var,
                    double se, uint64_t n) {
        rows.push_back({pt.lx, pt.ly, pt.r, name, mean, var, se, n});
    };
    auto push_acc = [&](const PointData& pt, const std::string& name,
                        const MomentAccumulator& acc) {
        push(pt, name, acc.mean(), acc.variance(), acc.stderr_of_mean(), acc.count());
    };
    for (size_t pi = 0; pi < data.points.size(); pi++) {
        const PointData& pt = data.points[pi];
        const RunConfig& cfg = data.config;
        if (cfg.measure_chi_i) {
            push_acc(pt, "chi_I", pt.chi_i);
            push(pt, "minus_anomalies", static_cast<double>(pt.minus_anomalies), 0.0, 0.0,
                 pt.samples);
        }
        if (cfg.measure_chi_ii) {
            push_acc(pt, "chi_II", pt.chi_ii);
            double f_var = rescaled_variance_error(pt);
            push(pt, "F", rescaled_variance(pt), f_var * f_var, f_var, pt.samples);
        }
        if (cfg.measure_negativity) {
            for (size_t k = 0; k < pt.negativity.size(); k++) {
                push_acc(pt, "negativity_kA" + std::to_string(k), pt.negativity[k]);
            }
            size_t si = pi / data.config.r_grid.size();
            double offset = data.negativity_offsets.at(si);
            push(pt, "delta0_NA", delta0_negativity(pt, offset), 0.0, 0.0, pt.samples);
        }
        if (cfg.measure_logicals) {
            for (size_t i = 0; i < pt.logical_dead.size(); i++) {
                push_acc(pt, "logical_dead_" + std::to_string(i), pt.logical_dead[i]);
            }
        }
        if (cfg.measure_symmetry) {
            push_acc(pt, "O1", pt.o1);
            push_acc(pt, "O2", pt.o2);
            push_acc(pt, "D1", pt.d1);
            push_acc(pt, "D2", pt.d2);
        }
    }
    return rows;
}

void write_summary_csv(const EnsembleDataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "Lx,Ly,r,observable,mean,var,stderr,n\n";
    for (const SummaryRow& row : summarize(data)) {
        out << row.lx << ',' << row.ly << ',' << num(row.r) << ',' << row.observable << ','
            << num(row.mean) << ',' << num(row.var) << ',' << num(row.std_error) << ',' << row.n
            << "\n";
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty summary: " + path);
    if (line != "Lx,Ly,r,observable,mean,var,stderr,n") {
        throw std::runtime_error("unrecognized summary header in " + path);
    }
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw std::runtime_error("malformed summary row: " + line);
        SummaryRow row;
        row.lx = static_cast<uint32_t>(std::stoul(fields[0]));
        row.ly = static_cast<uint32_t>(std::stoul(fields[1]));
        row.r = std::stod(fields[2]);
        row.observable = fields[3];
        row.mean = std::stod(fields[4]);
        row.var = std::stod(fields[5]);
        row.std_error = std::stod(fields[6]);
        row.n = std::stoull(fields[7]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string emit_plot_csv(const std::vector<SummaryRow>& rows, const std::string& figure_id) {
    std::string out;
    size_t matched = 0;
    if (figure_id == "fig2c") {
        out = "r,delta0_NA,Lx\n";
        for (const SummaryRow& row : rows) {
            if (row.observable != "delta0_NA") continue;
            out += num(row.r) + "," + num(row.mean) + "," + std::to_string(row.lx) + "\n";
            matched++;
        }
    } else if (figure_id == "fig3b") {
        out = "r,mean_chiII,stderr,Lx,Ly\n";
        for (const SummaryRow& row : rows) {
            if (row.observable != "chi_II") continue;
            out += num(row.r) + "," + num(row.mean) + "," + num(row.std_error) + "," +
                   std::to_string(row.lx) + "," + std::to_string(row.ly) + "\n";
            matched++;
        }
    } else if (figure_id == "fig4b") {
        out = "r,F,Lx\n";
        for (const SummaryRow& row : rows) {
            if (row.observable != "F") continue;
            out += num(row.r) + "," + num(row.mean) + "," + std::to_string(row.lx) + "\n";
            matched++;
        }
    } else {
        throw std::invalid_argument("unknown figure id: " + figure_id);
    }
    if (matched == 0) throw std::runtime_error("no data for figure " + figure_id);
    return out;
}

RunConfig run_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    RunConfig c;
    c.measure_chi_ii = false;  // defaults come from the observables list below
    if (j.contains("name")) c.name = j.at("name").get<std::string>();
    if (j.contains("sizes")) {
        c.sizes.clear();
        for (const auto& s : j.at("sizes")) {
            if (!s.is_array() || s.size() != 2) {
                throw std::invalid_argument("config: sizes entries must be [Lx, Ly]");
            }
            c.sizes.push_back({s.at(0).get<uint32_t>(), s.at(1).get<uint32_t>()});
        }
    }
    if (j.contains("r_grid")) c.r_grid = j.at("r_grid").get<std::vector<double>>();
    if (j.contains("samples")) c.samples = j.at("samples").get<uint64_t>();
    if (j.contains("seed")) {
        c.master_seed = j.at("seed").get<uint64_t>();
        c.seed_in_file = true;
    }
    if (j.contains("initial")) {
        std::string v = j.at("initial").get<std::string>();
        if (v == "pure") {
            c.initial_pure = true;
        } else if (v == "mixed") {
            c.initial_pure = false;
        } else {
            throw std::invalid_argument("config: initial must be \"pure\" or \"mixed\"");
        }
    }
    if (j.contains("observables")) {
        for (const auto& o : j.at("observables")) {
            std::string v = o.get<std::string>();
            if (v == "chi_I") {
                c.measure_chi_i = true;
            } else if (v == "chi_II") {
                c.measure_chi_ii = true;
            } else if (v == "negativity") {
                c.measure_negativity = true;
            } else if (v == "logicals") {
                c.measure_logicals = true;
            } else if (v == "symmetry") {
                c.measure_symmetry = true;
            } else {
                throw std::invalid_argument("config: unknown observable " + v);
            }
        }
    } else {
        c.measure_chi_ii = true;
    }
    if (j.contains("chi_anchor_average")) {
        c.chi_anchor_average = j.at("chi_anchor_average").get<bool>();
    }
    if (j.contains("record_patterns")) c.record_patterns = j.at("record_patterns").get<bool>();
    if (j.contains("threads")) c.threads = j.at("threads").get<uint32_t>();
    if (j.contains("output")) c.output_dir = j.at("output").get<std::string>();
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return run_config_from_json(ss.str());
}

std::string run_config_to_json(const RunConfig& config) {
    nlohmann::json j;
    j["name"] = config.name;
    nlohmann::json sizes = nlohmann::json::array();
    for (const SizeSpec& s : config.sizes) sizes.push_back({s.lx, s.ly});
    j["sizes"] = std::move(sizes);
    j["r_grid"] = config.r_grid;
    j["samples"] = config.samples;
    j["seed"] = config.master_seed;
    j["initial"] = config.initial_pure ? "pure" : "mixed";
    nlohmann::json obs = nlohmann::json::array();
    if (config.measure_chi_i) obs.push_back("chi_I");
    if (config.measure_chi_ii) obs.push_back("chi_II");
    if (config.measure_negativity) obs.push_back("negativity");
    if (config.measure_logicals) obs.push_back("logicals");
    if (config.measure_symmetry) obs.push_back("symmetry");
    j["observables"] = std::move(obs);
    j["chi_anchor_average"] = config.chi_anchor_average;
    j["record_patterns"] = config.record_patterns;
    j["threads"] = config.threads;
    j["output"] = config.output_dir;
    j["seed_scheme"] =
        "per-trajectory splitmix64 stream seeded by an avalanche mix of "
        "(seed, size index, r index, sample index)";
    return j.dump(2);
}

}  // namespace toricsim
