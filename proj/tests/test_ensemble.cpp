#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "toricsim/ensemble.hpp"
#include "toricsim/lattice.hpp"
#include "toricsim/rng.hpp"

using namespace toricsim;

namespace {

struct TwoPass {
    uint64_t n = 0;
    double mean = 0.0;
    double var = 0.0;
    double sem = 0.0;
    double vov = 0.0;
};

// Reference moments computed naively in two passes.
TwoPass two_pass(const std::vector<double>& xs) {
    TwoPass out;
    out.n = xs.size();
    if (out.n == 0) return out;
    double sum = 0;
    for (double x : xs) sum += x;
    out.mean = sum / static_cast<double>(out.n);
    if (out.n < 2) return out;
    double m2 = 0, m4 = 0;
    for (double x : xs) {
        double d = x - out.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    double n = static_cast<double>(out.n);
    out.var = m2 / (n - 1.0);
    out.sem = std::sqrt(out.var / n);
    double v = (m4 / n - (n - 3.0) / (n - 1.0) * out.var * out.var) / n;
    out.vov = v > 0.0 ? v : 0.0;
    return out;
}

MomentAccumulator accumulate(const std::vector<double>& xs) {
    MomentAccumulator acc;
    for (double x : xs) acc.add(x);
    return acc;
}

void check_against(const MomentAccumulator& acc, const TwoPass& ref) {
    CHECK(acc.count() == ref.n);
    CHECK(acc.mean() == doctest::Approx(ref.mean).epsilon(1e-9));
    CHECK(acc.variance() == doctest::Approx(ref.var).epsilon(1e-9));
    CHECK(acc.stderr_of_mean() == doctest::Approx(ref.sem).epsilon(1e-9));
    CHECK(acc.variance_of_variance() == doctest::Approx(ref.vov).epsilon(1e-8));
}

std::filesystem::path fresh_dir(const std::string& tag) {
    std::filesystem::path p = std::filesystem::temp_directory_path() / ("toricsim_test_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig small_config() {
    RunConfig c;
    c.name = "unit";
    c.sizes = {{6, 6}};
    c.r_grid = {0.0, 1.0};
    c.samples = 12;
    c.master_seed = 7;
    c.measure_chi_i = true;
    c.measure_chi_ii = true;
    c.measure_negativity = true;
    c.measure_symmetry = true;
    c.record_patterns = true;
    c.threads = 1;
    return c;
}

}  // namespace

TEST_CASE("moment accumulator matches two-pass moments") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(-3.0, 5.0);

    SUBCASE("uniform data") {
        std::vector<double> xs;
        for (int i = 0; i < 1000; i++) xs.push_back(u(rng));
        check_against(accumulate(xs), two_pass(xs));
    }
    SUBCASE("constant data has zero spread") {
        std::vector<double> xs(50, 2.5);
        MomentAccumulator acc = accumulate(xs);
        CHECK(acc.mean() == doctest::Approx(2.5));
        CHECK(acc.variance() == doctest::Approx(0.0));
        CHECK(acc.variance_of_variance() == doctest::Approx(0.0));
    }
    SUBCASE("empty and single-sample edges") {
        MomentAccumulator acc;
        CHECK(acc.count() == 0);
        CHECK(acc.variance() == 0.0);
        CHECK(acc.stderr_of_mean() == 0.0);
        acc.add(4.0);
        CHECK(acc.mean() == doctest::Approx(4.0));
        CHECK(acc.variance() == 0.0);
        CHECK(acc.variance_of_variance() == 0.0);
    }
    SUBCASE("binary data") {
        std::vector<double> xs;
        for (int i = 0; i < 400; i++) xs.push_back((rng() & 1) ? 1.0 : 0.0);
        check_against(accumulate(xs), two_pass(xs));
    }
}

TEST_CASE("merging accumulators equals accumulating the concatenation") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> xs;
    for (int i = 0; i < 777; i++) xs.push_back(u(rng));
    TwoPass ref = two_pass(xs);

    for (size_t split : {size_t{0}, size_t{1}, size_t{137}, size_t{400}, size_t{776}, xs.size()}) {
        MomentAccumulator a = accumulate({xs.begin(), xs.begin() + split});
        MomentAccumulator b = accumulate({xs.begin() + split, xs.end()});
        a.merge(b);
        check_against(a, ref);
    }
}

TEST_CASE("variance of variance tracks the gaussian law") {
    // For normal data Var[s^2] = 2 sigma^4 / (n-1); the estimator should land
    // within a factor of two at this sample size.
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g(1.0, 2.0);
    MomentAccumulator acc;
    int n = 20000;
    for (int i = 0; i < n; i++) acc.add(g(rng));
    double want = 2.0 * 16.0 / static_cast<double>(n - 1);
    CHECK(acc.variance() == doctest::Approx(4.0).epsilon(0.1));
    CHECK(acc.variance_of_variance() > 0.5 * want);
    CHECK(acc.variance_of_variance() < 2.0 * want);
}

TEST_CASE("run config json round trip") {
    RunConfig c;
    c.name = "roundtrip";
    c.sizes = {{8, 8}, {12, 6}};
    c.r_grid = {0.0, 0.25, 0.5};
    c.samples = 77;
    c.master_seed = 123456789;
    c.initial_pure = true;
    c.measure_chi_i = true;
    c.measure_chi_ii = true;
    c.measure_negativity = false;
    c.measure_logicals = true;
    c.measure_symmetry = false;
    c.chi_anchor_average = true;
    c.record_patterns = false;
    c.threads = 4;
    c.output_dir = "runs/somewhere";

    RunConfig p = run_config_from_json(run_config_to_json(c));
    CHECK(p.name == c.name);
    REQUIRE(p.sizes.size() == 2);
    CHECK(p.sizes[1].lx == 12);
    CHECK(p.sizes[1].ly == 6);
    CHECK(p.r_grid == c.r_grid);
    CHECK(p.samples == c.samples);
    CHECK(p.master_seed == c.master_seed);
    CHECK(p.seed_in_file);  // serialized configs always carry their seed
    CHECK(p.initial_pure == c.initial_pure);
    CHECK(p.measure_chi_i == c.measure_chi_i);
    CHECK(p.measure_chi_ii == c.measure_chi_ii);
    CHECK(p.measure_negativity == c.measure_negativity);
    CHECK(p.measure_logicals == c.measure_logicals);
    CHECK(p.measure_symmetry == c.measure_symmetry);
    CHECK(p.chi_anchor_average == c.chi_anchor_average);
    CHECK(p.record_patterns == c.record_patterns);
    CHECK(p.threads == c.threads);
    CHECK(p.output_dir == c.output_dir);
}

TEST_CASE("config parsing and validation reject bad input") {
    CHECK_THROWS_AS(run_config_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(run_config_from_json(R"({"sizes": [[4]]})"), std::invalid_argument);
    CHECK_THROWS_AS(run_config_from_json(R"({"initial": "banana"})"), std::invalid_argument);
    CHECK_THROWS_AS(run_config_from_json(R"({"observables": ["banana"]})"), std::invalid_argument);

    // Semantic checks fire when the sweep starts.
    RunConfig c = small_config();
    c.r_grid = {0.5, 1.5};
    CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);

    c = small_config();
    c.samples = 0;
    CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);

    c = small_config();
    c.sizes = {{2, 6}};
    CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);

    c = small_config();
    c.sizes = {{8, 3}};  // chi_II needs Ly >= 4
    CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);

    c = small_config();
    c.r_grid = {};
    CHECK_THROWS_AS(run_sweep(c), std::invalid_argument);
}

TEST_CASE("sweep endpoints reproduce the exact phase values") {
    RunConfig c = small_config();
    EnsembleDataset data = run_sweep(c);
    REQUIRE(data.points.size() == 2);
    REQUIRE(data.negativity_offsets.size() == 1);
    double offset = data.negativity_offsets[0];
    CHECK(offset == doctest::Approx(2.0));

    const PointData* clean = data.find(6, 6, 0.0);
    const PointData* full = data.find(6, 6, 1.0);
    REQUIRE(clean != nullptr);
    REQUIRE(full != nullptr);
    CHECK(data.find(7, 7, 0.0) == nullptr);

    CHECK(clean->chi_i.mean() == doctest::Approx(1.0));
    CHECK(clean->chi_i.variance() == doctest::Approx(0.0));
    CHECK(clean->chi_ii.mean() == doctest::Approx(0.0));
    CHECK(clean->minus_anomalies == 0);
    CHECK(clean->o1.mean() == doctest::Approx(1.0));
    CHECK(clean->o2.mean() == doctest::Approx(1.0));
    CHECK(clean->d1.mean() == doctest::Approx(0.0));
    CHECK(clean->d2.mean() == doctest::Approx(0.0));

    CHECK(full->chi_i.mean() == doctest::Approx(0.0));
    CHECK(full->chi_ii.mean() == doctest::Approx(1.0));
    CHECK(full->chi_ii.variance() == doctest::Approx(0.0));
    CHECK(full->minus_anomalies == 0);
    CHECK(full->o1.mean() == doctest::Approx(0.0));
    CHECK(full->o2.mean() == doctest::Approx(1.0));
    CHECK(full->d1.mean() == doctest::Approx(0.0));
    CHECK(full->d2.mean() == doctest::Approx(0.0));

    CHECK(full->chi_ii_samples.size() == c.samples);
    REQUIRE(full->negativity.size() == 3);  // k_A = 0..(6-2)/2
    for (size_t k = 1; k < full->negativity.size(); k++) {
        CHECK(full->negativity[k].mean() ==
              doctest::Approx(3.0 * static_cast<double>(k) + offset));
        CHECK(full->negativity[k].variance() == doctest::Approx(0.0));
    }
    CHECK(delta0_negativity(*full, offset) == doctest::Approx(0.0));
    CHECK(rescaled_variance(*full) == doctest::Approx(0.0));
}

TEST_CASE("tracked logicals die exactly at full decoherence") {
    RunConfig c;
    c.sizes = {{6, 6}};
    c.r_grid = {0.0, 1.0};
    c.samples = 5;
    c.master_seed = 3;
    c.initial_pure = true;
    c.measure_chi_ii = false;
    c.measure_logicals = true;
    c.record_patterns = false;
    EnsembleDataset data = run_sweep(c);

    const PointData* clean = data.find(6, 6, 0.0);
    const PointData* full = data.find(6, 6, 1.0);
    REQUIRE(clean != nullptr);
    REQUIRE(full != nullptr);
    REQUIRE(clean->logical_dead.size() == 2);
    for (const auto& acc : clean->logical_dead) CHECK(acc.mean() == doctest::Approx(0.0));
    for (const auto& acc : full->logical_dead) CHECK(acc.mean() == doctest::Approx(1.0));
}

TEST_CASE("loop order parameter mean follows the avoidance law") {
    // E[C_I(k)] = (1-r)^{4k}: the loop survives iff none of its 4k dangerous
    // links decohere. chi_I averages over k = 1..min(L)-2.
    RunConfig c;
    c.sizes = {{8, 8}};
    c.r_grid = {0.2};
    c.samples = 300;
    c.master_seed = 11;
    c.measure_chi_i = true;
    c.measure_chi_ii = false;
    c.record_patterns = false;
    EnsembleDataset data = run_sweep(c);
    const PointData* pt = data.find(8, 8, 0.2);
    REQUIRE(pt != nullptr);

    double expect = 0.0;
    for (int k = 1; k <= 6; k++) expect += std::pow(0.8, 4.0 * k);
    expect /= 6.0;
    CHECK(std::abs(pt->chi_i.mean() - expect) < 4.0 * pt->chi_i.stderr_of_mean() + 1e-9);
}

TEST_CASE("sweeps are deterministic in the seed and sensitive to it") {
    RunConfig c;
    c.sizes = {{6, 6}};
    c.r_grid = {0.5};
    c.samples = 40;
    c.master_seed = 42;
    c.record_patterns = false;
    EnsembleDataset a = run_sweep(c);
    EnsembleDataset b = run_sweep(c);
    CHECK(a.points[0].chi_ii.mean() == b.points[0].chi_ii.mean());
    CHECK(a.points[0].chi_ii.variance() == b.points[0].chi_ii.variance());
    CHECK(a.points[0].chi_ii_samples == b.points[0].chi_ii_samples);

    c.master_seed = 43;
    EnsembleDataset d = run_sweep(c);
    CHECK(d.points[0].chi_ii_samples != a.points[0].chi_ii_samples);
}

TEST_CASE("thread count never changes the written bytes") {
    RunConfig c = small_config();
    c.r_grid = {0.3, 0.6};
    c.samples = 30;
    c.master_seed = 2718;

    std::filesystem::path dir1 = fresh_dir("threads1");
    std::filesystem::path dir3 = fresh_dir("threads3");
    c.threads = 1;
    c.output_dir = dir1.string();
    run_sweep(c);
    c.threads = 3;
    c.output_dir = dir3.string();
    run_sweep(c);

    CHECK(slurp(dir1 / "trajectories.jsonl") == slurp(dir3 / "trajectories.jsonl"));
    CHECK(slurp(dir1 / "summary.csv") == slurp(dir3 / "summary.csv"));
    CHECK(std::filesystem::exists(dir1 / "config.json"));

    // Per-trajectory records carry the documented fields and seeds.
    std::ifstream traj(dir1 / "trajectories.jsonl");
    std::string line;
    uint64_t lines = 0, first_seed = 0;
    while (std::getline(traj, line)) {
        if (lines == 0) {
            nlohmann::json j = nlohmann::json::parse(line);
            CHECK(j.at("lx").get<uint32_t>() == 6);
            CHECK(j.at("ly").get<uint32_t>() == 6);
            CHECK(j.at("r").get<double>() == doctest::Approx(0.3));
            CHECK(j.at("sample").get<uint32_t>() == 0);
            first_seed = j.at("seed").get<uint64_t>();
            CHECK(j.contains("pattern"));
            CHECK(j.contains("chi_I"));
            CHECK(j.contains("chi_II"));
            CHECK(j.contains("negativity_by_kA"));
            CHECK(j.contains("O1"));
        }
        lines++;
    }
    CHECK(lines == 2 * 30);
    CHECK(first_seed == trajectory_seed(2718, 0, 0, 0));

    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir3);
}

TEST_CASE("summary csv round trips at full precision") {
    RunConfig c = small_config();
    c.r_grid = {0.5};
    c.samples = 15;
    EnsembleDataset data = run_sweep(c);
    std::vector<SummaryRow> rows = summarize(data);
    REQUIRE(!rows.empty());

    std::filesystem::path dir = fresh_dir("csv");
    std::filesystem::path csv = dir / "summary.csv";
    write_summary_csv(data, csv.string());

    std::vector<SummaryRow> back = read_summary_csv(csv.string());
    REQUIRE(back.size() == rows.size());
    for (size_t i = 0; i < rows.size(); i++) {
        CHECK(back[i].lx == rows[i].lx);
        CHECK(back[i].ly == rows[i].ly);
        CHECK(back[i].r == rows[i].r);
        CHECK(back[i].observable == rows[i].observable);
        CHECK(back[i].mean == rows[i].mean);
        CHECK(back[i].var == rows[i].var);
        CHECK(back[i].std_error == rows[i].std_error);
        CHECK(back[i].n == rows[i].n);
    }

    std::string text = slurp(csv);
    CHECK(text.rfind("Lx,Ly,r,observable,mean,var,stderr,n\n", 0) == 0);
    CHECK_THROWS_AS(read_summary_csv((dir / "missing.csv").string()), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("hand-built point statistics") {
    PointData pt;
    pt.lx = 6;
    pt.ly = 6;
    pt.negativity.resize(3);
    for (int i = 0; i < 4; i++) pt.negativity[0].add(99.0);  // k_A = 0 is excluded
    for (int i = 0; i < 4; i++) pt.negativity[1].add(5.0);
    for (int i = 0; i < 4; i++) pt.negativity[2].add(8.0);
    CHECK(delta0_negativity(pt, 2.0) == doctest::Approx(0.0));
    CHECK(delta0_negativity(pt, 1.5) == doctest::Approx(0.5));

    for (double x : {0.0, 1.0, 0.0, 1.0}) pt.chi_ii.add(x);
    double a = 6.0 * (6.0 - 3.0);
    CHECK(rescaled_variance(pt) == doctest::Approx(a * pt.chi_ii.variance()));
    CHECK(rescaled_variance_error(pt) ==
          doctest::Approx(a * std::sqrt(pt.chi_ii.variance_of_variance())));

    PointData empty;
    CHECK_THROWS_AS(delta0_negativity(empty, 2.0), std::invalid_argument);
}

TEST_CASE("figure extraction from summary rows") {
    RunConfig c = small_config();
    c.r_grid = {0.2, 0.8};
    c.samples = 8;
    EnsembleDataset data = run_sweep(c);
    std::vector<SummaryRow> rows = summarize(data);

    std::string f3 = emit_plot_csv(rows, "fig3b");
    CHECK(f3.rfind("r,mean_chiII,stderr,Lx,Ly\n", 0) == 0);
    CHECK(std::count(f3.begin(), f3.end(), '\n') == 3);  // header + 2 points

    std::string f4 = emit_plot_csv(rows, "fig4b");
    CHECK(f4.rfind("r,F,Lx\n", 0) == 0);

    std::string f2 = emit_plot_csv(rows, "fig2c");
    CHECK(f2.rfind("r,delta0_NA,Lx\n", 0) == 0);

    CHECK_THROWS_AS(emit_plot_csv(rows, "fig9z"), std::invalid_argument);

    std::vector<SummaryRow> chi_only;
    for (const SummaryRow& row : rows) {
        if (row.observable == "chi_II") chi_only.push_back(row);
    }
    CHECK_THROWS_AS(emit_plot_csv(chi_only, "fig4b"), std::runtime_error);
}
