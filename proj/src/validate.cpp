#include "toricsim/validate.hpp"

#include <cstdio>

#include "json.hpp"
#include "toricsim/ensemble.hpp"
#include "toricsim/observables.hpp"

namespace toricsim {

bool ValidationReport::all_pass() const {
    for (const ValidationCell& c : cells) {
        if (!c.pass) return false;
    }
    return true;
}

PauliOperator corrupt_shift_kraus(const TorusLattice& lat, uint32_t flat) {
    PauliOperator p(lat.num_links());
    p.set_z(flat, true);
    p.set_x(lat.shift_inverse(flat), true);
    return p;
}

namespace {

std::string first_noncommuting(const TorusLattice& lat, const KrausBuilder& kraus,
                               const PauliOperator& op, bool& found) {
    for (uint32_t f = 0; f < lat.num_links(); f++) {
        if (!kraus(lat, f).commutes_with(op)) {
            found = true;
            return "kraus at link " + std::to_string(f) + " anticommutes";
        }
    }
    found = false;
    return "all " + std::to_string(lat.num_links()) + " kraus commute";
}

}  // namespace

ValidationReport run_validation(uint32_t lx, uint32_t ly, const KrausBuilder& kraus) {
    TorusLattice lat(lx, ly);
    ValidationReport rep;
    rep.lx = lx;
    rep.ly = ly;
    auto cell = [&](std::string name, bool pass, std::string detail) {
        rep.cells.push_back({std::move(name), pass, std::move(detail)});
    };

    const MixedStabilizerState rho_tc = lat.toric_code_state(false);
    MixedStabilizerState rho_d = rho_tc;
    apply_maximal(rho_d, lat, kraus);

    PauliOperator zx_loop = lat.zx_string(lat.square_loop(2));

    // Symmetry table of the closed ZX loop: clean state strong and weak,
    // channel not strong but weak, fully dephased state not strong but weak.
    cell("tableI.rho_TC.strong", is_strong_symmetric(rho_tc, zx_loop),
         std::string("contains=") + to_string(rho_tc.contains(zx_loop)));
    cell("tableI.rho_TC.weak", is_weak_symmetric(rho_tc, zx_loop),
         "commutes with every generator");

    bool found = false;
    std::string detail = first_noncommuting(lat, kraus, zx_loop, found);
    cell("tableI.channel.strong", found, detail + " (an anticommuting kraus must exist)");

    bool weak_after_each = true;
    uint32_t bad_link = 0;
    for (uint32_t f = 0; f < lat.num_links(); f++) {
        MixedStabilizerState st = rho_tc;
        st.apply_dephasing(kraus(lat, f));
        if (!is_weak_symmetric(st, zx_loop)) {
            weak_after_each = false;
            bad_link = f;
            break;
        }
    }
    cell("tableI.channel.weak", weak_after_each,
         weak_after_each ? "state stays weak symmetric after dephasing any single link"
                         : "weak symmetry broken by link " + std::to_string(bad_link));

    cell("tableI.rho_D.strong", !is_strong_symmetric(rho_d, zx_loop),
         std::string("contains=") + to_string(rho_d.contains(zx_loop)) + " (must not be a member)");
    cell("tableI.rho_D.weak", is_weak_symmetric(rho_d, zx_loop), "commutes with every generator");

    // Order parameters at the two channel endpoints.
    uint64_t minus = 0;
    double ci_tc = chi_I(rho_tc, lat, false, &minus);
    double cii_tc = chi_II(rho_tc, lat);
    double ci_d = chi_I(rho_d, lat, false, &minus);
    double cii_d = chi_II(rho_d, lat);
    auto one_decimal = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    cell("tableII.rho_TC.chi_I", ci_tc == 1.0, "chi_I=" + one_decimal(ci_tc) + " expected 1");
    cell("tableII.rho_TC.chi_II", cii_tc == 0.0, "chi_II=" + one_decimal(cii_tc) + " expected 0");
    cell("tableII.rho_D.chi_I", ci_d == 0.0, "chi_I=" + one_decimal(ci_d) + " expected 0");
    cell("tableII.rho_D.chi_II", cii_d == 1.0, "chi_II=" + one_decimal(cii_d) + " expected 1");

    // Strong-symmetry order/disorder diagnostics on both states.
    SymmetryDiagnostics d_f = symmetry_diagnostics(rho_d, lat);
    SymmetryDiagnostics d_tc = symmetry_diagnostics(rho_tc, lat);
    auto diag = [&](const char* name, int got, int want) {
        cell(name, got == want,
             "value=" + std::to_string(got) + " expected " + std::to_string(want));
    };
    diag("appB.rho_f.O1", d_f.o1, 0);
    diag("appB.rho_f.O2", d_f.o2, 1);
    diag("appB.rho_f.D1", d_f.d1, 0);
    diag("appB.rho_f.D2", d_f.d2, 0);
    diag("appB.rho_TC.O1", d_tc.o1, 1);
    diag("appB.rho_TC.O2", d_tc.o2, 1);
    diag("appB.rho_TC.D1", d_tc.d1, 0);
    diag("appB.rho_TC.D2", d_tc.d2, 0);

    // Kraus geometry.
    bool weight_ok = true;
    for (uint32_t f = 0; f < lat.num_links() && weight_ok; f++) {
        PauliOperator k = kraus(lat, f);
        weight_ok = k.weight() == 2 && k.is_hermitian() && k.x().popcount() == 1 &&
                    k.z().popcount() == 1;
    }
    cell("channel.kraus_weight2", weight_ok, "each kraus is one Z and one X on distinct links");

    PauliOperator xz_loop = lat.xz_string(lat.dual_square_loop(2));
    detail = first_noncommuting(lat, kraus, xz_loop, found);
    cell("channel.kraus_commute_xz_loop", !found, detail + " (all must commute)");

    PauliOperator xz_nc_x = lat.xz_string(lat.dual_loop_x(0));
    PauliOperator xz_nc_y = lat.xz_string(lat.dual_loop_y(0));
    bool found_x = false, found_y = false;
    std::string dx = first_noncommuting(lat, kraus, xz_nc_x, found_x);
    std::string dy = first_noncommuting(lat, kraus, xz_nc_y, found_y);
    cell("channel.kraus_commute_xz_noncontractible", !found_x && !found_y,
         "x winding: " + dx + "; y winding: " + dy);

    // Computed facts the truth tables leave open.
    rep.info.push_back(std::string("contains(rho_f, xz loop winding x) = ") +
                       to_string(rho_d.contains(xz_nc_x)));
    rep.info.push_back(std::string("contains(rho_f, xz loop winding y) = ") +
                       to_string(rho_d.contains(xz_nc_y)));
    PauliOperator wilson_nc = lat.wilson_z(lat.loop_x(0));
    rep.info.push_back(std::string("contains(rho_TC, Z loop winding x) = ") +
                       to_string(rho_tc.contains(wilson_nc)));
    MixedStabilizerState rho_pure = lat.toric_code_state(true);
    rep.info.push_back(std::string("contains(rho_TC pure, Z loop winding x) = ") +
                       to_string(rho_pure.contains(wilson_nc)));
    rep.info.push_back("purity exponent rho_TC = " + std::to_string(rho_tc.purity_exponent()) +
                       ", rho_f = " + std::to_string(rho_d.purity_exponent()));
    if (lx >= 4 && ly >= 4) {
        double c = calibrate_negativity_offset(lat);
        char buf[80];
        std::snprintf(buf, sizeof(buf), "fully dephased negativity N_A(k_A) = 3 k_A + %g", c);
        rep.info.push_back(buf);
    }
    return rep;
}

std::string report_to_json(const ValidationReport& report) {
    nlohmann::json j;
    j["lx"] = report.lx;
    j["ly"] = report.ly;
    j["all_pass"] = report.all_pass();
    nlohmann::json cells = nlohmann::json::array();
    for (const ValidationCell& c : report.cells) {
        cells.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    j["cells"] = std::move(cells);
    j["info"] = report.info;
    return j.dump(2);
}

}  // namespace toricsim
