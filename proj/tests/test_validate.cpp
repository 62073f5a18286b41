#include <algorithm>
#include <set>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "toricsim/validate.hpp"

using namespace toricsim;

TEST_CASE("validation passes on the honest channel") {
    ValidationReport rep = run_validation();
    CHECK(rep.lx == 6);
    CHECK(rep.ly == 6);
    CHECK(rep.all_pass());
    CHECK(rep.cells.size() == 21);
    CHECK(!rep.info.empty());
    for (const ValidationCell& c : rep.cells) {
        CAPTURE(c.name);
        CHECK(c.pass);
        CHECK(!c.detail.empty());
    }

    std::set<std::string> names;
    for (const ValidationCell& c : rep.cells) names.insert(c.name);
    CHECK(names.count("tableI.rho_TC.strong") == 1);
    CHECK(names.count("tableI.channel.weak") == 1);
    CHECK(names.count("tableII.rho_D.chi_II") == 1);
    CHECK(names.count("appB.rho_TC.O1") == 1);
    CHECK(names.count("channel.kraus_weight2") == 1);
    CHECK(names.size() == rep.cells.size());  // no duplicate cell names
}

TEST_CASE("validation passes on a rectangular lattice") {
    ValidationReport rep = run_validation(8, 6);
    CHECK(rep.lx == 8);
    CHECK(rep.all_pass());
}

TEST_CASE("the corrupted pairing flips exactly the sensitive cells") {
    // corrupt_shift_kraus puts the X partner on the wrong diagonal, which makes
    // every Kraus commute with closed ZX loops. The cells that depend on that
    // anticommutation must flip, and nothing else may move.
    ValidationReport rep = run_validation(6, 6, corrupt_shift_kraus);
    CHECK_FALSE(rep.all_pass());

    std::set<std::string> failed;
    for (const ValidationCell& c : rep.cells) {
        if (!c.pass) failed.insert(c.name);
    }
    std::set<std::string> expected = {
        "tableI.channel.strong",
        "tableI.rho_D.strong",
        "tableII.rho_D.chi_II",
        "appB.rho_f.D2",
        "channel.kraus_commute_xz_loop",
        "channel.kraus_commute_xz_noncontractible",
    };
    CHECK(failed == expected);
}

TEST_CASE("report serialization carries every cell") {
    ValidationReport rep = run_validation();
    nlohmann::json j = nlohmann::json::parse(report_to_json(rep));
    CHECK(j.at("lx").get<uint32_t>() == rep.lx);
    CHECK(j.at("ly").get<uint32_t>() == rep.ly);
    CHECK(j.at("all_pass").get<bool>() == rep.all_pass());
    REQUIRE(j.at("cells").size() == rep.cells.size());
    for (size_t i = 0; i < rep.cells.size(); i++) {
        CHECK(j.at("cells").at(i).at("name").get<std::string>() == rep.cells[i].name);
        CHECK(j.at("cells").at(i).at("pass").get<bool>() == rep.cells[i].pass);
    }
    CHECK(j.at("info").size() == rep.info.size());
}

TEST_CASE("all_pass is the conjunction of the cells") {
    ValidationReport rep;
    CHECK(rep.all_pass());
    rep.cells.push_back({"a", true, ""});
    CHECK(rep.all_pass());
    rep.cells.push_back({"b", false, ""});
    CHECK_FALSE(rep.all_pass());
}
