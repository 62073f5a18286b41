#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "toricsim/lattice.hpp"

using namespace toricsim;

TEST_CASE("construction limits") {
    CHECK_THROWS_AS(TorusLattice(2, 5), std::invalid_argument);
    CHECK_THROWS_AS(TorusLattice(5, 2), std::invalid_argument);
    CHECK_NOTHROW(TorusLattice(3, 3));
}

TEST_CASE("flat index round trip") {
    for (auto [lx, ly] : std::vector<std::pair<uint32_t, uint32_t>>{{3, 3}, {5, 7}, {6, 4}}) {
        TorusLattice lat(lx, ly);
        CHECK(lat.num_links() == 2 * lx * ly);
        for (uint32_t f = 0; f < lat.num_links(); f++) {
            LinkIndex l = lat.link(f);
            CHECK(lat.flat(l) == f);
            CHECK(l.x < lx);
            CHECK(l.y < ly);
        }
        CHECK(lat.horizontal(1, 2) == lat.flat({1, 2, LinkOrientation::Horizontal}));
        CHECK(lat.vertical(1, 2) == lat.flat({1, 2, LinkOrientation::Vertical}));
    }
}

TEST_CASE("shift is the half-step diagonal bijection") {
    TorusLattice lat(5, 4);
    // h(x,y) -> v(x+1,y-1), v(x,y) -> h(x,y), wrapped.
    CHECK(lat.shift_by_delta(lat.horizontal(1, 2)) == lat.vertical(2, 1));
    CHECK(lat.shift_by_delta(lat.horizontal(4, 0)) == lat.vertical(0, 3));
    CHECK(lat.shift_by_delta(lat.vertical(3, 2)) == lat.horizontal(3, 2));
    for (uint32_t f = 0; f < lat.num_links(); f++) {
        CHECK(lat.shift_inverse(lat.shift_by_delta(f)) == f);
        CHECK(lat.shift_by_delta(lat.shift_inverse(f)) == f);
    }
    // Bijectivity: the image covers every link exactly once.
    std::set<uint32_t> image;
    for (uint32_t f = 0; f < lat.num_links(); f++) image.insert(lat.shift_by_delta(f));
    CHECK(image.size() == lat.num_links());
}

TEST_CASE("every link joins two stars and two plaquettes") {
    TorusLattice lat(4, 5);
    std::vector<int> star_count(lat.num_links(), 0), plq_count(lat.num_links(), 0);
    for (uint32_t y = 0; y < lat.ly(); y++) {
        for (uint32_t x = 0; x < lat.lx(); x++) {
            std::vector<uint32_t> s = lat.star_links(x, y);
            std::vector<uint32_t> p = lat.plaquette_links(x, y);
            CHECK(s.size() == 4);
            CHECK(p.size() == 4);
            for (uint32_t f : s) star_count[f]++;
            for (uint32_t f : p) plq_count[f]++;
        }
    }
    for (uint32_t f = 0; f < lat.num_links(); f++) {
        CHECK(star_count[f] == 2);
        CHECK(plq_count[f] == 2);
    }
}

TEST_CASE("stars and plaquettes commute and multiply to identity") {
    TorusLattice lat(4, 4);
    PauliOperator all_stars = PauliOperator::identity(lat.num_links());
    PauliOperator all_plqs = PauliOperator::identity(lat.num_links());
    for (uint32_t y = 0; y < lat.ly(); y++) {
        for (uint32_t x = 0; x < lat.lx(); x++) {
            PauliOperator a = lat.star_x(x, y);
            PauliOperator b = lat.plaquette_z(x, y);
            CHECK(a.weight() == 4);
            CHECK(b.weight() == 4);
            CHECK(a.commutes_with(b));
            CHECK(a.commutes_with(lat.plaquette_z((x + 1) % lat.lx(), y)));
            all_stars *= a;
            all_plqs *= b;
        }
    }
    CHECK(all_stars == PauliOperator::identity(lat.num_links()));
    CHECK(all_plqs == PauliOperator::identity(lat.num_links()));
}

TEST_CASE("w operator composes star and shifted plaquette") {
    TorusLattice lat(4, 4);
    for (uint32_t y = 0; y < lat.ly(); y++) {
        for (uint32_t x = 0; x < lat.lx(); x++) {
            PauliOperator w = lat.w_operator(x, y);
            CHECK(w == lat.star_x(x, y) * lat.plaquette_z(x, (y + lat.ly() - 1) % lat.ly()));
            CHECK(w.is_hermitian());
            CHECK(w.weight() == 6);
        }
    }
}

TEST_CASE("square loop is a closed cycle of the right length") {
    TorusLattice lat(6, 6);
    for (uint32_t k = 1; k <= 4; k++) {
        std::vector<uint32_t> loop = lat.square_loop(k);
        CHECK(loop.size() == 4 * k);
        std::set<uint32_t> uniq(loop.begin(), loop.end());
        CHECK(uniq.size() == loop.size());
        // Closed: its Wilson operator commutes with every star.
        PauliOperator w = lat.wilson_z(loop);
        for (uint32_t y = 0; y < lat.ly(); y++) {
            for (uint32_t x = 0; x < lat.lx(); x++) {
                CHECK(w.commutes_with(lat.star_x(x, y)));
            }
        }
    }
    CHECK_THROWS_AS((void)lat.square_loop(0), std::invalid_argument);
    CHECK_THROWS_AS((void)lat.square_loop(6), std::invalid_argument);

    // Anchored variant is the translate of the origin loop.
    std::vector<uint32_t> at = lat.square_loop(2, 3, 4);
    CHECK(at.size() == 8);
    std::set<uint32_t> uniq(at.begin(), at.end());
    CHECK(uniq.size() == at.size());
}

TEST_CASE("open paths anticommute with exactly the endpoint stars") {
    TorusLattice lat(5, 5);
    std::vector<uint32_t> path = lat.vertical_path(2, 3);
    CHECK(path.size() == 3);
    PauliOperator w = lat.wilson_z(path);
    int anti = 0;
    for (uint32_t y = 0; y < lat.ly(); y++) {
        for (uint32_t x = 0; x < lat.lx(); x++) {
            if (!w.commutes_with(lat.star_x(x, y))) {
                anti++;
                CHECK(x == 2);
                CHECK((y == 0 || y == 3));
            }
        }
    }
    CHECK(anti == 2);
}

TEST_CASE("dual loops commute with plaquettes") {
    TorusLattice lat(6, 6);
    for (const auto& loop : {lat.dual_square_loop(1), lat.dual_square_loop(2), lat.dual_loop_x(0),
                             lat.dual_loop_y(1)}) {
        PauliOperator t = lat.thooft_x(loop);
        for (uint32_t y = 0; y < lat.ly(); y++) {
            for (uint32_t x = 0; x < lat.lx(); x++) {
                CHECK(t.commutes_with(lat.plaquette_z(x, y)));
            }
        }
    }
}

TEST_CASE("contractible thooft loop equals the enclosed star product") {
    TorusLattice lat(6, 6);
    // dual_square_loop(k) encircles the k x k block of plaquettes at q(0,0),
    // so its crossed-link X product equals the product of the interior stars.
    PauliOperator t = lat.thooft_x(lat.dual_square_loop(2));
    PauliOperator stars = lat.star_x(1, 1) * lat.star_x(2, 1) * lat.star_x(1, 2) *
                          lat.star_x(2, 2);
    CHECK(t == stars);
}

TEST_CASE("zx string supports are the loop and its shift") {
    TorusLattice lat(5, 5);
    std::vector<uint32_t> loop = lat.square_loop(2);
    PauliOperator s = lat.zx_string(loop);
    std::set<uint32_t> zs(loop.begin(), loop.end());
    std::set<uint32_t> xs;
    for (uint32_t f : loop) xs.insert(lat.shift_by_delta(f));
    for (uint32_t q = 0; q < lat.num_links(); q++) {
        CHECK(s.z_bit(q) == (zs.count(q) > 0));
        CHECK(s.x_bit(q) == (xs.count(q) > 0));
    }
    CHECK(s.is_hermitian());

    PauliOperator s2 = lat.xz_string(loop);
    for (uint32_t q = 0; q < lat.num_links(); q++) {
        CHECK(s2.x_bit(q) == (zs.count(q) > 0));
        CHECK(s2.z_bit(q) == (xs.count(q) > 0));
    }
}

TEST_CASE("non-contractible loops wind once") {
    TorusLattice lat(4, 6);
    CHECK(lat.loop_x(2).size() == 4);
    CHECK(lat.loop_y(1).size() == 6);
    CHECK(lat.dual_loop_x(0).size() == 4);
    CHECK(lat.dual_loop_y(3).size() == 6);
    // Logical algebra: the x-winding Z loop crosses the y-winding X loop in
    // exactly one link, and is disjoint from the x-winding X loop.
    CHECK(!lat.wilson_z(lat.loop_x(0)).commutes_with(lat.x_logical_along_y()));
    CHECK(lat.wilson_z(lat.loop_x(0)).commutes_with(lat.x_logical_along_x()));
}

TEST_CASE("region links form the documented rectangle") {
    TorusLattice lat(8, 5);
    for (uint32_t k = 0; k <= 3; k++) {
        std::vector<uint32_t> region = lat.region_links(k);
        CHECK(region.size() == 10 * k + 2);
        std::set<uint32_t> uniq(region.begin(), region.end());
        CHECK(uniq.size() == region.size());
    }
    CHECK_THROWS_AS((void)lat.region_links(4), std::invalid_argument);
    TorusLattice thin(8, 3);
    CHECK_THROWS_AS((void)thin.region_links(1), std::invalid_argument);
}

TEST_CASE("dual vertical path crosses the horizontal links") {
    TorusLattice lat(5, 5);
    std::vector<uint32_t> path = lat.dual_vertical_path(1, 2);
    CHECK(path.size() == 2);
    for (uint32_t f : path) {
        CHECK(lat.link(f).o == LinkOrientation::Horizontal);
    }
}
