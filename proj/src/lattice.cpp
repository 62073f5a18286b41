#include "toricsim/lattice.hpp"

#include <stdexcept>

namespace toricsim {

TorusLattice::TorusLattice(uint32_t lx, uint32_t ly) : lx_(lx), ly_(ly) {
    if (lx < 3 || ly < 3) throw std::invalid_argument("lattice too small (Lx or Ly < 3)");
}

LinkIndex TorusLattice::shift_by_delta(LinkIndex l) const {
    if (l.o == LinkOrientation::Horizontal) {
        // (x+1/2, y) + (1/2,-1/2) = (x+1, y-1/2)
        return {wrap_x(int64_t{l.x} + 1), wrap_y(int64_t{l.y} - 1), LinkOrientation::Vertical};
    }
    // (x, y+1/2) + (1/2,-1/2) = (x+1/2, y)
    return {l.x, l.y, LinkOrientation::Horizontal};
}

LinkIndex TorusLattice::shift_inverse(LinkIndex l) const {
    if (l.o == LinkOrientation::Vertical) {
        return {wrap_x(int64_t{l.x} - 1), wrap_y(int64_t{l.y} + 1), LinkOrientation::Horizontal};
    }
    return {l.x, l.y, LinkOrientation::Vertical};
}

std::vector<uint32_t> TorusLattice::star_links(uint32_t x, uint32_t y) const {
    return {
        horizontal(x, y),
        horizontal(wrap_x(int64_t{x} - 1), y),
        vertical(x, y),
        vertical(x, wrap_y(int64_t{y} - 1)),
    };
}

std::vector<uint32_t> TorusLattice::plaquette_links(uint32_t x, uint32_t y) const {
    return {
        horizontal(x, y),
        horizontal(x, wrap_y(int64_t{y} + 1)),
        vertical(x, y),
        vertical(wrap_x(int64_t{x} + 1), y),
    };
}

PauliOperator TorusLattice::star_x(uint32_t x, uint32_t y) const {
    PauliOperator p(num_links());
    for (uint32_t l : star_links(x, y)) p.set_x(l, true);
    return p;
}

PauliOperator TorusLattice::plaquette_z(uint32_t x, uint32_t y) const {
    PauliOperator p(num_links());
    for (uint32_t l : plaquette_links(x, y)) p.set_z(l, true);
    return p;
}

PauliOperator TorusLattice::w_operator(uint32_t x, uint32_t y) const {
    return star_x(x, y) * plaquette_z(x, wrap_y(int64_t{y} - 1));
}

std::vector<uint32_t> TorusLattice::square_loop(uint32_t k) const { return square_loop(k, 0, 0); }

std::vector<uint32_t> TorusLattice::square_loop(uint32_t k, uint32_t x0, uint32_t y0) const {
    if (k < 1 || k >= lx_ || k >= ly_) throw std::invalid_argument("square loop does not fit");
    if (x0 >= lx_ || y0 >= ly_) throw std::invalid_argument("square loop anchor out of range");
    auto h = [&](uint32_t x, uint32_t y) { return horizontal(wrap_x(x0 + x), wrap_y(y0 + y)); };
    auto v = [&](uint32_t x, uint32_t y) { return vertical(wrap_x(x0 + x), wrap_y(y0 + y)); };
    std::vector<uint32_t> links;
    links.reserve(4 * k);
    for (uint32_t x = 0; x < k; x++) links.push_back(h(x, 0));
    for (uint32_t y = 0; y < k; y++) links.push_back(v(k, y));
    for (uint32_t x = k; x-- > 0;) links.push_back(h(x, k));
    for (uint32_t y = k; y-- > 0;) links.push_back(v(0, y));
    return links;
}

std::vector<uint32_t> TorusLattice::dual_square_loop(uint32_t k) const {
    if (k < 1 || k + 1 >= lx_ || k + 1 >= ly_) throw std::invalid_argument("dual square loop does not fit");
    std::vector<uint32_t> links;
    links.reserve(4 * k);
    for (uint32_t x = 0; x < k; x++) links.push_back(vertical(x + 1, 0));
    for (uint32_t y = 0; y < k; y++) links.push_back(horizontal(k, y + 1));
    for (uint32_t x = k; x-- > 0;) links.push_back(vertical(x + 1, k));
    for (uint32_t y = k; y-- > 0;) links.push_back(horizontal(0, y + 1));
    return links;
}

std::vector<uint32_t> TorusLattice::vertical_path(uint32_t ix, uint32_t n) const {
    if (ix >= lx_ || n < 1 || n >= ly_) throw std::invalid_argument("vertical path does not fit");
    std::vector<uint32_t> links;
    links.reserve(n);
    for (uint32_t y = 0; y < n; y++) links.push_back(vertical(ix, y));
    return links;
}

std::vector<uint32_t> TorusLattice::dual_vertical_path(uint32_t qx, uint32_t n) const {
    if (qx >= lx_ || n < 1 || n >= ly_) throw std::invalid_argument("dual vertical path does not fit");
    std::vector<uint32_t> links;
    links.reserve(n);
    for (uint32_t y = 1; y <= n; y++) links.push_back(horizontal(qx, y));
    return links;
}

std::vector<uint32_t> TorusLattice::loop_x(uint32_t y) const {
    std::vector<uint32_t> links;
    for (uint32_t x = 0; x < lx_; x++) links.push_back(horizontal(x, y));
    return links;
}

std::vector<uint32_t> TorusLattice::loop_y(uint32_t x) const {
    std::vector<uint32_t> links;
    for (uint32_t y = 0; y < ly_; y++) links.push_back(vertical(x, y));
    return links;
}

std::vector<uint32_t> TorusLattice::dual_loop_x(uint32_t y) const {
    std::vector<uint32_t> links;
    for (uint32_t x = 0; x < lx_; x++) links.push_back(vertical(x, y));
    return links;
}

std::vector<uint32_t> TorusLattice::dual_loop_y(uint32_t x) const {
    std::vector<uint32_t> links;
    for (uint32_t y = 0; y < ly_; y++) links.push_back(horizontal(x, y));
    return links;
}

PauliOperator TorusLattice::wilson_z(std::span<const uint32_t> links) const {
    PauliOperator p(num_links());
    for (uint32_t l : links) p.set_z(l, true);
    return p;
}

PauliOperator TorusLattice::thooft_x(std::span<const uint32_t> links) const {
    PauliOperator p(num_links());
    for (uint32_t l : links) p.set_x(l, true);
    return p;
}

PauliOperator TorusLattice::zx_string(std::span<const uint32_t> links) const {
    PauliOperator p = PauliOperator::identity(num_links());
    for (uint32_t l : links) {
        PauliOperator f(num_links());
        f.set_z(l, true);
        f.set_x(shift_by_delta(l), true);
        p *= f;
    }
    return p;
}

PauliOperator TorusLattice::xz_string(std::span<const uint32_t> links) const {
    PauliOperator p = PauliOperator::identity(num_links());
    for (uint32_t l : links) {
        PauliOperator f(num_links());
        f.set_x(l, true);
        f.set_z(shift_by_delta(l), true);
        p *= f;
    }
    return p;
}

PauliOperator TorusLattice::x_logical_along_x() const { return thooft_x(dual_loop_x(0)); }
PauliOperator TorusLattice::x_logical_along_y() const { return thooft_x(dual_loop_y(0)); }

std::vector<uint32_t> TorusLattice::region_links(uint32_t k) const {
    if (2 * k > lx_ - 2) throw std::invalid_argument("region too wide for lattice");
    if (ly_ < 4) throw std::invalid_argument("region needs Ly >= 4");
    std::vector<uint32_t> links;
    // Horizontal midpoints (x+1/2, y): x+1/2 <= 2k, y <= 2.
    for (uint32_t y = 0; y <= 2; y++) {
        for (uint32_t x = 0; 2 * x + 1 <= 4 * k; x++) links.push_back(horizontal(x, y));
    }
    // Vertical midpoints (x, y+1/2): x <= 2k, y+1/2 <= 2.
    for (uint32_t y = 0; y <= 1; y++) {
        for (uint32_t x = 0; x <= 2 * k; x++) links.push_back(vertical(x, y));
    }
    return links;
}

MixedStabilizerState TorusLattice::toric_code_state(bool with_logicals) const {
    std::vector<PauliOperator> gens;
    gens.reserve(2 * num_vertices() - 2 + (with_logicals ? 2 : 0));
    for (uint32_t y = 0; y < ly_; y++) {
        for (uint32_t x = 0; x < lx_; x++) {
            if (x == 0 && y == 0) continue;
            gens.push_back(star_x(x, y));
        }
    }
    for (uint32_t y = 0; y < ly_; y++) {
        for (uint32_t x = 0; x < lx_; x++) {
            if (x == 0 && y == 0) continue;
            gens.push_back(plaquette_z(x, y));
        }
    }
    if (with_logicals) {
        gens.push_back(x_logical_along_x());
        gens.push_back(x_logical_along_y());
    }
    MixedStabilizerState state(num_links(), std::move(gens));
    if (with_logicals) {
        state.track_logical(x_logical_along_x());
        state.track_logical(x_logical_along_y());
    }
    return state;
}

}  // namespace toricsim
