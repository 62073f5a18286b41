#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "toricsim/pauli.hpp"
#include "toricsim/stabilizer_state.hpp"

namespace toricsim {

enum class LinkOrientation : uint8_t { Horizontal = 0, Vertical = 1 };

// Link of the Lx x Ly square lattice on the torus ("v-lattice"). Horizontal
// link (x,y) joins vertices (x,y)-(x+1,y) and has midpoint (x+1/2, y);
// vertical link (x,y) joins (x,y)-(x,y+1) with midpoint (x, y+1/2).
struct LinkIndex {
    uint32_t x;
    uint32_t y;
    LinkOrientation o;
    bool operator==(const LinkIndex&) const = default;
};

// Periodic Lx x Ly lattice; one qubit per link, L = 2*Lx*Ly qubits total.
// Flat link index is 2*(y*Lx + x) + orientation. Plaquette q(x,y) is the unit
// square with corners (x,y) and (x+1,y+1); its center sits at vertex+
// (1/2,1/2). The half-step diagonal shift delta = (1/2,-1/2) maps link
// midpoints to link midpoints and is a bijection on links.
class TorusLattice {
  public:
    // Throws std::invalid_argument if either side is < 3.
    TorusLattice(uint32_t lx, uint32_t ly);

    uint32_t lx() const { return lx_; }
    uint32_t ly() const { return ly_; }
    uint32_t num_vertices() const { return lx_ * ly_; }
    uint32_t num_links() const { return 2 * lx_ * ly_; }

    uint32_t flat(LinkIndex l) const {
        return 2 * (l.y * lx_ + l.x) + static_cast<uint32_t>(l.o);
    }
    LinkIndex link(uint32_t flat) const {
        uint32_t cell = flat / 2;
        return {cell % lx_, cell / lx_, static_cast<LinkOrientation>(flat & 1)};
    }
    uint32_t horizontal(uint32_t x, uint32_t y) const { return 2 * (y * lx_ + x); }
    uint32_t vertical(uint32_t x, uint32_t y) const { return 2 * (y * lx_ + x) + 1; }

    // Midpoint translation by delta = (1/2,-1/2):
    //   h(x,y) -> v(x+1, y-1),   v(x,y) -> h(x,y).
    LinkIndex shift_by_delta(LinkIndex l) const;
    uint32_t shift_by_delta(uint32_t flat) const { return this->flat(shift_by_delta(link(flat))); }

    // Inverse of shift_by_delta: v(x,y) -> h(x-1,y+1), h(x,y) -> v(x,y).
    LinkIndex shift_inverse(LinkIndex l) const;
    uint32_t shift_inverse(uint32_t flat) const { return this->flat(shift_inverse(link(flat))); }

    // The four links incident on vertex (x,y) / bounding plaquette q(x,y).
    std::vector<uint32_t> star_links(uint32_t x, uint32_t y) const;
    std::vector<uint32_t> plaquette_links(uint32_t x, uint32_t y) const;

    PauliOperator star_x(uint32_t x, uint32_t y) const;       // A_v, X on star links
    PauliOperator plaquette_z(uint32_t x, uint32_t y) const;  // B_q, Z on plaquette links
    // W_v = A_v * B_{q(x,y-1)}: the plaquette whose center is vertex+delta.
    // Weight-6 Hermitian composite with two Y sites.
    PauliOperator w_operator(uint32_t x, uint32_t y) const;

    // Boundary of the k x k square anchored at vertex (0,0), in cyclic path
    // order; 4k links. Requires 1 <= k <= min(lx,ly)-1.
    std::vector<uint32_t> square_loop(uint32_t k) const;
    // Same boundary anchored at vertex (x0,y0), wrapped periodically.
    std::vector<uint32_t> square_loop(uint32_t k, uint32_t x0, uint32_t y0) const;
    // Crossed links of the closed dual path around the k x k block of
    // plaquettes anchored at q(0,0), cyclic order. k=1 circles vertex (1,1).
    std::vector<uint32_t> dual_square_loop(uint32_t k) const;

    // v(ix,0), ..., v(ix,n-1): joins vertex (ix,0) to (ix,n). 1 <= n < ly.
    std::vector<uint32_t> vertical_path(uint32_t ix, uint32_t n) const;
    // Crossed links h(qx,1..n) of the dual path q(qx,0) -> q(qx,n). 1 <= n < ly.
    std::vector<uint32_t> dual_vertical_path(uint32_t qx, uint32_t n) const;

    // Non-contractible loops. Primal loops live on the v-lattice (link sets of
    // closed paths), dual loops are the crossed-link sets of closed q-lattice
    // paths.
    std::vector<uint32_t> loop_x(uint32_t y) const;       // h(0..lx-1, y)
    std::vector<uint32_t> loop_y(uint32_t x) const;       // v(x, 0..ly-1)
    std::vector<uint32_t> dual_loop_x(uint32_t y) const;  // v(0..lx-1, y) crossed
    std::vector<uint32_t> dual_loop_y(uint32_t x) const;  // h(x, 0..ly-1) crossed

    // Operator builders over an ordered link set; products are taken in the
    // given order, phases exact.
    PauliOperator wilson_z(std::span<const uint32_t> links) const;  // prod Z_l
    PauliOperator thooft_x(std::span<const uint32_t> links) const;  // prod X_l
    PauliOperator zx_string(std::span<const uint32_t> links) const;  // prod Z_l X_{l+delta}
    PauliOperator xz_string(std::span<const uint32_t> links) const;  // prod X_l Z_{l+delta}

    // X-logicals: 't Hooft loops winding the torus, X on dual_loop_x(0) /
    // dual_loop_y(0).
    PauliOperator x_logical_along_x() const;
    PauliOperator x_logical_along_y() const;

    // Links whose midpoints (mx,my) satisfy 0 <= mx <= 2k and 0 <= my <= 2;
    // the 2k x 2 rectangle anchored at vertex (0,0), 10k+2 links for k >= 1.
    // Requires 2k <= lx-2 and ly >= 4.
    std::vector<uint32_t> region_links(uint32_t k) const;

    // Toric-code stabilizer state. Generators: {A_v : v != (0,0)} and
    // {B_q : q != q(0,0)}; with_logicals additionally stabilizes both
    // X-logicals (k = L, pure state) and registers them for death tracking.
    MixedStabilizerState toric_code_state(bool with_logicals) const;

  private:
    uint32_t wrap_x(int64_t x) const { return static_cast<uint32_t>(((x % lx_) + lx_) % lx_); }
    uint32_t wrap_y(int64_t y) const { return static_cast<uint32_t>(((y % ly_) + ly_) % ly_); }

    uint32_t lx_, ly_;
};

}  // namespace toricsim
