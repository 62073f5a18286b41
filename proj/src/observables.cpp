#include "toricsim/observables.hpp"

#include <stdexcept>

#include "toricsim/bitvec.hpp"

namespace toricsim {

int order_param_CI(const MixedStabilizerState& st, const PauliOperator& w, uint64_t* minus_count) {
    switch (st.contains(w)) {
        case Containment::PlusMember:
            return 1;
        case Containment::MinusMember:
            if (minus_count) ++*minus_count;
            return 0;
        default:
            return 0;
    }
}

int renyi2_correlator(const MixedStabilizerState& st, const PauliOperator& p) {
    return st.commutes_with_all(p) ? 1 : 0;
}

double chi_I(const MixedStabilizerState& st, const TorusLattice& lat, bool anchor_average,
             uint64_t* minus_count) {
    uint32_t n_loops = std::min(lat.lx(), lat.ly()) - 2;
    if (n_loops < 1) throw std::invalid_argument("lattice too small for chi_I");
    uint64_t sum = 0, count = 0;
    for (uint32_t k = 1; k <= n_loops; k++) {
        if (anchor_average) {
            for (uint32_t y0 = 0; y0 < lat.ly(); y0++) {
                for (uint32_t x0 = 0; x0 < lat.lx(); x0++) {
                    sum += order_param_CI(st, lat.wilson_z(lat.square_loop(k, x0, y0)), minus_count);
                    count++;
                }
            }
        } else {
            sum += order_param_CI(st, lat.wilson_z(lat.square_loop(k)), minus_count);
            count++;
        }
    }
    return static_cast<double>(sum) / static_cast<double>(count);
}

std::vector<std::vector<int>> chi_II_strings(const MixedStabilizerState& st,
                                             const TorusLattice& lat) {
    if (lat.ly() < 4) throw std::invalid_argument("lattice too small for chi_II");
    uint32_t max_len = lat.ly() - 3;
    std::vector<std::vector<int>> flags(lat.lx(), std::vector<int>(max_len, 1));
    std::vector<bool> bad(max_len + 1);
    for (uint32_t ix = 0; ix < lat.lx(); ix++) {
        bad.assign(max_len + 1, false);
        // String of length n has Z on v(ix,0..n-1) and X on h(ix,0..n-1), so its
        // anticommutation parity with g is a prefix sum over rows; one sweep per
        // generator covers every length at once.
        for (const PauliOperator& g : st.generators()) {
            bool par = false;
            for (uint32_t j = 0; j < max_len; j++) {
                par = par ^ g.x_bit(lat.vertical(ix, j)) ^ g.z_bit(lat.horizontal(ix, j));
                if (par) bad[j + 1] = true;
            }
        }
        for (uint32_t len = 1; len <= max_len; len++) {
            if (bad[len]) flags[ix][len - 1] = 0;
        }
    }
    return flags;
}

double chi_II(const MixedStabilizerState& st, const TorusLattice& lat) {
    std::vector<std::vector<int>> flags = chi_II_strings(st, lat);
    uint64_t sum = 0;
    uint64_t count = 0;
    for (const std::vector<int>& col : flags) {
        for (int f : col) {
            sum += f;
            count++;
        }
    }
    return static_cast<double>(sum) / static_cast<double>(count);
}

namespace {

// F2 rank by row elimination on bit-packed rows.
uint32_t bit_rank(std::vector<BitVec>& rows, uint32_t cols) {
    uint32_t rank = 0;
    for (uint32_t c = 0; c < cols && rank < rows.size(); c++) {
        uint32_t pivot = rank;
        while (pivot < rows.size() && !rows[pivot].get(c)) pivot++;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (uint32_t r = 0; r < rows.size(); r++) {
            if (r != rank && rows[r].get(c)) rows[r] ^= rows[rank];
        }
        rank++;
    }
    return rank;
}

}  // namespace

double negativity(const MixedStabilizerState& st, std::span<const uint32_t> region) {
    uint32_t m = st.num_generators();
    BitVec mask(st.num_qubits());
    for (uint32_t q : region) {
        if (q >= st.num_qubits()) throw std::out_of_range("region link outside lattice");
        mask.set(q, true);
    }
    std::vector<BitVec> xm, zm;
    xm.reserve(m);
    zm.reserve(m);
    for (const PauliOperator& g : st.generators()) {
        BitVec x(st.num_qubits()), z(st.num_qubits());
        auto xw = x.words(), zw = z.words();
        auto gx = g.x().words(), gz = g.z().words();
        auto mw = mask.words();
        for (size_t w = 0; w < mw.size(); w++) {
            xw[w] = gx[w] & mw[w];
            zw[w] = gz[w] & mw[w];
        }
        xm.push_back(std::move(x));
        zm.push_back(std::move(z));
    }
    std::vector<BitVec> j(m, BitVec(m));
    for (uint32_t a = 0; a < m; a++) {
        for (uint32_t b = a + 1; b < m; b++) {
            uint64_t anti =
                (BitVec::and_popcount(xm[a], zm[b]) + BitVec::and_popcount(zm[a], xm[b])) & 1;
            if (anti) {
                j[a].set(b, true);
                j[b].set(a, true);
            }
        }
    }
    uint32_t rank = bit_rank(j, m);
    // J is alternating over F2, so its rank is even and N_A is an integer.
    return static_cast<double>(rank) / 2.0;
}

std::vector<double> negativity_profile(const MixedStabilizerState& st, const TorusLattice& lat) {
    std::vector<double> out;
    for (uint32_t k = 0; 2 * k <= lat.lx() - 2; k++) {
        out.push_back(negativity(st, lat.region_links(k)));
    }
    return out;
}

bool is_strong_symmetric(const MixedStabilizerState& st, const PauliOperator& p) {
    Containment c = st.contains(p);
    return c == Containment::PlusMember || c == Containment::MinusMember;
}

bool is_weak_symmetric(const MixedStabilizerState& st, const PauliOperator& p) {
    return st.commutes_with_all(p);
}

SymmetryDiagnostics symmetry_diagnostics(const MixedStabilizerState& st, const PauliOperator& loop,
                                         const PauliOperator& string) {
    SymmetryDiagnostics d;
    d.o1 = st.contains(loop) == Containment::PlusMember ? 1 : 0;
    d.o2 = renyi2_correlator(st, loop);
    d.d1 = st.contains(string) == Containment::PlusMember ? 1 : 0;
    d.d2 = renyi2_correlator(st, string);
    return d;
}

SymmetryDiagnostics symmetry_diagnostics(const MixedStabilizerState& st, const TorusLattice& lat) {
    return symmetry_diagnostics(st, lat.thooft_x(lat.dual_square_loop(2)),
                                lat.xz_string(lat.dual_vertical_path(0, 2)));
}

}  // namespace toricsim
