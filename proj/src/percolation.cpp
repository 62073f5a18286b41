#include "toricsim/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace toricsim {

UnionFind::UnionFind(uint32_t n) : parent_(n), size_(n, 1) {
    for (uint32_t i = 0; i < n; i++) parent_[i] = i;
}

uint32_t UnionFind::find(uint32_t a) {
    uint32_t root = a;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[a] != root) {
        uint32_t next = parent_[a];
        parent_[a] = root;
        a = next;
    }
    return root;
}

bool UnionFind::unite(uint32_t a, uint32_t b) {
    uint32_t ra = find(a), rb = find(b);
    if (ra == rb) return false;
    if (size_[ra] < size_[rb] || (size_[ra] == size_[rb] && rb < ra)) std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    return true;
}

bool UnionFind::connected(uint32_t a, uint32_t b) { return find(a) == find(b); }

uint32_t UnionFind::component_size(uint32_t a) { return size_[find(a)]; }

PatternConnectivity::PatternConnectivity(const TorusLattice& lat, const DecoherencePattern& pat)
    : lx_(lat.lx()), uf_(lat.lx() * lat.ly()) {
    for (uint32_t f : pat.links) {
        LinkIndex l = lat.link(f);
        uint32_t a = vertex(l.x, l.y);
        uint32_t b = l.o == LinkOrientation::Horizontal ? vertex((l.x + 1) % lat.lx(), l.y)
                                                        : vertex(l.x, (l.y + 1) % lat.ly());
        uf_.unite(a, b);
    }
}

bool PatternConnectivity::connected(uint32_t vertex_a, uint32_t vertex_b) {
    return uf_.connected(vertex_a, vertex_b);
}

int predict_CII(const TorusLattice& lat, const DecoherencePattern& pat, uint32_t vx1, uint32_t vy1,
                uint32_t vx2, uint32_t vy2) {
    PatternConnectivity c(lat, pat);
    return c.connected(c.vertex(vx1, vy1), c.vertex(vx2, vy2)) ? 1 : 0;
}

int predict_CI(const TorusLattice& lat, const DecoherencePattern& pat,
               std::span<const uint32_t> loop) {
    for (uint32_t f : loop) {
        if (pat.has(lat.shift_inverse(f))) return 0;
    }
    return 1;
}

namespace {

// Union-find over the covering space: each node carries its integer
// displacement from the component root. A link closing a cycle whose
// accumulated displacement is nonzero wraps the torus.
class WindingUnionFind {
  public:
    explicit WindingUnionFind(uint32_t n) : parent_(n), dx_(n, 0), dy_(n, 0), size_(n, 1) {
        for (uint32_t i = 0; i < n; i++) parent_[i] = i;
    }

    // Add edge a-b where b sits at a + (sx, sy) in the cover. Returns true if
    // the edge closes a winding cycle.
    bool add_edge(uint32_t a, uint32_t b, int32_t sx, int32_t sy) {
        int32_t dax, day, dbx, dby;
        uint32_t ra = find(a, dax, day);
        uint32_t rb = find(b, dbx, dby);
        if (ra == rb) return dbx != dax + sx || dby != day + sy;
        if (size_[ra] < size_[rb]) {
            std::swap(ra, rb);
            std::swap(dax, dbx);
            std::swap(day, dby);
            sx = -sx;
            sy = -sy;
        }
        // rb joins ra: pos(b) = pos(a) + s fixes rb's offset.
        parent_[rb] = ra;
        dx_[rb] = dax + sx - dbx;
        dy_[rb] = day + sy - dby;
        size_[ra] += size_[rb];
        return false;
    }

  private:
    uint32_t find(uint32_t a, int32_t& out_dx, int32_t& out_dy) {
        uint32_t root = a;
        int32_t px = 0, py = 0;
        while (parent_[root] != root) {
            px += dx_[root];
            py += dy_[root];
            root = parent_[root];
        }
        // Second pass: point everything at the root with absolute offsets.
        int32_t ax = px, ay = py;
        while (parent_[a] != root) {
            uint32_t next = parent_[a];
            int32_t ndx = dx_[a], ndy = dy_[a];
            dx_[a] = ax;
            dy_[a] = ay;
            parent_[a] = root;
            ax -= ndx;
            ay -= ndy;
            a = next;
        }
        out_dx = px;
        out_dy = py;
        return root;
    }

    std::vector<uint32_t> parent_;
    std::vector<int32_t> dx_, dy_;
    std::vector<uint32_t> size_;
};

}  // namespace

CrossingEstimate crossing_probability(double r, uint32_t l, uint64_t samples, SplitMix64& rng) {
    if (l < 4) throw std::invalid_argument("lattice too small for crossing estimate");
    uint64_t hits = 0;
    uint32_t target = (l / 2) * l + l / 2;
    for (uint64_t s = 0; s < samples; s++) {
        UnionFind uf(l * l);
        for (uint32_t y = 0; y < l; y++) {
            for (uint32_t x = 0; x < l; x++) {
                uint32_t v = y * l + x;
                if (rng.bernoulli(r)) uf.unite(v, y * l + (x + 1) % l);
                if (rng.bernoulli(r)) uf.unite(v, ((y + 1) % l) * l + x);
            }
        }
        if (uf.connected(0, target)) hits++;
    }
    CrossingEstimate e;
    e.samples = samples;
    e.value = static_cast<double>(hits) / static_cast<double>(samples);
    e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(samples));
    return e;
}

CrossingEstimate wrapping_probability(double r, uint32_t l, uint64_t samples, SplitMix64& rng) {
    if (l < 4) throw std::invalid_argument("lattice too small for wrapping estimate");
    uint64_t hits = 0;
    for (uint64_t s = 0; s < samples; s++) {
        WindingUnionFind uf(l * l);
        bool wrapped = false;
        for (uint32_t y = 0; y < l; y++) {
            for (uint32_t x = 0; x < l; x++) {
                uint32_t v = y * l + x;
                bool right = rng.bernoulli(r);
                bool up = rng.bernoulli(r);
                if (right) wrapped |= uf.add_edge(v, y * l + (x + 1) % l, 1, 0);
                if (up) wrapped |= uf.add_edge(v, ((y + 1) % l) * l + x, 0, 1);
            }
        }
        if (wrapped) hits++;
    }
    CrossingEstimate e;
    e.samples = samples;
    e.value = static_cast<double>(hits) / static_cast<double>(samples);
    e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(samples));
    return e;
}

double estimate_threshold(std::span<const uint32_t> sizes, double r_lo, double r_hi, double step,
                          uint64_t samples_per_point, uint64_t seed) {
    if (sizes.size() < 2) throw std::invalid_argument("need at least two sizes");
    std::vector<double> grid;
    for (double r = r_lo; r <= r_hi + step / 2; r += step) grid.push_back(r);
    std::vector<std::vector<double>> curves(sizes.size(), std::vector<double>(grid.size()));
    for (size_t i = 0; i < sizes.size(); i++) {
        for (size_t gi = 0; gi < grid.size(); gi++) {
            SplitMix64 rng(mix_fields({seed, i, gi}));
            curves[i][gi] = wrapping_probability(grid[gi], sizes[i], samples_per_point, rng).value;
        }
    }
    std::vector<double> crossings;
    for (size_t i = 0; i < sizes.size(); i++) {
        for (size_t jj = i + 1; jj < sizes.size(); jj++) {
            for (size_t gi = 0; gi + 1 < grid.size(); gi++) {
                double d0 = curves[i][gi] - curves[jj][gi];
                double d1 = curves[i][gi + 1] - curves[jj][gi + 1];
                if (d0 == 0.0 && d1 == 0.0) continue;
                if ((d0 <= 0 && d1 > 0) || (d0 >= 0 && d1 < 0)) {
                    double t = d0 / (d0 - d1);
                    crossings.push_back(grid[gi] + t * step);
                }
            }
        }
    }
    if (crossings.empty()) throw std::runtime_error("wrapping curves do not cross in range");
    std::sort(crossings.begin(), crossings.end());
    return crossings[crossings.size() / 2];
}

}  // namespace toricsim
