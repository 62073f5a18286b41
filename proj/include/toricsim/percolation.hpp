#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "toricsim/channel.hpp"
#include "toricsim/lattice.hpp"
#include "toricsim/rng.hpp"

namespace toricsim {

// Union-find with path compression and union by size. Deterministic labels:
// the surviving root is the larger component, ties to the smaller index.
class UnionFind {
  public:
    explicit UnionFind(uint32_t n);
    uint32_t find(uint32_t a);
    // Returns false when a and b were already connected.
    bool unite(uint32_t a, uint32_t b);
    bool connected(uint32_t a, uint32_t b);
    uint32_t component_size(uint32_t a);

  private:
    std::vector<uint32_t> parent_;
    std::vector<uint32_t> size_;
};

// Vertex connectivity through the decohered links of a pattern: link h(x,y)
// joins vertices (x,y)-(x+1,y), link v(x,y) joins (x,y)-(x,y+1), with torus
// wrap. Vertices are flat-indexed y*lx+x.
class PatternConnectivity {
  public:
    PatternConnectivity(const TorusLattice& lat, const DecoherencePattern& pat);
    bool connected(uint32_t vertex_a, uint32_t vertex_b);
    uint32_t vertex(uint32_t x, uint32_t y) const { return y * lx_ + x; }

  private:
    uint32_t lx_;
    UnionFind uf_;
};

// Per-trajectory prediction of the Renyi-2 string correlator from the pattern
// alone: 1 iff the endpoints are connected through decohered links.
int predict_CII(const TorusLattice& lat, const DecoherencePattern& pat, uint32_t vx1, uint32_t vy1,
                uint32_t vx2, uint32_t vy2);

// Per-trajectory prediction of the loop order parameter: 1 iff the pattern
// avoids shift_inverse(loop), the set of links whose Kraus anticommutes with
// the Wilson loop.
int predict_CI(const TorusLattice& lat, const DecoherencePattern& pat,
               std::span<const uint32_t> loop);

struct CrossingEstimate {
    double value = 0.0;
    double std_error = 0.0;
    uint64_t samples = 0;
};

// Monte-Carlo probability that the antipodal vertices (0,0) and (L/2,L/2)
// connect under i.i.d. open links with probability r, on an LxL torus.
CrossingEstimate crossing_probability(double r, uint32_t l, uint64_t samples, SplitMix64& rng);

// Monte-Carlo probability that some cluster wraps the torus in either
// direction. The wrapping curves of different sizes cross at the bond
// percolation threshold, so they give a sharp threshold estimator.
CrossingEstimate wrapping_probability(double r, uint32_t l, uint64_t samples, SplitMix64& rng);

// Threshold from pairwise crossings of wrapping-probability curves over the
// given sizes, scanned on [r_lo, r_hi] with the given resolution.
double estimate_threshold(std::span<const uint32_t> sizes, double r_lo, double r_hi, double step,
                          uint64_t samples_per_point, uint64_t seed);

}  // namespace toricsim
