#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "toricsim/lattice.hpp"
#include "toricsim/pauli.hpp"
#include "toricsim/rng.hpp"
#include "toricsim/stabilizer_state.hpp"

namespace toricsim {

// One sampled realization of the noise: the set of links hit by the channel,
// as flat indices sorted ascending.
struct DecoherencePattern {
    uint32_t lx = 0;
    uint32_t ly = 0;
    std::vector<uint32_t> links;

    bool has(uint32_t flat) const;
};

// Kraus factor for one link: Z on the link itself, X on its diagonal-shift
// partner. Hermitian by construction (disjoint support).
PauliOperator zx_kraus(const TorusLattice& lat, uint32_t flat);

// Injection seam for self-checks that deliberately break the Kraus geometry.
using KrausBuilder = std::function<PauliOperator(const TorusLattice&, uint32_t)>;

// Independent Bernoulli(r) draw per link, swept in ascending flat order so a
// given seed always yields the same pattern. Throws std::invalid_argument for
// r outside [0,1].
DecoherencePattern sample_pattern(const TorusLattice& lat, double r, SplitMix64& rng);

DecoherencePattern all_links_pattern(const TorusLattice& lat);

// Fully dephase every link in the pattern, ascending order. Each link's Kraus
// either commutes with the current group (group unchanged) or consumes one
// generator. Returns the number of generators consumed. The final group is the
// centralizer of the applied Kraus set, so the result is order-independent.
uint32_t apply_pattern(MixedStabilizerState& st, const TorusLattice& lat,
                       const DecoherencePattern& pat, const KrausBuilder& kraus = zx_kraus);

// sample_pattern + apply_pattern with the same rng; returns the pattern.
DecoherencePattern apply_stochastic_layer(MixedStabilizerState& st, const TorusLattice& lat,
                                          double r, SplitMix64& rng,
                                          const KrausBuilder& kraus = zx_kraus);

// Channel at r = 1: every link decohered.
uint32_t apply_maximal(MixedStabilizerState& st, const TorusLattice& lat,
                       const KrausBuilder& kraus = zx_kraus);

}  // namespace toricsim
