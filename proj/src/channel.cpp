#include "toricsim/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace toricsim {

bool DecoherencePattern::has(uint32_t flat) const {
    return std::binary_search(links.begin(), links.end(), flat);
}

PauliOperator zx_kraus(const TorusLattice& lat, uint32_t flat) {
    PauliOperator k(lat.num_links());
    k.set_z(flat, true);
    k.set_x(lat.shift_by_delta(flat), true);
    return k;
}

DecoherencePattern sample_pattern(const TorusLattice& lat, double r, SplitMix64& rng) {
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::invalid_argument("decoherence probability outside [0,1]");
    }
    DecoherencePattern pat;
    pat.lx = lat.lx();
    pat.ly = lat.ly();
    for (uint32_t f = 0; f < lat.num_links(); ++f) {
        if (rng.bernoulli(r)) pat.links.push_back(f);
    }
    return pat;
}

DecoherencePattern all_links_pattern(const TorusLattice& lat) {
    DecoherencePattern pat;
    pat.lx = lat.lx();
    pat.ly = lat.ly();
    pat.links.resize(lat.num_links());
    for (uint32_t f = 0; f < lat.num_links(); ++f) pat.links[f] = f;
    return pat;
}

uint32_t apply_pattern(MixedStabilizerState& st, const TorusLattice& lat,
                       const DecoherencePattern& pat, const KrausBuilder& kraus) {
    uint32_t consumed = 0;
    for (uint32_t f : pat.links) {
        if (st.apply_dephasing(kraus(lat, f))) ++consumed;
    }
    return consumed;
}

DecoherencePattern apply_stochastic_layer(MixedStabilizerState& st, const TorusLattice& lat,
                                          double r, SplitMix64& rng, const KrausBuilder& kraus) {
    DecoherencePattern pat = sample_pattern(lat, r, rng);
    apply_pattern(st, lat, pat, kraus);
    return pat;
}

uint32_t apply_maximal(MixedStabilizerState& st, const TorusLattice& lat,
                       const KrausBuilder& kraus) {
    return apply_pattern(st, lat, all_links_pattern(lat), kraus);
}

}  // namespace toricsim
