#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toricsim/channel.hpp"

namespace toricsim {

struct ValidationCell {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    uint32_t lx = 0;
    uint32_t ly = 0;
    std::vector<ValidationCell> cells;
    // Computed facts reported without a pinned expectation.
    std::vector<std::string> info;

    bool all_pass() const;
};

// Checks every pinned symmetry-table cell on one small lattice: the
// strong/weak classification of the clean code, the channel and the fully
// dephased state with respect to the closed ZX loop, the chi_I/chi_II values
// on both endpoint states, the order/disorder diagnostics, and the Kraus
// geometry (weight, commutation with closed XZ loops).
//
// The kraus parameter is a seam for negative controls: a deliberately wrong
// link pairing must flip the Kraus-commutation cells.
ValidationReport run_validation(uint32_t lx = 6, uint32_t ly = 6,
                                const KrausBuilder& kraus = zx_kraus);

// Broken pairing (X on the inverse-shifted link instead): with this builder
// every Kraus commutes with the closed ZX loop, so the channel looks strong
// symmetric when it must not.
PauliOperator corrupt_shift_kraus(const TorusLattice& lat, uint32_t flat);

std::string report_to_json(const ValidationReport& report);

}  // namespace toricsim
