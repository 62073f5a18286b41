#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "toricsim/lattice.hpp"
#include "toricsim/pauli.hpp"
#include "toricsim/stabilizer_state.hpp"

namespace toricsim {

// Loop order parameter, Tr[rho W rho] / Tr[rho^2] for a Hermitian Pauli W.
// Evaluates to 1 for PlusMember, 0 otherwise. A MinusMember outcome (value -1)
// also reports 0 but increments *minus_count so the sign case cannot silently
// alias the +1 case.
int order_param_CI(const MixedStabilizerState& st, const PauliOperator& w,
                   uint64_t* minus_count = nullptr);

// Renyi-2 correlator Tr[P rho P rho] / Tr[rho^2] for Hermitian Pauli P:
// 1 iff P commutes with every generator, else 0.
int renyi2_correlator(const MixedStabilizerState& st, const PauliOperator& p);

// Mean of order_param_CI over Wilson Z loops on square_loop(k), k=1..N with
// N = min(lx,ly)-2. With anchor_average, each k is additionally averaged over
// all lx*ly anchors.
double chi_I(const MixedStabilizerState& st, const TorusLattice& lat, bool anchor_average = false,
             uint64_t* minus_count = nullptr);

// Per-string values behind chi_II: flags[ix][len-1] is the renyi2_correlator
// of zx_string(vertical_path(ix, len)) for ix=0..lx-1, len=1..ly-3. Requires
// ly >= 4. Computed by a batched commutation sweep; identical to calling
// renyi2_correlator per string.
std::vector<std::vector<int>> chi_II_strings(const MixedStabilizerState& st,
                                             const TorusLattice& lat);

// Mean of the chi_II_strings table.
double chi_II(const MixedStabilizerState& st, const TorusLattice& lat);

// Entanglement negativity of the link region: half the F2 rank of the
// anticommutation matrix J of the region-restricted generators.
double negativity(const MixedStabilizerState& st, std::span<const uint32_t> region);

// N_A(k_A) for k_A = 0..(lx-2)/2 over region_links(k_A).
std::vector<double> negativity_profile(const MixedStabilizerState& st, const TorusLattice& lat);

// Strong: P is (up to sign) in the stabilizer group. Weak: P commutes with the
// whole group.
bool is_strong_symmetric(const MixedStabilizerState& st, const PauliOperator& p);
bool is_weak_symmetric(const MixedStabilizerState& st, const PauliOperator& p);

// Order/disorder parameters of the XZ-type 1-form symmetry, evaluated for a
// closed loop operator W (a 't Hooft or Wilson loop) and an open XZ string S:
//   o1 = Tr[rho W rho]/Tr[rho^2]       (weak order)
//   o2 = Tr[W rho W rho]/Tr[rho^2]     (strong order)
//   d1 = Tr[rho S rho]/Tr[rho^2]       (strong disorder)
//   d2 = Tr[S rho S rho]/Tr[rho^2]     (weak disorder)
struct SymmetryDiagnostics {
    int o1 = 0;
    int o2 = 0;
    int d1 = 0;
    int d2 = 0;
};

SymmetryDiagnostics symmetry_diagnostics(const MixedStabilizerState& st, const PauliOperator& loop,
                                         const PauliOperator& string);

// Default diagnostic operators: the 't Hooft loop on dual_square_loop(2) and
// the XZ string on dual_vertical_path(0, 2).
SymmetryDiagnostics symmetry_diagnostics(const MixedStabilizerState& st, const TorusLattice& lat);

}  // namespace toricsim
