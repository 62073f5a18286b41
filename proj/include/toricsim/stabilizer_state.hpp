#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "toricsim/pauli.hpp"

namespace toricsim {

// Result of a group-membership query for a Hermitian Pauli P against a state
// rho with generator set {g_n}:
//   PlusMember    +P is in the group           (Tr[P rho] scales to +1)
//   MinusMember   -P is in the group           (Tr[P rho] scales to -1)
//   NotMember     P commutes with every g_n but is outside the group (trace 0)
//   Anticommutes  P anticommutes with some g_n                       (trace 0)
enum class Containment { PlusMember, MinusMember, NotMember, Anticommutes };

const char* to_string(Containment c);

// Mixed stabilizer state rho = (1/2^L) prod_n (1 + g_n) with k independent,
// pairwise commuting, Hermitian sign-definite Pauli generators on L qubits.
// k < L is a genuinely mixed state; Tr[rho^2] = 2^{k-L}.
//
// States are single-owner mutable: no internal locking, callers parallelize
// over independent states.
class MixedStabilizerState {
  public:
    // Validates sizes, Hermiticity (phase_exp even), pairwise commutation and
    // independence; throws std::invalid_argument on any violation.
    MixedStabilizerState(size_t num_qubits, std::vector<PauliOperator> generators);

    size_t num_qubits() const { return num_qubits_; }
    size_t num_generators() const { return gens_.size(); }
    const std::vector<PauliOperator>& generators() const { return gens_; }

    // log2 Tr[rho^2] = k - L.
    int purity_exponent() const { return static_cast<int>(gens_.size()) - static_cast<int>(num_qubits_); }

    // Row-reduces the generator list to reduced echelon form over the column
    // order x_0..x_{L-1}, z_0..z_{L-1}, multiplying rows phase-exactly. The
    // group (including signs) is unchanged; the canonical form is unique.
    void canonicalize();
    bool is_canonical() const { return canonical_; }

    // Logically const: may canonicalize in place, which preserves the signed
    // group the state represents.
    Containment contains(const PauliOperator& p) const;
    bool commutes_with_all(const PauliOperator& p) const;

    // Single dephasing event by Hermitian Pauli p: rho -> (rho + p rho p)/2.
    // If no generator anticommutes with p the state is unchanged; otherwise the
    // lowest-index anticommuting generator g* repairs every other anticommuting
    // generator (and every anticommuting live logical) by multiplication and is
    // then removed, so k drops by exactly 1. Returns true iff the group changed.
    bool apply_dephasing(const PauliOperator& p);

    // Logical-operator bookkeeping. A tracked logical must commute with every
    // current generator; it is declared dead when it anticommutes with a
    // dephasing Pauli and either no generator anticommutes (repair impossible)
    // or the repairing generator is the logical's own group copy (the logical
    // is swept out of the group; self-repair would leave the identity).
    void track_logical(PauliOperator op);
    size_t num_tracked_logicals() const { return logicals_.size(); }
    bool logical_alive(size_t i) const { return logicals_[i].alive; }
    const PauliOperator& logical_op(size_t i) const { return logicals_[i].op; }

    // Debug text form: "k=<k> L=<L>" then one generator per line.
    std::string dump() const;

  private:
    struct Logical {
        PauliOperator op;
        bool alive;
    };

    bool column_bit(const PauliOperator& p, size_t col) const {
        return col < num_qubits_ ? p.x_bit(col) : p.z_bit(col - num_qubits_);
    }

    size_t num_qubits_ = 0;
    std::vector<PauliOperator> gens_;
    std::vector<Logical> logicals_;
    bool canonical_ = false;
};

// Predicts contains() on the state reached by dephasing `initial` with every
// operator in `kraus`, exploiting that the surviving group is the centralizer
// of the Kraus set inside the initial group: a signed member of the initial
// group survives if and only if it commutes with every Kraus operator. The
// non-member cases are told apart by direct commutation against the dephased
// generators, never by a membership solve on the final group.
Containment centralizer_membership_oracle(const MixedStabilizerState& initial,
                                          std::span<const PauliOperator> kraus,
                                          const PauliOperator& p);

}  // namespace toricsim
