#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "toricsim/bitvec.hpp"

namespace toricsim {

// n-qubit Pauli operator in binary-symplectic form:
//
//   operator = i^phase_exp * prod_j (i^{x_j z_j} X^{x_j} Z^{z_j})
//
// i.e. the per-qubit letter for x=z=1 is the Hermitian Y = i*XZ (X-then-Z
// factor order), and phase_exp mod 4 carries the global phase. An operator is
// Hermitian iff phase_exp is even; phase_exp 0 is +P, 2 is -P.
class PauliOperator {
  public:
    PauliOperator() = default;
    explicit PauliOperator(size_t num_qubits) : x_(num_qubits), z_(num_qubits) {}

    static PauliOperator identity(size_t num_qubits) { return PauliOperator(num_qubits); }

    // Text form: optional prefix "+", "-", "+i", "-i", then one of IXYZ per
    // qubit, qubit 0 first. Throws std::invalid_argument on malformed input.
    static PauliOperator from_text(std::string_view text);
    std::string to_text() const;

    size_t num_qubits() const { return x_.size(); }
    unsigned phase_exp() const { return phase_; }
    void set_phase_exp(unsigned p) { phase_ = p & 3; }
    bool is_hermitian() const { return (phase_ & 1) == 0; }

    bool x_bit(size_t q) const { return x_.get(q); }
    bool z_bit(size_t q) const { return z_.get(q); }
    void set_x(size_t q, bool v) { x_.set(q, v); }
    void set_z(size_t q, bool v) { z_.set(q, v); }

    const BitVec& x() const { return x_; }
    const BitVec& z() const { return z_; }

    // Number of qubits acted on non-trivially.
    size_t weight() const;

    // True iff the x/z parts vanish (the operator is i^phase_exp * identity).
    bool is_identity_string() const { return !x_.any() && !z_.any(); }

    bool commutes_with(const PauliOperator& o) const;

    // Commutation test reading only the given word indices of o's support.
    // Exact whenever `words` covers every nonzero word of o.x and o.z.
    bool anticommutes_sparse(const PauliOperator& o, std::span<const uint32_t> words) const;

    // Phase-exact operator product. Throws std::invalid_argument on size mismatch.
    PauliOperator& operator*=(const PauliOperator& o);
    friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) {
        a *= b;
        return a;
    }

    // Keeps the listed qubits, in the listed order; phase_exp is copied.
    PauliOperator restricted_to(std::span<const uint32_t> qubits) const;

    bool operator==(const PauliOperator& o) const {
        return phase_ == o.phase_ && x_ == o.x_ && z_ == o.z_;
    }

  private:
    BitVec x_, z_;
    unsigned phase_ = 0;  // i^phase_, mod 4
};

}  // namespace toricsim
