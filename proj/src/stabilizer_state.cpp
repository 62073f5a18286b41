#include "toricsim/stabilizer_state.hpp"

#include <stdexcept>

namespace toricsim {

const char* to_string(Containment c) {
    switch (c) {
        case Containment::PlusMember:
            return "PlusMember";
        case Containment::MinusMember:
            return "MinusMember";
        case Containment::NotMember:
            return "NotMember";
        case Containment::Anticommutes:
            return "Anticommutes";
    }
    return "?";
}

namespace {

// F2 rank of the symplectic rows, by destructive elimination on copies of the
// x/z bit words. Used only at construction time.
size_t symplectic_rank(const std::vector<PauliOperator>& gens, size_t num_qubits) {
    size_t n = gens.size();
    std::vector<std::vector<uint64_t>> rows(n);
    for (size_t i = 0; i < n; i++) {
        auto xw = gens[i].x().words();
        auto zw = gens[i].z().words();
        rows[i].assign(xw.begin(), xw.end());
        rows[i].insert(rows[i].end(), zw.begin(), zw.end());
    }
    size_t xwords = (num_qubits + 63) / 64;
    size_t nbits = 2 * num_qubits;
    size_t rank = 0;
    for (size_t col = 0; col < nbits && rank < n; col++) {
        size_t bit = col < num_qubits ? col : col - num_qubits;
        size_t w = (col < num_qubits ? 0 : xwords) + (bit >> 6);
        uint64_t mask = uint64_t{1} << (bit & 63);
        size_t pivot = n;
        for (size_t i = rank; i < n; i++) {
            if (rows[i][w] & mask) {
                pivot = i;
                break;
            }
        }
        if (pivot == n) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t i = 0; i < n; i++) {
            if (i != rank && (rows[i][w] & mask)) {
                for (size_t j = 0; j < rows[i].size(); j++) rows[i][j] ^= rows[rank][j];
            }
        }
        rank++;
    }
    return rank;
}

}  // namespace

MixedStabilizerState::MixedStabilizerState(size_t num_qubits, std::vector<PauliOperator> generators)
    : num_qubits_(num_qubits), gens_(std::move(generators)) {
    if (gens_.size() > num_qubits_) throw std::invalid_argument("more generators than qubits");
    for (const auto& g : gens_) {
        if (g.num_qubits() != num_qubits_) throw std::invalid_argument("generator size mismatch");
        if (!g.is_hermitian()) throw std::invalid_argument("generator is not Hermitian");
    }
    for (size_t i = 0; i < gens_.size(); i++) {
        for (size_t j = i + 1; j < gens_.size(); j++) {
            if (!gens_[i].commutes_with(gens_[j])) {
                throw std::invalid_argument("generators do not commute");
            }
        }
    }
    if (symplectic_rank(gens_, num_qubits_) != gens_.size()) {
        throw std::invalid_argument("generators are not independent");
    }
}

void MixedStabilizerState::canonicalize() {
    if (canonical_) return;
    size_t k = gens_.size();
    size_t row = 0;
    for (size_t col = 0; col < 2 * num_qubits_ && row < k; col++) {
        size_t pivot = k;
        for (size_t i = row; i < k; i++) {
            if (column_bit(gens_[i], col)) {
                pivot = i;
                break;
            }
        }
        if (pivot == k) continue;
        std::swap(gens_[row], gens_[pivot]);
        for (size_t i = 0; i < k; i++) {
            if (i != row && column_bit(gens_[i], col)) gens_[i] *= gens_[row];
        }
        row++;
    }
    canonical_ = true;
}

Containment MixedStabilizerState::contains(const PauliOperator& p) const {
    if (p.num_qubits() != num_qubits_) throw std::invalid_argument("pauli size mismatch");
    for (const auto& g : gens_) {
        if (!g.commutes_with(p)) return Containment::Anticommutes;
    }
    const_cast<MixedStabilizerState*>(this)->canonicalize();
    // Reduce p against the echelon rows; the accumulated product of the rows
    // used reconstructs p's x/z part with an exactly tracked phase.
    PauliOperator residual = p;
    PauliOperator acc = PauliOperator::identity(num_qubits_);
    for (const auto& g : gens_) {
        // Pivot column of g = first set column; rows are in pivot order.
        size_t pivot = 2 * num_qubits_;
        for (size_t col = 0; col < 2 * num_qubits_; col++) {
            if (column_bit(g, col)) {
                pivot = col;
                break;
            }
        }
        if (pivot < 2 * num_qubits_ && column_bit(residual, pivot)) {
            residual *= g;
            acc *= g;
        }
    }
    if (!residual.is_identity_string()) return Containment::NotMember;
    unsigned diff = (p.phase_exp() - acc.phase_exp()) & 3;
    return diff == 0 ? Containment::PlusMember : Containment::MinusMember;
}

bool MixedStabilizerState::commutes_with_all(const PauliOperator& p) const {
    for (const auto& g : gens_) {
        if (!g.commutes_with(p)) return false;
    }
    return true;
}

bool MixedStabilizerState::apply_dephasing(const PauliOperator& p) {
    if (p.num_qubits() != num_qubits_) throw std::invalid_argument("pauli size mismatch");
    if (!p.is_hermitian()) throw std::invalid_argument("dephasing pauli is not Hermitian");
    auto words = p.x().nonzero_words();
    for (uint32_t w : p.z().nonzero_words()) {
        bool seen = false;
        for (uint32_t v : words) seen |= (v == w);
        if (!seen) words.push_back(w);
    }
    size_t star = gens_.size();
    std::vector<uint32_t> hit;
    for (size_t i = 0; i < gens_.size(); i++) {
        if (gens_[i].anticommutes_sparse(p, words)) {
            if (star == gens_.size()) {
                star = i;
            } else {
                hit.push_back(static_cast<uint32_t>(i));
            }
        }
    }
    if (star == gens_.size()) {
        // Group untouched; a logical that anticommutes with p cannot be
        // repaired and dies.
        for (auto& l : logicals_) {
            if (l.alive && l.op.anticommutes_sparse(p, words)) l.alive = false;
        }
        return false;
    }
    for (uint32_t i : hit) gens_[i] *= gens_[star];
    for (auto& l : logicals_) {
        if (!l.alive || !l.op.anticommutes_sparse(p, words)) continue;
        // A tracked logical stays equal to its own generator copy under
        // repairs, so consuming that copy is the moment the logical is swept
        // out of the group: repairing with itself would leave the identity.
        if (l.op == gens_[star]) {
            l.alive = false;
        } else {
            l.op *= gens_[star];
        }
    }
    gens_.erase(gens_.begin() + static_cast<ptrdiff_t>(star));
    canonical_ = false;
    return true;
}

void MixedStabilizerState::track_logical(PauliOperator op) {
    if (op.num_qubits() != num_qubits_) throw std::invalid_argument("logical size mismatch");
    if (!op.is_hermitian()) throw std::invalid_argument("logical is not Hermitian");
    for (const auto& g : gens_) {
        if (!g.commutes_with(op)) throw std::invalid_argument("logical anticommutes with a generator");
    }
    logicals_.push_back({std::move(op), true});
}

std::string MixedStabilizerState::dump() const {
    std::string s = "k=" + std::to_string(gens_.size()) + " L=" + std::to_string(num_qubits_) + "\n";
    for (const auto& g : gens_) {
        s += g.to_text();
        s += '\n';
    }
    return s;
}

Containment centralizer_membership_oracle(const MixedStabilizerState& initial,
                                          std::span<const PauliOperator> kraus,
                                          const PauliOperator& p) {
    bool commutes = true;
    for (const PauliOperator& k : kraus) {
        if (!k.commutes_with(p)) {
            commutes = false;
            break;
        }
    }
    if (commutes) {
        Containment base = initial.contains(p);
        if (base == Containment::PlusMember || base == Containment::MinusMember) return base;
    }
    MixedStabilizerState st = initial;
    for (const PauliOperator& k : kraus) st.apply_dephasing(k);
    return st.commutes_with_all(p) ? Containment::NotMember : Containment::Anticommutes;
}

}  // namespace toricsim
