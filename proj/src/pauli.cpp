#include "toricsim/pauli.hpp"

#include <stdexcept>

namespace toricsim {

PauliOperator PauliOperator::from_text(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty pauli text");
    unsigned phase = 0;
    if (text[0] == '+' || text[0] == '-') {
        bool neg = text[0] == '-';
        text.remove_prefix(1);
        if (!text.empty() && text[0] == 'i') {
            phase = neg ? 3 : 1;
            text.remove_prefix(1);
        } else {
            phase = neg ? 2 : 0;
        }
    }
    PauliOperator p(text.size());
    p.phase_ = phase;
    for (size_t q = 0; q < text.size(); q++) {
        switch (text[q]) {
            case 'I':
                break;
            case 'X':
                p.x_.set(q, true);
                break;
            case 'Y':
                p.x_.set(q, true);
                p.z_.set(q, true);
                break;
            case 'Z':
                p.z_.set(q, true);
                break;
            default:
                throw std::invalid_argument("bad pauli letter in \"" + std::string(text) + "\"");
        }
    }
    return p;
}

std::string PauliOperator::to_text() const {
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    std::string s = prefix[phase_ & 3];
    s.reserve(s.size() + num_qubits());
    for (size_t q = 0; q < num_qubits(); q++) {
        bool xb = x_.get(q), zb = z_.get(q);
        s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
    }
    return s;
}

size_t PauliOperator::weight() const {
    size_t n = 0;
    auto xw = x_.words(), zw = z_.words();
    for (size_t i = 0; i < xw.size(); i++) n += std::popcount(xw[i] | zw[i]);
    return n;
}

bool PauliOperator::commutes_with(const PauliOperator& o) const {
    if (num_qubits() != o.num_qubits()) throw std::invalid_argument("pauli size mismatch");
    size_t n = BitVec::and_popcount(x_, o.z_) + BitVec::and_popcount(z_, o.x_);
    return (n & 1) == 0;
}

bool PauliOperator::anticommutes_sparse(const PauliOperator& o, std::span<const uint32_t> words) const {
    auto xw = x_.words(), zw = z_.words();
    auto oxw = o.x_.words(), ozw = o.z_.words();
    uint64_t acc = 0;
    for (uint32_t w : words) {
        acc += std::popcount(xw[w] & ozw[w]);
        acc += std::popcount(zw[w] & oxw[w]);
    }
    return (acc & 1) != 0;
}

PauliOperator& PauliOperator::operator*=(const PauliOperator& o) {
    if (num_qubits() != o.num_qubits()) throw std::invalid_argument("pauli size mismatch");
    // Phase of the product in the Y-normalized convention. Per qubit the
    // accumulated i-exponent is
    //   x1 z1 + x2 z2 + 2 z1 x2 - (x1^x2)(z1^z2)   (mod 4),
    // summed over qubits; e.g. X*Z keeps x=z=1 and picks up i^3 (= -i Y).
    auto xw = x_.words(), zw = z_.words();
    auto oxw = o.x_.words(), ozw = o.z_.words();
    uint64_t acc = 0;
    for (size_t i = 0; i < xw.size(); i++) {
        uint64_t x1 = xw[i], z1 = zw[i], x2 = oxw[i], z2 = ozw[i];
        acc += std::popcount(x1 & z1);
        acc += std::popcount(x2 & z2);
        acc += 2ull * std::popcount(z1 & x2);
        acc += 3ull * std::popcount((x1 ^ x2) & (z1 ^ z2));  // -1 == 3 mod 4
        xw[i] = x1 ^ x2;
        zw[i] = z1 ^ z2;
    }
    phase_ = (phase_ + o.phase_ + acc) & 3;
    return *this;
}

PauliOperator PauliOperator::restricted_to(std::span<const uint32_t> qubits) const {
    PauliOperator p(qubits.size());
    for (size_t i = 0; i < qubits.size(); i++) {
        p.x_.set(i, x_.get(qubits[i]));
        p.z_.set(i, z_.get(qubits[i]));
    }
    p.phase_ = phase_;
    return p;
}

}  // namespace toricsim
