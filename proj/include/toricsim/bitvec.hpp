#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

namespace toricsim {

// Fixed-length bit vector backed by 64-bit words. The unused tail bits of the
// last word are kept zero so popcounts and equality work word-wise.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    size_t size() const { return nbits_; }
    size_t num_words() const { return words_.size(); }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t mask = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    bool any() const {
        for (uint64_t w : words_) {
            if (w) return true;
        }
        return false;
    }

    size_t popcount() const {
        size_t n = 0;
        for (uint64_t w : words_) n += std::popcount(w);
        return n;
    }

    BitVec& operator^=(const BitVec& o) {
        for (size_t i = 0; i < words_.size(); i++) words_[i] ^= o.words_[i];
        return *this;
    }

    bool operator==(const BitVec& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }

    std::span<const uint64_t> words() const { return words_; }
    std::span<uint64_t> words() { return words_; }

    // Word indices holding at least one set bit; used for sparse overlap tests.
    std::vector<uint32_t> nonzero_words() const {
        std::vector<uint32_t> out;
        for (size_t i = 0; i < words_.size(); i++) {
            if (words_[i]) out.push_back(static_cast<uint32_t>(i));
        }
        return out;
    }

    static size_t and_popcount(const BitVec& a, const BitVec& b) {
        size_t n = 0;
        for (size_t i = 0; i < a.words_.size(); i++) n += std::popcount(a.words_[i] & b.words_[i]);
        return n;
    }

  private:
    size_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

}  // namespace toricsim
