#pragma once

#include <cstdint>
#include <initializer_list>

namespace toricsim {

// SplitMix64. Counter-based: output i is a fixed mix of seed + i*GAMMA, so a
// stream is a pure function of its seed and position, independent of any other
// stream. Good enough statistics for Bernoulli sampling and resampling draws.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : s_(seed) {}

    uint64_t next() {
        uint64_t z = (s_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) {
            next();  // keep the stream position independent of p
            return false;
        }
        if (p >= 1.0) {
            next();
            return true;
        }
        return uniform01() < p;
    }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) {
        // Rejection-free multiply-shift; bias < 2^-64 * n, negligible here.
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

  private:
    uint64_t s_;
};

inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Stream-seed derivation hash: fold fields into the running value with the
// SplitMix64 finalizer. Order-sensitive, collision-resistant enough for
// (size, r, sample) indexing.
inline uint64_t mix_fields(std::initializer_list<uint64_t> fields) {
    uint64_t h = 0x243F6A8885A308D3ull;  // pi
    for (uint64_t f : fields) h = mix64(h + 0x9E3779B97F4A7C15ull * (f + 1));
    return h;
}

// Per-trajectory stream seed from (master seed, size index, r index, sample
// index). Recorded in run outputs so any trajectory can be replayed alone.
inline uint64_t trajectory_seed(uint64_t master, uint32_t size_index, uint32_t r_index,
                                uint32_t sample_index) {
    return mix_fields({master, size_index, r_index, sample_index});
}

}  // namespace toricsim
