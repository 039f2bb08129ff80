#pragma once

#include <cstdint>
#include <limits>

namespace asepldp {

// splitmix64, used to expand a master seed into independent stream seeds.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ — fast 64-bit generator for the event loops.
class Xoshiro256pp {
  public:
    using result_type = uint64_t;

    explicit Xoshiro256pp(uint64_t seed = 1) { reseed(seed); }

    void reseed(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<uint64_t>::max(); }

    uint64_t operator()() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform double in [0,1)
    double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// Deterministic per-trajectory stream: the master seed and the run index
// fix the stream regardless of how runs are scheduled across workers.
inline Xoshiro256pp derive_stream(uint64_t master_seed, uint64_t run_index) {
    uint64_t st = master_seed ^ (0xd1b54a32d192ed03ULL * (run_index + 1));
    uint64_t seed = splitmix64(st);
    return Xoshiro256pp(seed);
}

}  // namespace asepldp
