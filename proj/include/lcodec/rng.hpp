#ifndef LCODEC_RNG_HPP
#define LCODEC_RNG_HPP

#include <cmath>
#include <cstdint>

namespace lcodec {

// Splittable counter-seeded generator (xoshiro256** seeded through
// splitmix64).  Streams are keyed explicitly so that multi-worker runs
// stay reproducible: rng = Rng(seed, worker, batch).
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0,
                 std::uint64_t substream = 0) {
        std::uint64_t x = seed;
        x ^= 0x9e3779b97f4a7c15ull * (stream + 1);
        x ^= 0xbf58476d1ce4e5b9ull * (substream + 1);
        for (auto& w : state_) w = splitmix64(x);
        has_cached_normal_ = false;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in {0, ..., n-1}
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    bool next_bit() { return (next_u64() >> 63) != 0; }

    // standard normal via Box-Muller (pair cached)
    double next_normal() {
        if (has_cached_normal_) {
            has_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(a);
        has_cached_normal_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace lcodec

#endif
