#pragma once

#include <cstdint>
#include <random>

namespace rllink {

// SplitMix64 finalizer. Used to turn (master seed, stream id) pairs into
// well-separated engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream derivation contract: stream `id` of master seed `s` is seeded with
// splitmix64 applied twice so that nearby (s, id) pairs land far apart.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream_id + 0x51ed270b0a1c6575ULL));
}

// Deterministic uniform stream. std::mt19937_64 output is fully specified by
// the standard; doubles are produced by explicit bit manipulation rather than
// std::uniform_real_distribution (whose algorithm is implementation-defined),
// so identical seeds give identical streams on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // n is tiny everywhere this is used; modulo bias is < 2^-50.
        return engine_() % n;
    }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace rllink
