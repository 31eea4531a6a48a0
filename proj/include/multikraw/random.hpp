#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace multikraw {

/// mt19937_64 with hand-rolled draw helpers. The stdlib distribution objects
/// have implementation-defined output sequences; these helpers pin the exact
/// stream so seeded runs reproduce bit-for-bit across toolchains. Parallel
/// simulations derive one stream per work chunk via stream().
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static const char* name() { return "mt19937_64"; }

    /// Independent stream for a work chunk: seed mixed with the chunk index.
    static Rng stream(std::uint64_t seed, std::uint64_t chunk) {
        std::uint64_t s = seed + (chunk + 1) * 0x9e3779b97f4a7c15ULL;
        s = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ULL;
        s = (s ^ (s >> 27)) * 0x94d049bb133111ebULL;
        return Rng(s ^ (s >> 31));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n), unbiased via rejection.
    int below(int n) {
        const std::uint64_t un = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % un;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return static_cast<int>(r % un);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(static_cast<int>(i)));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace multikraw
