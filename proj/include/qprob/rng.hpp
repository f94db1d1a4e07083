#pragma once

#include <cmath>
#include <cstdint>

namespace qprob {

// Counter-based deterministic generator: draw i of stream s under seed k is
// a pure function hash(k, s, i). Records are therefore reproducible
// bit-exactly regardless of thread scheduling, and parallel consumers just
// take distinct streams.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    static std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        std::uint64_t h = mix(seed ^ 0x6A09E667F3BCC909ULL);
        h = mix(h ^ stream * 0xA24BAED4963EE407ULL);
        h = mix(h ^ index * 0x9FB21C651E98DF25ULL);
        return h;
    }

    std::uint64_t next_u64() { return hash(seed_, stream_, index_++); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() { return to_unit(next_u64()); }

    /// Random access without advancing the counter.
    double double_at(std::uint64_t index) const { return to_unit(hash(seed_, stream_, index)); }

    /// Standard normal (Box-Muller; consumes two uniforms per pair).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - next_double();  // (0, 1]
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double next_exponential(double mean) { return -mean * std::log(1.0 - next_double()); }

    /// Poisson by Knuth's product method; O(mean) uniforms per draw.
    std::uint64_t next_poisson(double mean) {
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= next_double();
        } while (p > limit);
        return k - 1;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    CounterRng substream(std::uint64_t stream) const { return CounterRng(seed_, stream); }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static double to_unit(std::uint64_t h) {
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qprob
