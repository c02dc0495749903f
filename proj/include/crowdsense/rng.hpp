#pragma once

#include <cstdint>
#include <cmath>
#include <random>
#include <vector>

namespace crowdsense {

// Stateless 64-bit mixer used to derive independent per-entity seeds from a
// base experiment seed. Derived streams are stable across runs and platforms.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    return mix64(base ^ mix64(stream ^ mix64(index)));
}

// Named sub-streams of a campaign seed. Keeping users on their own streams
// gives nested populations the prefix property and makes a user's report
// independent of which solver selected them.
enum class Stream : std::uint64_t {
    TaskAttributes = 1,
    User = 2,
    Report = 3,
    Bench = 4,
};

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t index = 0) {
    return derive_seed(base, static_cast<std::uint64_t>(stream), index);
}

// mt19937_64 with hand-rolled distributions. The standard distribution
// objects are implementation-defined, which would break byte-identical
// result files across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Box-Muller; the spare value is discarded to keep the draw count per
    // call fixed.
    double normal(double mean, double stddev) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        return mean + stddev * r * std::cos(theta);
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
    }

    // Partial Fisher-Yates: k distinct indices out of [0, population).
    std::vector<int> sample_without_replacement(int population, int k) {
        std::vector<int> pool(population);
        for (int i = 0; i < population; ++i) pool[i] = i;
        std::vector<int> out;
        out.reserve(k);
        for (int i = 0; i < k && i < population; ++i) {
            const auto j = i + static_cast<int>(below(static_cast<std::uint64_t>(population - i)));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace crowdsense
