#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace advloop::rng {

/// splitmix64 step; the workhorse behind all deterministic randomness here.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    return splitmix64(s);
}

/// Small counter-based generator: identical sequences regardless of
/// platform or evaluation order.
class Pcg {
public:
    explicit Pcg(std::uint64_t seed) : state_(seed) {
        // warm up so that small seeds diverge immediately
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

    /// Standard normal via Box-Muller.
    double next_normal() {
        double u1 = next_double();
        const double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t state_;
};

/// Radical-inverse (van der Corput) in the given prime base.
double radical_inverse(std::uint64_t index, std::uint32_t base);

/// Halton low-discrepancy point set in [0,1)^dim with a seeded
/// Cranley-Patterson rotation so different seeds explore differently.
std::vector<std::vector<double>> halton_points(std::size_t count, std::size_t dim,
                                               std::uint64_t seed);

/// Seeded Latin hypercube sample in [0,1)^dim.
std::vector<std::vector<double>> latin_hypercube(std::size_t count, std::size_t dim,
                                                 std::uint64_t seed);

}  // namespace advloop::rng
