#include "advloop/rng.hpp"

#include <algorithm>
#include <numeric>

namespace advloop::rng {

namespace {
constexpr std::uint32_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                     37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                                     83, 89, 97, 101, 103, 107, 109, 113};
}

double radical_inverse(std::uint64_t index, std::uint32_t base) {
    double inv_base = 1.0 / base;
    double inv = inv_base;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(index % base) * inv;
        index /= base;
        inv *= inv_base;
    }
    return result;
}

std::vector<std::vector<double>> halton_points(std::size_t count, std::size_t dim,
                                               std::uint64_t seed) {
    Pcg rot_rng(hash_combine(seed, 0x48616c746fULL));
    std::vector<double> rotation(dim);
    for (auto& r : rotation) r = rot_rng.next_double();

    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            const std::uint32_t base = kPrimes[d % (sizeof(kPrimes) / sizeof(kPrimes[0]))];
            double v = radical_inverse(i + 1, base) + rotation[d];
            v -= std::floor(v);
            pts[i][d] = v;
        }
    }
    return pts;
}

std::vector<std::vector<double>> latin_hypercube(std::size_t count, std::size_t dim,
                                                 std::uint64_t seed) {
    Pcg rng(hash_combine(seed, 0x4c4853ULL));
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    std::vector<std::size_t> perm(count);
    for (std::size_t d = 0; d < dim; ++d) {
        std::iota(perm.begin(), perm.end(), 0);
        // Fisher-Yates with our own generator for cross-platform determinism
        for (std::size_t i = count; i > 1; --i) {
            const std::size_t j = rng.next_below(static_cast<std::uint32_t>(i));
            std::swap(perm[i - 1], perm[j]);
        }
        for (std::size_t i = 0; i < count; ++i)
            pts[i][d] = (static_cast<double>(perm[i]) + rng.next_double()) /
                        static_cast<double>(count);
    }
    return pts;
}

}  // namespace advloop::rng
