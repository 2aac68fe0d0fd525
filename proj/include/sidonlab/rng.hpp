#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace sidonlab {

/* Seeded randomness for experiments. Uses mt19937_64 raw output only;
   bounded draws are done by rejection here instead of std distributions,
   whose output is implementation-defined. Identical seeds therefore give
   identical samples on every platform, which the report reproducibility
   contract depends on. */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % n;
    }

    // k distinct values from [0, universe), sorted. Floyd's sampling, so the
    // cost is O(k log k) regardless of universe size.
    std::vector<std::uint64_t> sample_distinct(std::uint64_t universe, std::uint64_t k) {
        if (k > universe) k = universe;
        std::set<std::uint64_t> chosen;
        for (std::uint64_t j = universe - k; j < universe; ++j) {
            std::uint64_t t = below(j + 1);
            if (!chosen.insert(t).second) chosen.insert(j);
        }
        return std::vector<std::uint64_t>(chosen.begin(), chosen.end());
    }

    // Stable derived seed for sweep item `key` (splitmix64 finalizer).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t key) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (key + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace sidonlab
