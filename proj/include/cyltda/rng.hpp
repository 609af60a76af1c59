#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cyltda {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Random stream with a counter-based splitter. A root seed plus a list of
// stream tags (model id, replication index, ...) yields an independent,
// reproducible substream regardless of thread scheduling. Variates are
// generated from the raw mt19937_64 output so the sequences do not depend
// on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng derive(std::uint64_t root, std::initializer_list<std::uint64_t> tags) {
        std::uint64_t s = splitmix64(root);
        for (std::uint64_t t : tags) {
            s = splitmix64(s ^ 0x9e3779b97f4a7c15ull);
            s = splitmix64(s + t);
        }
        return Rng(s);
    }

    std::uint64_t bits() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform in {0, ..., n-1} by rejection (exact, unbiased).
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Poisson count by the product method; means above 60 are split into
    /// independent chunks to avoid exp() underflow.
    long poisson(double mean) {
        long total = 0;
        while (mean > 60.0) {
            total += poisson_small(30.0);
            mean -= 30.0;
        }
        return total + poisson_small(mean);
    }

    /// Standard normal (Marsaglia polar, spare cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    long poisson_small(double mean) {
        if (mean <= 0.0) return 0;
        const double threshold = std::exp(-mean);
        long k = 0;
        double p = uniform();
        while (p > threshold) {
            ++k;
            p *= uniform();
        }
        return k;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cyltda
