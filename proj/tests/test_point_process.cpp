#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cyltda/parallel.hpp"
#include "cyltda/point_process.hpp"

using namespace cyltda;

namespace {

bool in_window_all(const PointPattern& p) {
    return std::all_of(p.points.begin(), p.points.end(),
                       [&](Point q) { return p.window.contains(q); });
}

bool no_duplicates(const PointPattern& p) {
    std::set<std::pair<double, double>> seen;
    for (Point q : p.points)
        if (!seen.insert({q.x, q.y}).second) return false;
    return true;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

struct Moments {
    double mean, variance;
};

Moments moments(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= static_cast<double>(xs.size() - 1);
    return {m, v};
}

}  // namespace

TEST_CASE("poisson sampler: count moments match lambda |W|") {
    const Window w{-5.0, 5.0, 0.0, 5.0};  // 10x5
    const long reps = 10000;
    std::vector<double> counts(reps);
    for (long i = 0; i < reps; ++i)
        counts[static_cast<std::size_t>(i)] =
            static_cast<double>(sample_poisson(w, 1.0, 100 + static_cast<std::uint64_t>(i)).points.size());
    const Moments m = moments(counts);
    CHECK(std::abs(m.mean - 50.0) < 1.0);
    // Var = lambda |W| as well; 3 standard errors of the variance estimate.
    const double se_var = 50.0 * std::sqrt(2.0 / static_cast<double>(reps - 1));
    CHECK(std::abs(m.variance - 50.0) < 3.0 * se_var + 1.0);
}

TEST_CASE("poisson sampler: mean count 150 on the 15x5 window") {
    const Window w = Window::centered(15.0, 5.0);
    const long reps = 4000;
    double sum = 0.0;
    for (long i = 0; i < reps; ++i)
        sum += static_cast<double>(sample_poisson(w, 2.0, 7000 + static_cast<std::uint64_t>(i)).points.size());
    CHECK(std::abs(sum / static_cast<double>(reps) - 150.0) < 1.0);
}

TEST_CASE("poisson sampler: tiny intensity gives the void probability") {
    const Window w{0.0, 1.0, 0.0, 1.0};
    int empty = 0;
    for (int i = 0; i < 2000; ++i)
        empty += sample_poisson(w, 1e-4, static_cast<std::uint64_t>(i)).points.empty() ? 1 : 0;
    CHECK(empty >= 1995);  // P(empty) = exp(-1e-4)
}

TEST_CASE("poisson sampler: containment, distinctness, determinism") {
    const Window w = Window::centered(15.0, 5.0);
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 99ull}) {
        const PointPattern p = sample_poisson(w, 2.0, seed);
        CHECK(in_window_all(p));
        CHECK(no_duplicates(p));
        CHECK(p.seed == seed);
    }

    const PointPattern a = sample_poisson(w, 2.0, 42);
    const PointPattern b = sample_poisson(w, 2.0, 42);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].x == b.points[i].x);
        CHECK(a.points[i].y == b.points[i].y);
    }

    // Thread count must not affect per-seed output.
    std::vector<std::size_t> counts(16);
    parallel_for(16, 4, [&](std::int64_t i) {
        counts[static_cast<std::size_t>(i)] =
            sample_poisson(w, 2.0, static_cast<std::uint64_t>(i)).points.size();
    });
    for (int i = 0; i < 16; ++i)
        CHECK(counts[static_cast<std::size_t>(i)] ==
              sample_poisson(w, 2.0, static_cast<std::uint64_t>(i)).points.size());
}

TEST_CASE("poisson sampler: parameter validation") {
    CHECK_THROWS_AS(sample_poisson(Window{0, 1, 0, 1}, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_poisson(Window{0, 1, 0, 1}, -2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_poisson(Window{1, 0, 0, 1}, 1.0, 1), std::invalid_argument);
}

TEST_CASE("matern sampler: retained intensity is kappa mu") {
    const Window w = Window::centered(15.0, 5.0);

    SUBCASE("MatC(2, 0.5, 1): mean count 150") {
        const long reps = 4000;
        std::vector<double> counts(reps);
        for (long i = 0; i < reps; ++i)
            counts[static_cast<std::size_t>(i)] = static_cast<double>(
                sample_matern(w, {2.0, 0.5, 1.0}, 20000 + static_cast<std::uint64_t>(i)).points.size());
        const Moments m = moments(counts);
        const double se = std::sqrt(m.variance / static_cast<double>(reps));
        CHECK(std::abs(m.mean - 150.0) < 4.0 * se + 0.5);
    }

    SUBCASE("MatC(1.6, 0.5, 1): empirical intensity 1.6 within 0.05") {
        const long reps = 10000;
        double sum = 0.0;
        for (long i = 0; i < reps; ++i)
            sum += estimate_intensity(sample_matern(w, {1.6, 0.5, 1.0}, 30000 + static_cast<std::uint64_t>(i)));
        CHECK(std::abs(sum / static_cast<double>(reps) - 1.6) < 0.05);
    }

    SUBCASE("mu -> 0 limit: empty pattern") {
        for (int i = 0; i < 100; ++i)
            CHECK(sample_matern(w, {2.0, 0.5, 1e-12}, static_cast<std::uint64_t>(i)).points.empty());
    }

    SUBCASE("containment and distinctness") {
        for (std::uint64_t seed : {5ull, 6ull, 7ull}) {
            const PointPattern p = sample_matern(w, {2.0, 0.5, 1.0}, seed);
            CHECK(in_window_all(p));
            CHECK(no_duplicates(p));
        }
    }

    CHECK_THROWS_AS(sample_matern(w, {0.0, 0.5, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_matern(w, {1.0, -0.5, 1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_matern(w, {1.0, 0.5, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("strauss sampler: gamma = 1 is Poisson(beta)") {
    const Window w{-5.0, 5.0, 0.0, 5.0};  // 10x5
    const long reps = 5000;
    std::vector<double> strauss_counts(reps), poisson_counts(reps);
    double strauss_mean = 0.0;
    for (long i = 0; i < reps; ++i) {
        const StraussParams sp{2.0, 1.0, 0.5, 2000, 0};
        const auto s = sample_strauss(w, sp, 40000 + static_cast<std::uint64_t>(i));
        strauss_counts[static_cast<std::size_t>(i)] = static_cast<double>(s.points.size());
        strauss_mean += static_cast<double>(s.points.size());
        poisson_counts[static_cast<std::size_t>(i)] = static_cast<double>(
            sample_poisson(w, 2.0, 50000 + static_cast<std::uint64_t>(i)).points.size());
    }
    CHECK(std::abs(strauss_mean / static_cast<double>(reps) - 100.0) < 2.0);
    CHECK(ks_two_sample(strauss_counts, poisson_counts) <= 0.03);
}

TEST_CASE("strauss sampler: gamma = 0 is hard-core") {
    const Window w{-5.0, 5.0, 0.0, 5.0};
    const StraussParams sp{2.0, 0.0, 0.7, 200000, 0};
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const PointPattern p = sample_strauss(w, sp, seed);
        CHECK(!p.points.empty());
        for (std::size_t a = 0; a < p.points.size(); ++a)
            for (std::size_t b = a + 1; b < p.points.size(); ++b)
                CHECK(squared_distance(p.points[a], p.points[b]) >= 0.7 * 0.7);
    }
}

TEST_CASE("strauss sampler: Str(4.0, 0.6, 0.5) has intensity near 2") {
    const Window w = Window::centered(15.0, 5.0);
    const StraussParams sp{4.0, 0.6, 0.5, 800000, 0};
    const int reps = 50;
    double sum = 0.0;
    for (int i = 0; i < reps; ++i)
        sum += estimate_intensity(sample_strauss(w, sp, 60000 + static_cast<std::uint64_t>(i)));
    const double intensity = sum / reps;
    CHECK(intensity > 1.8);
    CHECK(intensity < 2.2);
}

TEST_CASE("strauss sampler: steps = 0 returns the initial Poisson state") {
    const Window w{-5.0, 5.0, 0.0, 5.0};
    const long reps = 3000;
    double sum = 0.0;
    for (long i = 0; i < reps; ++i) {
        const auto p = sample_strauss(w, {2.0, 0.3, 0.5, 0, 0}, 70000 + static_cast<std::uint64_t>(i));
        sum += static_cast<double>(p.points.size());
    }
    CHECK(std::abs(sum / static_cast<double>(reps) - 100.0) < 1.5);
}

TEST_CASE("strauss sampler: determinism and validation") {
    const Window w{-5.0, 5.0, 0.0, 5.0};
    const StraussParams sp{2.0, 0.6, 0.5, 5000, 100};
    const auto a = sample_strauss(w, sp, 11);
    const auto b = sample_strauss(w, sp, 11);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].x == b.points[i].x);
        CHECK(a.points[i].y == b.points[i].y);
    }
    CHECK(in_window_all(a));
    CHECK(no_duplicates(a));

    CHECK_THROWS_AS(sample_strauss(w, {0.0, 0.5, 0.5, 10, 0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_strauss(w, {1.0, 1.5, 0.5, 10, 0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_strauss(w, {1.0, 0.5, 0.0, 10, 0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_strauss(w, {1.0, 0.5, 0.5, 10, 20}, 1), std::invalid_argument);
}

TEST_CASE("estimate_intensity") {
    PointPattern p;
    p.window = Window::centered(15.0, 5.0);
    p.points.assign(150, Point{0.0, 1.0});
    CHECK(estimate_intensity(p) == doctest::Approx(2.0));
    p.points.assign(75, Point{0.0, 1.0});
    CHECK(estimate_intensity(p) == doctest::Approx(1.0));
    p.points.clear();
    CHECK(estimate_intensity(p) == 0.0);
}
