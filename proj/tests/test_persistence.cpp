#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cyltda/betti_oracle.hpp"
#include "cyltda/persistence.hpp"
#include "cyltda/rng.hpp"

using namespace cyltda;

namespace {

PointPattern pattern_of(std::vector<Point> pts) {
    PointPattern p;
    p.points = std::move(pts);
    p.window = Window{-10, 10, -10, 10};
    return p;
}

PointPattern equilateral() {
    return pattern_of({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
}

PointPattern unit_square() { return pattern_of({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

PointPattern random_pattern(std::uint64_t seed, int max_points, double extent) {
    Rng rng(seed);
    PointPattern p;
    p.window = Window{0, extent, 0, extent};
    const auto n = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_points) + 1));
    for (int i = 0; i < n; ++i)
        p.points.push_back({rng.uniform(0.0, extent), rng.uniform(0.0, extent)});
    return p;
}

std::vector<DiagramPoint> sorted_points(PersistenceDiagram d) {
    std::sort(d.points.begin(), d.points.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
    return d.points;
}

bool diagrams_equal(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    const auto pa = sorted_points(a), pb = sorted_points(b);
    if (pa.size() != pb.size() || a.h2_births.size() != b.h2_births.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (pa[i].dim != pb[i].dim || pa[i].birth != pb[i].birth || pa[i].death != pb[i].death)
            return false;
    for (std::size_t i = 0; i < a.h2_births.size(); ++i)
        if (a.h2_births[i] != b.h2_births[i]) return false;
    return true;
}

// Bottleneck-style matching: every point of `a` must match a point of `b`
// (or the diagonal) within eps in sup-norm, bijectively. Small instances.
bool matchable_within(const std::vector<DiagramPoint>& a, const std::vector<DiagramPoint>& b,
                      double eps) {
    const std::size_t n = a.size(), m = b.size();
    auto close = [&](const DiagramPoint& p, const DiagramPoint& q) {
        if (p.essential() != q.essential()) return false;
        if (std::abs(p.birth - q.birth) > eps) return false;
        return p.essential() || std::abs(p.death - q.death) <= eps;
    };
    auto near_diagonal = [&](const DiagramPoint& p) {
        return !p.essential() && p.death - p.birth <= 2 * eps;
    };

    // Augmenting-path bipartite matching, diagonal as a free sink.
    std::vector<int> match_b(m, -1);
    std::vector<char> used;
    std::function<bool(std::size_t)> augment = [&](std::size_t i) -> bool {
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j] || !close(a[i], b[j])) continue;
            used[j] = 1;
            if (match_b[j] < 0 || augment(static_cast<std::size_t>(match_b[j]))) {
                match_b[j] = static_cast<int>(i);
                return true;
            }
        }
        return near_diagonal(a[i]);
    };
    std::size_t matched_to_b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        used.assign(m, 0);
        if (!augment(i)) return false;
    }
    for (std::size_t j = 0; j < m; ++j)
        if (match_b[j] >= 0) ++matched_to_b;
    // Unmatched b-points must be expendable on the diagonal.
    for (std::size_t j = 0; j < m; ++j)
        if (match_b[j] < 0 && !near_diagonal(b[j])) return false;
    return true;
}

}  // namespace

TEST_CASE("analytic diagrams: equilateral triangle") {
    const auto cech = compute_persistence(build_complex(equilateral(), ComplexKind::cech, 1.0));
    const auto pts = sorted_points(cech);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].dim == 0);
    CHECK(pts[0].birth == 0.0);
    CHECK(pts[0].death == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pts[1].death == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pts[2].essential());
    CHECK(pts[3].dim == 1);
    CHECK(pts[3].birth == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pts[3].death == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));

    // VR: the loop dies the moment it is born; zero-persistence pair dropped.
    const auto vr = compute_persistence(build_complex(equilateral(), ComplexKind::vietoris_rips, 1.0));
    for (const DiagramPoint& p : vr.points) CHECK(p.dim == 0);
}

TEST_CASE("analytic diagrams: unit square corners") {
    const auto cech = compute_persistence(build_complex(unit_square(), ComplexKind::cech, 1.0));
    std::vector<DiagramPoint> h1;
    for (const DiagramPoint& p : cech.points)
        if (p.dim == 1) h1.push_back(p);
    REQUIRE(h1.size() == 1);
    CHECK(h1[0].birth == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(h1[0].death == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));

    long h0_finite = 0, h0_essential = 0;
    for (const DiagramPoint& p : cech.points)
        if (p.dim == 0) {
            if (p.essential())
                ++h0_essential;
            else {
                CHECK(p.death == doctest::Approx(0.5).epsilon(1e-12));
                ++h0_finite;
            }
        }
    CHECK(h0_finite == 3);
    CHECK(h0_essential == 1);

    // All four triangles enter at sqrt(2)/2; one of them creates a 2-cycle.
    REQUIRE(cech.h2_births.size() == 1);
    CHECK(cech.h2_births[0] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));
}

TEST_CASE("union-find H0 path agrees with full reduction") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const PointPattern p = random_pattern(seed, 35, 4.0);
        const double T = 0.3 + 0.1 * static_cast<double>(seed % 6);
        for (ComplexKind kind : {ComplexKind::cech, ComplexKind::vietoris_rips}) {
            const auto complex = build_complex(p, kind, T);
            CHECK(diagrams_equal(compute_persistence(complex),
                                 compute_persistence_by_reduction(complex)));
        }
    }
}

TEST_CASE("persistent_betti: unit-square queries") {
    const auto d = compute_persistence(build_complex(unit_square(), ComplexKind::cech, 1.0));
    CHECK(persistent_betti(d, 1, 0.6, 0.65) == 1);
    CHECK(persistent_betti(d, 1, 0.6, 0.8) == 0);
    CHECK(persistent_betti(d, 0, 0.0, 0.0) == 4);  // all vertices alive at 0
    CHECK_THROWS_AS(persistent_betti(d, 0, 0.5, 0.2), std::invalid_argument);
}

TEST_CASE("oracle: closed-form cases") {
    const auto one = build_complex(pattern_of({{0.5, 0.5}}), ComplexKind::cech, 1.0);
    CHECK(persistent_betti_oracle(one, 0, 0.0, 0.0) == 1);
    CHECK(persistent_betti_oracle(one, 0, 0.3, 0.9) == 1);
    CHECK(persistent_betti_oracle(one, 1, 0.3, 0.9) == 0);

    const auto two = build_complex(pattern_of({{0, 0}, {1, 0}}), ComplexKind::cech, 1.0);
    CHECK(persistent_betti_oracle(two, 0, 0.2, 0.6) == 1);  // merged by s = 0.6
    CHECK(persistent_betti_oracle(two, 0, 0.2, 0.4) == 2);

    CHECK_THROWS_AS(persistent_betti_oracle(two, 0, 0.6, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(persistent_betti_oracle(two, 0, 0.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(persistent_betti_oracle(two, 2, 0.2, 0.4), std::invalid_argument);
}

TEST_CASE("oracle equivalence on random small patterns") {
    // Quick version of the acceptance criterion (60 patterns here).
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const PointPattern p = random_pattern(seed, 10, 5.0);
        for (ComplexKind kind : {ComplexKind::cech, ComplexKind::vietoris_rips}) {
            const auto complex = build_complex(p, kind, 1.0);
            const auto diagram = compute_persistence(complex);
            for (int q : {0, 1})
                for (double r : grid)
                    for (double s : grid) {
                        if (r > s) continue;
                        CHECK(persistent_betti(diagram, q, r, s) ==
                              persistent_betti_oracle(complex, q, r, s));
                    }
        }
    }
}

TEST_CASE("euler characteristic at every level") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const PointPattern p = random_pattern(seed, 30, 3.0);
        if (p.points.empty()) continue;
        for (ComplexKind kind : {ComplexKind::cech, ComplexKind::vietoris_rips}) {
            const auto complex = build_complex(p, kind, 0.8);
            const auto diagram = compute_persistence(complex);
            for (double t : {0.0, 0.2, 0.4, 0.6, 0.8}) {
                long v = 0, e = 0, f = 0;
                for (const Simplex& s : complex.simplices) {
                    if (s.value > t) continue;
                    if (s.dim == 0) ++v;
                    if (s.dim == 1) ++e;
                    if (s.dim == 2) ++f;
                }
                const long beta0 = persistent_betti(diagram, 0, t, t);
                const long beta1 = persistent_betti(diagram, 1, t, t);
                const long beta2 = static_cast<long>(
                    std::count_if(diagram.h2_births.begin(), diagram.h2_births.end(),
                                  [&](double b) { return b <= t; }));
                CHECK(v - e + f == beta0 - beta1 + beta2);
            }
        }
    }
}

TEST_CASE("block_count: examples, additivity, four-corner increment") {
    const auto d = compute_persistence(build_complex(unit_square(), ComplexKind::cech, 1.0));
    CHECK(block_count(d, 1, {0.4, 0.6, 0.6, 0.8}) == 1);  // contains (0.5, 0.7071)
    CHECK(block_count(d, 1, {0.8, 0.9, 0.9, 1.0}) == 0);

    // Additivity over a disjoint split.
    CHECK(block_count(d, 1, {0.4, 0.6, 0.6, 0.8}) ==
          block_count(d, 1, {0.4, 0.5, 0.6, 0.8}) + block_count(d, 1, {0.5, 0.6, 0.6, 0.8}));

    // Four-corner increment of persistent_betti on blocks above the diagonal.
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const PointPattern p = random_pattern(static_cast<std::uint64_t>(rep), 25, 3.0);
        const auto complex = build_complex(p, ComplexKind::cech, 1.0);
        const auto diagram = compute_persistence(complex);
        double b0 = rng.uniform(0.0, 0.5), b1 = rng.uniform(0.0, 0.5);
        if (b0 > b1) std::swap(b0, b1);
        double d0 = rng.uniform(b1, 1.0), d1 = rng.uniform(b1, 1.0);
        if (d0 > d1) std::swap(d0, d1);
        for (int q : {0, 1}) {
            const long inc = persistent_betti(diagram, q, b1, d0) - persistent_betti(diagram, q, b1, d1) -
                             persistent_betti(diagram, q, b0, d0) + persistent_betti(diagram, q, b0, d1);
            CHECK(block_count(diagram, q, {b0, b1, d0, d1}) == inc);
        }
    }
}

TEST_CASE("stability: small perturbations move diagram points by at most epsilon") {
    const double eps = 1e-4;
    Rng rng(17);
    for (int rep = 0; rep < 40; ++rep) {
        PointPattern p = random_pattern(static_cast<std::uint64_t>(rep) + 500, 8, 3.0);
        if (p.points.size() < 3) continue;
        PointPattern q = p;
        for (Point& pt : q.points) {
            const double angle = rng.uniform(0.0, 2 * M_PI);
            const double radius = eps * rng.uniform();
            pt.x += radius * std::cos(angle);
            pt.y += radius * std::sin(angle);
        }
        // T well past the largest possible filtration value, so no feature
        // sits near the truncation boundary.
        for (ComplexKind kind : {ComplexKind::cech, ComplexKind::vietoris_rips}) {
            const auto da = compute_persistence(build_complex(p, kind, 3.0));
            const auto db = compute_persistence(build_complex(q, kind, 3.0));
            for (int dim : {0, 1}) {
                std::vector<DiagramPoint> a, b;
                for (const auto& pt : da.points)
                    if (pt.dim == dim) a.push_back(pt);
                for (const auto& pt : db.points)
                    if (pt.dim == dim) b.push_back(pt);
                CHECK(matchable_within(a, b, eps + 1e-12));
            }
        }
    }
}
