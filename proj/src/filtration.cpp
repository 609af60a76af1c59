#include "cyltda/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace cyltda {

double meb_radius(Point a, Point b, Point c) {
    // Longest side first; its half-ball covers the third point exactly when
    // the triangle is right/obtuse/degenerate.
    const double ab = squared_distance(a, b);
    const double ac = squared_distance(a, c);
    const double bc = squared_distance(b, c);
    Point p = a, q = b, other = c;
    double longest = ab;
    if (ac > longest) {
        longest = ac;
        p = a;
        q = c;
        other = b;
    }
    if (bc > longest) {
        longest = bc;
        p = b;
        q = c;
        other = a;
    }
    const Point mid{(p.x + q.x) / 2.0, (p.y + q.y) / 2.0};
    const double half_longest = std::sqrt(longest) / 2.0;
    if (squared_distance(mid, other) <= longest / 4.0) return half_longest;

    // Acute: circumradius |AB||AC||BC| / (2 |cross(B-A, C-A)|), which cannot
    // fall below half the longest side (clamp shields roundoff near right
    // triangles so face monotonicity stays exact).
    const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    return std::max(half_longest, std::sqrt(ab * ac * bc) / (2.0 * std::abs(cross)));
}

double filtration_value(std::span<const std::int32_t> vertices, const PointPattern& pattern,
                        ComplexKind kind) {
    const auto& pts = pattern.points;
    switch (vertices.size()) {
        case 1:
            return 0.0;
        case 2:
            return distance(pts[static_cast<std::size_t>(vertices[0])],
                            pts[static_cast<std::size_t>(vertices[1])]) / 2.0;
        case 3: {
            const Point a = pts[static_cast<std::size_t>(vertices[0])];
            const Point b = pts[static_cast<std::size_t>(vertices[1])];
            const Point c = pts[static_cast<std::size_t>(vertices[2])];
            if (kind == ComplexKind::cech) return meb_radius(a, b, c);
            const double m = std::max({squared_distance(a, b), squared_distance(a, c),
                                       squared_distance(b, c)});
            return std::sqrt(m) / 2.0;
        }
        default:
            throw std::invalid_argument("filtration_value: simplex must have 1-3 vertices");
    }
}

namespace {

bool simplex_less(const Simplex& a, const Simplex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.v < b.v;
}

// Cell grid over the pattern for radius-2T candidate pairs.
struct PairGrid {
    explicit PairGrid(const std::vector<Point>& pts, double cell) : cell_size(cell) {
        double lo_x = 0.0, lo_y = 0.0;
        if (!pts.empty()) {
            lo_x = pts[0].x;
            lo_y = pts[0].y;
            for (const Point& p : pts) {
                lo_x = std::min(lo_x, p.x);
                lo_y = std::min(lo_y, p.y);
            }
        }
        x0 = lo_x;
        y0 = lo_y;
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(pts.size()); ++i)
            cells[key(pts[static_cast<std::size_t>(i)])].push_back(i);
    }

    std::int64_t key(Point p) const {
        const auto ix = static_cast<std::int64_t>((p.x - x0) / cell_size);
        const auto iy = static_cast<std::int64_t>((p.y - y0) / cell_size);
        return ix * 0x100000 + iy;
    }

    double cell_size;
    double x0 = 0.0, y0 = 0.0;
    std::unordered_map<std::int64_t, std::vector<std::int32_t>> cells;
};

}  // namespace

FilteredComplex build_complex(const PointPattern& pattern, ComplexKind kind, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("build_complex: truncation T must be positive");

    const auto& pts = pattern.points;
    const auto n = static_cast<std::int32_t>(pts.size());
    FilteredComplex complex;
    complex.kind = kind;
    complex.truncation = T;
    complex.vertex_count = n;

    for (std::int32_t i = 0; i < n; ++i)
        complex.simplices.push_back(Simplex{{i, -1, -1}, 0, 0.0});

    const double diameter = 2.0 * T;
    const double diam2 = diameter * diameter;

    // Forward neighbor lists (j > i, distance <= 2T) via the cell grid.
    std::vector<std::vector<std::int32_t>> nbr(static_cast<std::size_t>(n));
    {
        PairGrid grid(pts, diameter);
        for (std::int32_t i = 0; i < n; ++i) {
            const auto ix = static_cast<std::int64_t>((pts[static_cast<std::size_t>(i)].x - grid.x0) / grid.cell_size);
            const auto iy = static_cast<std::int64_t>((pts[static_cast<std::size_t>(i)].y - grid.y0) / grid.cell_size);
            for (std::int64_t cx = ix - 1; cx <= ix + 1; ++cx)
                for (std::int64_t cy = iy - 1; cy <= iy + 1; ++cy) {
                    const auto it = grid.cells.find(cx * 0x100000 + cy);
                    if (it == grid.cells.end()) continue;
                    for (std::int32_t j : it->second)
                        if (j > i && squared_distance(pts[static_cast<std::size_t>(i)],
                                                      pts[static_cast<std::size_t>(j)]) <= diam2)
                            nbr[static_cast<std::size_t>(i)].push_back(j);
                }
            std::sort(nbr[static_cast<std::size_t>(i)].begin(), nbr[static_cast<std::size_t>(i)].end());
        }
    }

    for (std::int32_t i = 0; i < n; ++i) {
        const auto& ni = nbr[static_cast<std::size_t>(i)];
        for (std::size_t a = 0; a < ni.size(); ++a) {
            const std::int32_t j = ni[a];
            const double dij2 = squared_distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
            complex.simplices.push_back(Simplex{{i, j, -1}, 1, std::sqrt(dij2) / 2.0});

            for (std::size_t b = a + 1; b < ni.size(); ++b) {
                const std::int32_t k = ni[b];
                const double djk2 = squared_distance(pts[static_cast<std::size_t>(j)], pts[static_cast<std::size_t>(k)]);
                if (djk2 > diam2) continue;
                double value;
                if (kind == ComplexKind::cech) {
                    value = meb_radius(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)],
                                       pts[static_cast<std::size_t>(k)]);
                    if (value > T) continue;
                } else {
                    const double dik2 = squared_distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(k)]);
                    value = std::sqrt(std::max({dij2, djk2, dik2})) / 2.0;
                }
                complex.simplices.push_back(Simplex{{i, j, k}, 2, value});
            }
        }
    }

    std::sort(complex.simplices.begin(), complex.simplices.end(), simplex_less);
    return complex;
}

}  // namespace cyltda
