#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cyltda/point_process.hpp"

namespace cyltda {

enum class ComplexKind { cech, vietoris_rips };

/// Simplex of dimension 0, 1 or 2 with its filtration time. Unused vertex
/// slots hold -1; used slots are sorted ascending.
struct Simplex {
    std::array<std::int32_t, 3> v{-1, -1, -1};
    std::int8_t dim = 0;
    double value = 0.0;
};

/// Simplices sorted by (value, dim, vertex tuple); every prefix closed under
/// faces, all values <= truncation.
struct FilteredComplex {
    std::vector<Simplex> simplices;
    ComplexKind kind = ComplexKind::cech;
    double truncation = 0.0;
    std::int32_t vertex_count = 0;
};

/// Radius of the smallest ball containing the three points: circumradius for
/// acute triangles, half the longest side otherwise (collinear included).
double meb_radius(Point a, Point b, Point c);

/// 0 for vertices, half the distance for edges, min-enclosing-ball radius
/// (Cech) or half the diameter (Vietoris-Rips) for triangles.
double filtration_value(std::span<const std::int32_t> vertices, const PointPattern& pattern,
                        ComplexKind kind);

/// All simplices of dimension <= 2 with filtration value <= T.
FilteredComplex build_complex(const PointPattern& pattern, ComplexKind kind, double T);

}  // namespace cyltda
