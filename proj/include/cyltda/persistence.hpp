#pragma once

#include <cstdint>
#include <vector>

#include "cyltda/filtration.hpp"

namespace cyltda {

struct DiagramPoint {
    std::int8_t dim = 0;  // 0 or 1
    double birth = 0.0;
    double death = 0.0;  // kEssential when never killed below the truncation
    bool essential() const { return death == kEssential; }
};

/// Birth/death multiset of H0 and H1 features. Zero-persistence pairs are
/// dropped. h2_births holds the values of positive triangles (2-cycles that
/// nothing can bound in a dimension-2 complex); the Euler identity needs
/// them even though they are not diagram points.
struct PersistenceDiagram {
    std::vector<DiagramPoint> points;
    std::vector<double> h2_births;
};

/// H0 by a union-find sweep over the edges, H1 by GF(2) column reduction of
/// the triangle boundary matrix. Agrees with compute_persistence_by_reduction.
PersistenceDiagram compute_persistence(const FilteredComplex& complex);

/// Full boundary-matrix reduction in filtration order (with clearing);
/// reference path for the union-find fast path.
PersistenceDiagram compute_persistence_by_reduction(const FilteredComplex& complex);

/// #{dim-q points: birth <= r, death > s}; essential death counts as infinity.
long persistent_betti(const PersistenceDiagram& diagram, int q, double r, double s);

/// Half-open parameter rectangle (b_min, b_max] x (d_min, d_max].
struct Block {
    double b_min = 0.0;
    double b_max = 0.0;
    double d_min = 0.0;
    double d_max = 0.0;
};

/// Number of dim-q diagram points inside the block; the four-corner
/// increment of (r, s) -> persistent_betti.
long block_count(const PersistenceDiagram& diagram, int q, const Block& block);

}  // namespace cyltda
