#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "cyltda/point_process.hpp"

namespace cyltda {

enum class NetworkRuleKind { dsf, gilbert };

struct NetworkRule {
    NetworkRuleKind kind = NetworkRuleKind::dsf;
    double radius = 0.0;  // gilbert only
};

/// x-covariant network: nodes sorted by (x, y), with outgoing edges pointing
/// to strictly later nodes in that order (the parent relation). The
/// rightmost node of the spanning forest carries no edge (the formal
/// self-edge is represented as absence).
struct DirectedNetwork {
    PointPattern nodes;
    std::vector<std::vector<std::int32_t>> out_edges;
    NetworkRule rule;
};

/// Component birth/death pairs of the directed sublevel sweep, in window
/// x-coordinates; death == kEssential for never-absorbed components.
struct BranchPair {
    double birth = 0.0;
    double death = kEssential;
    bool essential() const { return death == kEssential; }
};

struct BranchDiagram {
    std::vector<BranchPair> pairs;
    Window window;
};

/// Directed spanning forest: each node is joined to its closest Euclidean
/// neighbor among the nodes strictly later in (x, y) order.
DirectedNetwork build_dsf(const PointPattern& pattern);

/// Gilbert graph at the given radius; each undirected adjacency is stored as
/// an outgoing edge of the (x, y)-smaller endpoint.
DirectedNetwork build_gilbert(const PointPattern& pattern, double radius);

/// Left-to-right sweep: a parentless node births a component at its
/// x-coordinate; a node whose parents lie in k >= 2 components merges them,
/// killing the k-1 younger ones at its x-coordinate (elder rule).
BranchDiagram directed_persistence(const DirectedNetwork& network);

/// #{pairs: birth <= r*n and lifetime >= s}, essential lifetime = infinity.
/// The diagram must come from a window of x-length n centered at 0.
long beta_arrow(const BranchDiagram& diagram, double n, double r, double s);

/// Count of pairs with birth in (b_min, b_max] and lifetime in (l_min, l_max].
long branch_block_count(const BranchDiagram& diagram, double b_min, double b_max,
                        double l_min, double l_max);

/// diam(A) + x-coordinate of the first point right of 1. Changing the
/// configuration beyond this abscissa cannot alter spanning-forest edges of
/// nodes in [-1/2, 1/2] x A. Throws if no point lies right of 1.
double stabilization_radius_dsf(const PointPattern& pattern);

}  // namespace cyltda
