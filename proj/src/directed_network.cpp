#include "cyltda/directed_network.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace cyltda {

namespace {

PointPattern sorted_by_x(const PointPattern& pattern) {
    PointPattern out = pattern;
    std::sort(out.points.begin(), out.points.end(), lex_less);
    return out;
}

void require_sorted(const PointPattern& nodes) {
    for (std::size_t i = 1; i < nodes.points.size(); ++i)
        if (!lex_less(nodes.points[i - 1], nodes.points[i]))
            throw std::invalid_argument("directed network: nodes not strictly (x, y)-sorted");
}

}  // namespace

DirectedNetwork build_dsf(const PointPattern& pattern) {
    if (pattern.points.empty()) throw std::invalid_argument("build_dsf: empty pattern");

    DirectedNetwork net{sorted_by_x(pattern), {}, NetworkRule{NetworkRuleKind::dsf, 0.0}};
    require_sorted(net.nodes);
    const auto& pts = net.nodes.points;
    const auto n = static_cast<std::int32_t>(pts.size());
    net.out_edges.assign(static_cast<std::size_t>(n), {});

    for (std::int32_t i = 0; i + 1 < n; ++i) {
        std::int32_t best = -1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::int32_t j = i + 1; j < n; ++j) {
            const double dx = pts[j].x - pts[i].x;
            if (dx * dx >= best_d2) break;  // later candidates only get farther
            const double d2 = squared_distance(pts[i], pts[j]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = j;
            }
        }
        net.out_edges[static_cast<std::size_t>(i)].push_back(best);
    }
    return net;
}

DirectedNetwork build_gilbert(const PointPattern& pattern, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("build_gilbert: radius must be positive");

    DirectedNetwork net{sorted_by_x(pattern), {}, NetworkRule{NetworkRuleKind::gilbert, radius}};
    require_sorted(net.nodes);
    const auto& pts = net.nodes.points;
    const auto n = static_cast<std::int32_t>(pts.size());
    net.out_edges.assign(static_cast<std::size_t>(n), {});

    const double r2 = radius * radius;
    for (std::int32_t i = 0; i < n; ++i) {
        for (std::int32_t j = i + 1; j < n; ++j) {
            const double dx = pts[j].x - pts[i].x;
            if (dx * dx >= r2) break;
            if (squared_distance(pts[i], pts[j]) < r2)
                net.out_edges[static_cast<std::size_t>(i)].push_back(j);
        }
    }
    return net;
}

BranchDiagram directed_persistence(const DirectedNetwork& network) {
    require_sorted(network.nodes);
    const auto& pts = network.nodes.points;
    const auto n = static_cast<std::int32_t>(pts.size());

    std::vector<std::vector<std::int32_t>> parents(static_cast<std::size_t>(n));
    for (std::int32_t u = 0; u < n; ++u)
        for (std::int32_t v : network.out_edges[static_cast<std::size_t>(u)]) {
            if (v <= u || v >= n) throw std::invalid_argument("directed network: edge target must be a later node");
            parents[static_cast<std::size_t>(v)].push_back(u);
        }

    std::vector<std::int32_t> comp(static_cast<std::size_t>(n), -1);
    std::vector<double> birth(static_cast<std::size_t>(n), 0.0);

    auto find = [&](std::int32_t v) {
        std::int32_t root = v;
        while (comp[static_cast<std::size_t>(root)] != root) root = comp[static_cast<std::size_t>(root)];
        while (comp[static_cast<std::size_t>(v)] != root) {
            const std::int32_t next = comp[static_cast<std::size_t>(v)];
            comp[static_cast<std::size_t>(v)] = root;
            v = next;
        }
        return root;
    };

    BranchDiagram diagram{{}, network.nodes.window};
    std::vector<std::int32_t> roots;
    std::vector<std::int32_t> birth_nodes;

    for (std::int32_t v = 0; v < n; ++v) {
        const auto& ps = parents[static_cast<std::size_t>(v)];
        if (ps.empty()) {
            comp[static_cast<std::size_t>(v)] = v;
            birth[static_cast<std::size_t>(v)] = pts[static_cast<std::size_t>(v)].x;
            birth_nodes.push_back(v);
            continue;
        }
        roots.clear();
        for (std::int32_t u : ps) roots.push_back(find(u));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

        std::int32_t survivor = roots.front();
        for (std::int32_t r : roots)
            if (birth[static_cast<std::size_t>(r)] < birth[static_cast<std::size_t>(survivor)]) survivor = r;
        for (std::int32_t r : roots) {
            if (r == survivor) continue;
            assert(birth[static_cast<std::size_t>(survivor)] <= birth[static_cast<std::size_t>(r)]);
            diagram.pairs.push_back({birth[static_cast<std::size_t>(r)], pts[static_cast<std::size_t>(v)].x});
            comp[static_cast<std::size_t>(r)] = survivor;
        }
        comp[static_cast<std::size_t>(v)] = survivor;
    }

    for (std::int32_t b : birth_nodes)
        if (find(b) == b) diagram.pairs.push_back({birth[static_cast<std::size_t>(b)], kEssential});

    std::sort(diagram.pairs.begin(), diagram.pairs.end(), [](const BranchPair& a, const BranchPair& b) {
        return a.birth < b.birth || (a.birth == b.birth && a.death < b.death);
    });
    return diagram;
}

long beta_arrow(const BranchDiagram& diagram, double n, double r, double s) {
    if (!(n > 0.0)) throw std::invalid_argument("beta_arrow: window length must be positive");
    if (!(r >= -0.5 && r <= 0.5)) throw std::invalid_argument("beta_arrow: r must lie in [-1/2, 1/2]");
    if (!(s >= 0.0)) throw std::invalid_argument("beta_arrow: s must be nonnegative");

    long count = 0;
    for (const BranchPair& p : diagram.pairs)
        if (p.birth <= r * n && p.death - p.birth >= s) ++count;
    return count;
}

long branch_block_count(const BranchDiagram& diagram, double b_min, double b_max,
                        double l_min, double l_max) {
    long count = 0;
    for (const BranchPair& p : diagram.pairs) {
        const double life = p.death - p.birth;
        if (p.birth > b_min && p.birth <= b_max && life > l_min && life <= l_max) ++count;
    }
    return count;
}

double stabilization_radius_dsf(const PointPattern& pattern) {
    double first_right = std::numeric_limits<double>::infinity();
    for (const Point& p : pattern.points)
        if (p.x >= 1.0) first_right = std::min(first_right, p.x);
    if (!std::isfinite(first_right))
        throw std::runtime_error("stabilization_radius_dsf: no point right of 1 (sampling extent too small)");
    return pattern.window.height() + first_right;
}

}  // namespace cyltda
