#include "cyltda/persistence.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace cyltda {

namespace {

struct SplitComplex {
    // Positions of dim-d simplices within the sorted complex are themselves
    // sorted, so local indices (per dimension) respect filtration order.
    std::vector<std::int32_t> vertex_at;                  // local vertex id -> vertex label
    std::vector<std::int32_t> vertex_local;               // vertex label -> local id
    std::vector<std::array<std::int32_t, 2>> edges;       // vertex labels
    std::vector<double> edge_value;
    std::vector<std::array<std::int32_t, 3>> tri_edges;   // local edge ids, ascending
    std::vector<double> tri_value;
};

SplitComplex split(const FilteredComplex& complex) {
    SplitComplex out;
    out.vertex_local.assign(static_cast<std::size_t>(complex.vertex_count), -1);
    std::unordered_map<std::int64_t, std::int32_t> edge_id;

    for (const Simplex& s : complex.simplices) {
        switch (s.dim) {
            case 0: {
                out.vertex_local[static_cast<std::size_t>(s.v[0])] =
                    static_cast<std::int32_t>(out.vertex_at.size());
                out.vertex_at.push_back(s.v[0]);
                break;
            }
            case 1: {
                const auto id = static_cast<std::int32_t>(out.edges.size());
                edge_id[(static_cast<std::int64_t>(s.v[0]) << 32) | static_cast<std::uint32_t>(s.v[1])] = id;
                out.edges.push_back({s.v[0], s.v[1]});
                out.edge_value.push_back(s.value);
                break;
            }
            case 2: {
                auto lookup = [&](std::int32_t a, std::int32_t b) {
                    const auto it = edge_id.find((static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b));
                    if (it == edge_id.end())
                        throw std::invalid_argument("compute_persistence: triangle face missing from complex");
                    return it->second;
                };
                std::array<std::int32_t, 3> f{lookup(s.v[0], s.v[1]), lookup(s.v[0], s.v[2]),
                                              lookup(s.v[1], s.v[2])};
                std::sort(f.begin(), f.end());
                if (f[2] >= static_cast<std::int32_t>(out.edges.size()))
                    throw std::invalid_argument("compute_persistence: faces must precede cofaces");
                out.tri_edges.push_back(f);
                out.tri_value.push_back(s.value);
                break;
            }
            default:
                throw std::invalid_argument("compute_persistence: unsupported simplex dimension");
        }
    }
    return out;
}

// Reduce the triangle columns over edge pivots. Returns for every edge the
// index of the triangle that killed it (-1 if none) and flags positive
// triangles (columns that reduced to zero).
struct TriangleReduction {
    std::vector<std::int32_t> edge_killed_by;
    std::vector<char> triangle_positive;
};

TriangleReduction reduce_triangles(const SplitComplex& sc) {
    TriangleReduction out;
    out.edge_killed_by.assign(sc.edges.size(), -1);
    out.triangle_positive.assign(sc.tri_edges.size(), 0);

    std::vector<std::int32_t> owner(sc.edges.size(), -1);  // pivot edge -> column
    std::vector<std::vector<std::int32_t>> columns(sc.tri_edges.size());
    std::vector<std::int32_t> work, merged;

    for (std::size_t t = 0; t < sc.tri_edges.size(); ++t) {
        work.assign(sc.tri_edges[t].begin(), sc.tri_edges[t].end());
        while (!work.empty()) {
            const std::int32_t low = work.back();
            const std::int32_t other = owner[static_cast<std::size_t>(low)];
            if (other < 0) break;
            // Symmetric difference with the column owning this pivot.
            const auto& oc = columns[static_cast<std::size_t>(other)];
            merged.clear();
            std::set_symmetric_difference(work.begin(), work.end(), oc.begin(), oc.end(),
                                          std::back_inserter(merged));
            work.swap(merged);
        }
        if (work.empty()) {
            out.triangle_positive[t] = 1;
        } else {
            const std::int32_t low = work.back();
            owner[static_cast<std::size_t>(low)] = static_cast<std::int32_t>(t);
            out.edge_killed_by[static_cast<std::size_t>(low)] = static_cast<std::int32_t>(t);
            columns[t] = work;
        }
    }
    return out;
}

void push_point(PersistenceDiagram& d, int dim, double birth, double death) {
    if (birth == death) return;  // zero-persistence pairs carry no information
    d.points.push_back({static_cast<std::int8_t>(dim), birth, death});
}

void finish(PersistenceDiagram& d) {
    std::sort(d.points.begin(), d.points.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    });
    std::sort(d.h2_births.begin(), d.h2_births.end());
}

}  // namespace

PersistenceDiagram compute_persistence(const FilteredComplex& complex) {
    const SplitComplex sc = split(complex);
    PersistenceDiagram diagram;

    // H0: union-find over edges in filtration order; a merging edge kills the
    // component at its value (all vertices are born at 0).
    std::vector<std::int32_t> parent(sc.vertex_at.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<std::int32_t>(i);
    auto find = [&](std::int32_t v) {
        std::int32_t root = v;
        while (parent[static_cast<std::size_t>(root)] != root) root = parent[static_cast<std::size_t>(root)];
        while (parent[static_cast<std::size_t>(v)] != root) {
            const std::int32_t next = parent[static_cast<std::size_t>(v)];
            parent[static_cast<std::size_t>(v)] = root;
            v = next;
        }
        return root;
    };

    std::vector<char> edge_creates_cycle(sc.edges.size(), 0);
    std::size_t merges = 0;
    for (std::size_t e = 0; e < sc.edges.size(); ++e) {
        const std::int32_t ru = find(sc.vertex_local[static_cast<std::size_t>(sc.edges[e][0])]);
        const std::int32_t rv = find(sc.vertex_local[static_cast<std::size_t>(sc.edges[e][1])]);
        if (ru == rv) {
            edge_creates_cycle[e] = 1;
        } else {
            parent[static_cast<std::size_t>(std::max(ru, rv))] = std::min(ru, rv);
            ++merges;
            push_point(diagram, 0, 0.0, sc.edge_value[e]);
        }
    }
    for (std::size_t c = merges; c < sc.vertex_at.size(); ++c)
        diagram.points.push_back({0, 0.0, kEssential});

    // H1: triangle reduction pairs a positive edge with the triangle that
    // fills its cycle; unpaired cycle edges are essential below truncation.
    const TriangleReduction red = reduce_triangles(sc);
    for (std::size_t e = 0; e < sc.edges.size(); ++e) {
        if (!edge_creates_cycle[e]) continue;
        const std::int32_t t = red.edge_killed_by[e];
        if (t < 0)
            diagram.points.push_back({1, sc.edge_value[e], kEssential});
        else
            push_point(diagram, 1, sc.edge_value[e], sc.tri_value[static_cast<std::size_t>(t)]);
    }
    for (std::size_t t = 0; t < sc.tri_edges.size(); ++t)
        if (red.triangle_positive[t]) diagram.h2_births.push_back(sc.tri_value[t]);

    finish(diagram);
    return diagram;
}

PersistenceDiagram compute_persistence_by_reduction(const FilteredComplex& complex) {
    const SplitComplex sc = split(complex);
    PersistenceDiagram diagram;

    const TriangleReduction red = reduce_triangles(sc);
    for (std::size_t e = 0; e < sc.edges.size(); ++e)
        if (red.edge_killed_by[e] >= 0)
            push_point(diagram, 1, sc.edge_value[e],
                       sc.tri_value[static_cast<std::size_t>(red.edge_killed_by[e])]);
    for (std::size_t t = 0; t < sc.tri_edges.size(); ++t)
        if (red.triangle_positive[t]) diagram.h2_births.push_back(sc.tri_value[t]);

    // Edge columns over vertex pivots. Clearing: edges paired above are known
    // positive and are skipped outright.
    std::vector<std::int32_t> owner(sc.vertex_at.size(), -1);
    std::vector<std::vector<std::int32_t>> columns(sc.edges.size());
    std::vector<char> vertex_paired(sc.vertex_at.size(), 0);
    std::vector<std::int32_t> work, merged;
    for (std::size_t e = 0; e < sc.edges.size(); ++e) {
        if (red.edge_killed_by[e] >= 0) continue;  // cleared
        const std::int32_t a = sc.vertex_local[static_cast<std::size_t>(sc.edges[e][0])];
        const std::int32_t b = sc.vertex_local[static_cast<std::size_t>(sc.edges[e][1])];
        work = {std::min(a, b), std::max(a, b)};
        while (!work.empty()) {
            const std::int32_t low = work.back();
            const std::int32_t other = owner[static_cast<std::size_t>(low)];
            if (other < 0) break;
            const auto& oc = columns[static_cast<std::size_t>(other)];
            merged.clear();
            std::set_symmetric_difference(work.begin(), work.end(), oc.begin(), oc.end(),
                                          std::back_inserter(merged));
            work.swap(merged);
        }
        if (work.empty()) {
            // Positive edge never killed by a triangle: essential 1-cycle.
            diagram.points.push_back({1, sc.edge_value[e], kEssential});
        } else {
            const std::int32_t low = work.back();
            owner[static_cast<std::size_t>(low)] = static_cast<std::int32_t>(e);
            vertex_paired[static_cast<std::size_t>(low)] = 1;
            columns[e] = work;
            push_point(diagram, 0, 0.0, sc.edge_value[e]);
        }
    }
    for (std::size_t v = 0; v < sc.vertex_at.size(); ++v)
        if (!vertex_paired[v]) diagram.points.push_back({0, 0.0, kEssential});

    finish(diagram);
    return diagram;
}

long persistent_betti(const PersistenceDiagram& diagram, int q, double r, double s) {
    if (r > s) throw std::invalid_argument("persistent_betti: requires r <= s");
    long count = 0;
    for (const DiagramPoint& p : diagram.points)
        if (p.dim == q && p.birth <= r && p.death > s) ++count;
    return count;
}

long block_count(const PersistenceDiagram& diagram, int q, const Block& block) {
    long count = 0;
    for (const DiagramPoint& p : diagram.points)
        if (p.dim == q && p.birth > block.b_min && p.birth <= block.b_max &&
            p.death > block.d_min && p.death <= block.d_max)
            ++count;
    return count;
}

}  // namespace cyltda
