#include "cyltda/betti_oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace cyltda {

namespace {

using Bits = std::vector<std::uint64_t>;

Bits zero_bits(std::size_t nbits) { return Bits((nbits + 63) / 64, 0); }

void flip_bit(Bits& b, std::size_t i) { b[i / 64] ^= (std::uint64_t{1} << (i % 64)); }

int lowest_bit(const Bits& b) {
    for (std::size_t w = 0; w < b.size(); ++w)
        if (b[w]) return static_cast<int>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(b[w])));
    return -1;
}

void xor_into(Bits& a, const Bits& b) {
    for (std::size_t w = 0; w < a.size(); ++w) a[w] ^= b[w];
}

long rank_of(std::vector<Bits> cols) {
    std::map<int, std::size_t> pivot;  // pivot row -> column index
    long rank = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        int low = lowest_bit(cols[c]);
        while (low >= 0) {
            const auto it = pivot.find(low);
            if (it == pivot.end()) break;
            xor_into(cols[c], cols[it->second]);
            low = lowest_bit(cols[c]);
        }
        if (low >= 0) {
            pivot[low] = c;
            ++rank;
        }
    }
    return rank;
}

// Kernel basis of the column matrix, as coefficient vectors over the columns.
std::vector<Bits> kernel_of(std::vector<Bits> cols) {
    std::map<int, std::size_t> pivot;
    std::vector<Bits> combo(cols.size());
    std::vector<Bits> kernel;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        combo[c] = zero_bits(cols.size());
        flip_bit(combo[c], c);
        int low = lowest_bit(cols[c]);
        while (low >= 0) {
            const auto it = pivot.find(low);
            if (it == pivot.end()) break;
            xor_into(cols[c], cols[it->second]);
            xor_into(combo[c], combo[it->second]);
            low = lowest_bit(cols[c]);
        }
        if (low >= 0) {
            pivot[low] = c;
        } else {
            kernel.push_back(combo[c]);
        }
    }
    return kernel;
}

struct LevelComplex {
    std::vector<std::int32_t> vertices;                  // labels, filtration order
    std::vector<std::array<std::int32_t, 2>> edges;      // vertex labels
    std::vector<std::array<std::int32_t, 3>> triangles;  // vertex labels
};

LevelComplex at_level(const FilteredComplex& complex, double level) {
    LevelComplex out;
    for (const Simplex& s : complex.simplices) {
        if (s.value > level) continue;
        if (s.dim == 0) out.vertices.push_back(s.v[0]);
        else if (s.dim == 1) out.edges.push_back({s.v[0], s.v[1]});
        else out.triangles.push_back({s.v[0], s.v[1], s.v[2]});
    }
    return out;
}

std::map<std::int32_t, std::size_t> index_of_vertices(const LevelComplex& lc) {
    std::map<std::int32_t, std::size_t> idx;
    for (std::size_t i = 0; i < lc.vertices.size(); ++i) idx[lc.vertices[i]] = i;
    return idx;
}

std::map<std::array<std::int32_t, 2>, std::size_t> index_of_edges(const LevelComplex& lc) {
    std::map<std::array<std::int32_t, 2>, std::size_t> idx;
    for (std::size_t i = 0; i < lc.edges.size(); ++i) idx[lc.edges[i]] = i;
    return idx;
}

// Boundary of the dim-q simplices of `lc` as GF(2) columns over the (q-1)
// simplices of `rows` (which must contain every face).
std::vector<Bits> boundary_columns(const LevelComplex& lc, int q, const LevelComplex& rows) {
    std::vector<Bits> cols;
    if (q == 0) {
        cols.assign(lc.vertices.size(), zero_bits(1));
    } else if (q == 1) {
        const auto vidx = index_of_vertices(rows);
        for (const auto& e : lc.edges) {
            Bits col = zero_bits(rows.vertices.size());
            flip_bit(col, vidx.at(e[0]));
            flip_bit(col, vidx.at(e[1]));
            cols.push_back(std::move(col));
        }
    } else if (q == 2) {
        const auto eidx = index_of_edges(rows);
        for (const auto& t : lc.triangles) {
            Bits col = zero_bits(rows.edges.size());
            flip_bit(col, eidx.at({t[0], t[1]}));
            flip_bit(col, eidx.at({t[0], t[2]}));
            flip_bit(col, eidx.at({t[1], t[2]}));
            cols.push_back(std::move(col));
        }
    } else {
        throw std::invalid_argument("persistent_betti_oracle: q must be 0 or 1");
    }
    return cols;
}

}  // namespace

long persistent_betti_oracle(const FilteredComplex& complex, int q, double r, double s) {
    if (q != 0 && q != 1) throw std::invalid_argument("persistent_betti_oracle: q must be 0 or 1");
    if (r > s) throw std::invalid_argument("persistent_betti_oracle: requires r <= s");
    if (s > complex.truncation)
        throw std::invalid_argument("persistent_betti_oracle: s exceeds the complex truncation");

    const LevelComplex at_r = at_level(complex, r);
    const LevelComplex at_s = at_level(complex, s);

    // dim Z_q(K_r) and a kernel basis, as chains over the q-simplices of K_r.
    const std::vector<Bits> del_q_r = boundary_columns(at_r, q, at_r);
    const std::vector<Bits> kernel = kernel_of(del_q_r);

    const std::size_t q_count_s = q == 0 ? at_s.vertices.size() : at_s.edges.size();

    // Columns of del_{q+1}(K_s), then the kernel vectors of Z_q(K_r)
    // re-expressed over the q-simplices of K_s. The per-dimension filtration
    // order makes K_r's q-simplices a prefix of K_s's, so coefficient indices
    // carry over unchanged.
    std::vector<Bits> combined = boundary_columns(at_s, q + 1, at_s);
    const long rank_b = rank_of(combined);

    for (const Bits& k : kernel) {
        Bits ext = zero_bits(q_count_s);
        const std::size_t q_count_r = q == 0 ? at_r.vertices.size() : at_r.edges.size();
        for (std::size_t i = 0; i < q_count_r; ++i)
            if ((k[i / 64] >> (i % 64)) & 1) flip_bit(ext, i);
        combined.push_back(std::move(ext));
    }
    const long rank_bz = rank_of(std::move(combined));

    const long dim_z = static_cast<long>(kernel.size());
    const long dim_intersection = rank_b + dim_z - rank_bz;
    return dim_z - dim_intersection;
}

}  // namespace cyltda
