#pragma once

// Simplicial boundary matrices of the matching complex M(v): faces of
// dimension d are matchings with d+1 pairwise disjoint edges of the
// complete graph K_v. boundary_matrix(v, k) maps k-edge matchings to
// (k-1)-edge matchings with the usual alternating signs; for v = 9 and
// k = 4 this is the mk9-b3 benchmark matrix (945 x 1260, 3780 entries).

#include <array>
#include <map>
#include <utility>
#include <vector>

namespace kaczmarz::tools {

struct BoundaryMatrix {
    int rows = 0;
    int cols = 0;
    // (row, col, value) with value in {-1, +1}
    std::vector<std::array<int, 3>> entries;
};

namespace detail {

inline std::vector<std::pair<int, int>> complete_graph_edges(int vertices) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < vertices; ++a) {
        for (int b = a + 1; b < vertices; ++b) edges.emplace_back(a, b);
    }
    return edges;
}

inline void enumerate_matchings(const std::vector<std::pair<int, int>>& edges, int size,
                                int first_edge, unsigned used_vertices,
                                std::vector<int>& current,
                                std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == size) {
        out.push_back(current);
        return;
    }
    const int remaining = size - static_cast<int>(current.size());
    for (int e = first_edge; e + remaining <= static_cast<int>(edges.size()); ++e) {
        const unsigned mask = (1u << edges[static_cast<std::size_t>(e)].first) |
                              (1u << edges[static_cast<std::size_t>(e)].second);
        if (used_vertices & mask) continue;
        current.push_back(e);
        enumerate_matchings(edges, size, e + 1, used_vertices | mask, current, out);
        current.pop_back();
    }
}

inline std::vector<std::vector<int>> matchings(int vertices, int size) {
    const auto edges = complete_graph_edges(vertices);
    std::vector<std::vector<int>> out;
    std::vector<int> current;
    enumerate_matchings(edges, size, 0, 0u, current, out);
    return out; // lexicographic in the edge-index tuples
}

} // namespace detail

inline BoundaryMatrix boundary_matrix(int vertices, int k) {
    const auto faces = detail::matchings(vertices, k);
    const auto facets = detail::matchings(vertices, k - 1);

    std::map<std::vector<int>, int> facet_id;
    for (std::size_t c = 0; c < facets.size(); ++c) {
        facet_id.emplace(facets[c], static_cast<int>(c));
    }

    BoundaryMatrix B;
    B.rows = static_cast<int>(faces.size());
    B.cols = static_cast<int>(facets.size());
    B.entries.reserve(faces.size() * static_cast<std::size_t>(k));
    for (std::size_t r = 0; r < faces.size(); ++r) {
        for (int j = 0; j < k; ++j) {
            std::vector<int> facet = faces[r];
            facet.erase(facet.begin() + j);
            const int c = facet_id.at(facet);
            B.entries.push_back({static_cast<int>(r), c, (j % 2 == 0) ? 1 : -1});
        }
    }
    return B;
}

} // namespace kaczmarz::tools
