#pragma once

#include <algorithm>
#include <vector>

namespace kaczmarz {

/// Greedy working set of row indices together with the threshold value
/// that produced it. Indices are unique and kept in ascending order.
struct IndexSet {
    std::vector<int> indices;
    double threshold = 0.0;

    int size() const { return static_cast<int>(indices.size()); }
    bool empty() const { return indices.empty(); }

    bool contains(int i) const {
        return std::binary_search(indices.begin(), indices.end(), i);
    }
};

} // namespace kaczmarz
