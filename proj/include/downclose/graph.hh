#pragma once

#include <cstddef>
#include <vector>

namespace downclose {

struct Sccs {
    /// Component id per vertex. Ids are a reverse topological order: edges go
    /// from higher to lower or equal ids.
    std::vector<std::size_t> comp;
    std::size_t count = 0;
};

/// Tarjan's algorithm, iterative.
Sccs strongly_connected(const std::vector<std::vector<std::size_t>>& adj);

} // namespace downclose
