#include "downclose/graph.hh"

#include <algorithm>
#include <limits>
#include <utility>

namespace downclose {

Sccs strongly_connected(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    Sccs out;
    out.comp.assign(n, unvisited);
    std::size_t counter = 0;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) {
            continue;
        }
        std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto [v, k] = call.back();
            if (k < adj[v].size()) {
                ++call.back().second;
                std::size_t w = adj[v][k];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            call.pop_back();
            if (!call.empty()) {
                auto u = call.back().first;
                low[u] = std::min(low[u], low[v]);
            }
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.comp[w] = out.count;
                } while (w != v);
                ++out.count;
            }
        }
    }
    return out;
}

} // namespace downclose
