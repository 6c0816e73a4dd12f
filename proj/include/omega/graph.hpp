#pragma once

// Small explicit-graph helpers shared by the automata modules.

#include <functional>
#include <optional>
#include <vector>

namespace omega::graph {

using Adjacency = std::vector<std::vector<int>>;

struct Sccs {
    std::vector<int> comp;        // component id per node, -1 if not visited
    std::vector<char> nontrivial; // per component: contains a cycle
    int count = 0;
};

// Tarjan restricted to nodes reachable from `roots` (all nodes if empty).
Sccs tarjan(const Adjacency& adj, const std::vector<int>& roots = {});

std::vector<char> reachable(const Adjacency& adj, const std::vector<int>& roots);

// Nodes from which some node in `targets` is reachable (targets included).
std::vector<char> coreachable(const Adjacency& adj, const std::vector<char>& targets);

// Shortest path (node list, both ends included) from any root to a node
// satisfying goal, moving only through nodes allowed by `inside`.
std::optional<std::vector<int>> bfs_path(const Adjacency& adj, const std::vector<int>& roots,
                                         const std::function<bool(int)>& goal,
                                         const std::function<bool(int)>& inside = nullptr);

// Shortest non-empty cycle from `start` back to itself through `via` (a node
// or -1), staying inside the nodes accepted by `inside`.
std::optional<std::vector<int>> cycle_through(const Adjacency& adj, int start, int via,
                                              const std::function<bool(int)>& inside);

} // namespace omega::graph
