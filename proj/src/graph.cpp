#include "omega/graph.hpp"

#include <algorithm>
#include <deque>

namespace omega::graph {

Sccs tarjan(const Adjacency& adj, const std::vector<int>& roots) {
    const int n = int(adj.size());
    Sccs r;
    r.comp.assign(std::size_t(n), -1);
    std::vector<int> index(std::size_t(n), -1), low(std::size_t(n), 0);
    std::vector<char> on_stack(std::size_t(n), 0);
    std::vector<int> stack;
    int next = 0;
    struct Frame {
        int v;
        std::size_t edge;
    };
    std::vector<Frame> call;

    auto start = [&](int s) {
        if (index[std::size_t(s)] != -1) return;
        call.push_back({s, 0});
        index[std::size_t(s)] = low[std::size_t(s)] = next++;
        stack.push_back(s);
        on_stack[std::size_t(s)] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& out = adj[std::size_t(f.v)];
            if (f.edge < out.size()) {
                int w = out[f.edge++];
                if (index[std::size_t(w)] == -1) {
                    index[std::size_t(w)] = low[std::size_t(w)] = next++;
                    stack.push_back(w);
                    on_stack[std::size_t(w)] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[std::size_t(w)]) {
                    low[std::size_t(f.v)] = std::min(low[std::size_t(f.v)], index[std::size_t(w)]);
                }
                continue;
            }
            int v = f.v;
            call.pop_back();
            if (!call.empty()) {
                int u = call.back().v;
                low[std::size_t(u)] = std::min(low[std::size_t(u)], low[std::size_t(v)]);
            }
            if (low[std::size_t(v)] == index[std::size_t(v)]) {
                int id = r.count++;
                std::vector<int> members;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[std::size_t(w)] = 0;
                    r.comp[std::size_t(w)] = id;
                    members.push_back(w);
                } while (w != v);
                bool cyc = members.size() > 1;
                if (!cyc)
                    for (int x : adj[std::size_t(v)]) cyc = cyc || x == v;
                r.nontrivial.push_back(char(cyc));
            }
        }
    };

    if (roots.empty()) {
        for (int v = 0; v < n; ++v) start(v);
    } else {
        for (int v : roots) start(v);
    }
    return r;
}

std::vector<char> reachable(const Adjacency& adj, const std::vector<int>& roots) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<int> todo;
    for (int r : roots)
        if (!seen[std::size_t(r)]) {
            seen[std::size_t(r)] = 1;
            todo.push_back(r);
        }
    while (!todo.empty()) {
        int v = todo.back();
        todo.pop_back();
        for (int w : adj[std::size_t(v)])
            if (!seen[std::size_t(w)]) {
                seen[std::size_t(w)] = 1;
                todo.push_back(w);
            }
    }
    return seen;
}

std::vector<char> coreachable(const Adjacency& adj, const std::vector<char>& targets) {
    Adjacency rev(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v)
        for (int w : adj[v]) rev[std::size_t(w)].push_back(int(v));
    std::vector<int> roots;
    for (std::size_t v = 0; v < targets.size(); ++v)
        if (targets[v]) roots.push_back(int(v));
    return reachable(rev, roots);
}

std::optional<std::vector<int>> bfs_path(const Adjacency& adj, const std::vector<int>& roots,
                                         const std::function<bool(int)>& goal,
                                         const std::function<bool(int)>& inside) {
    std::vector<int> parent(adj.size(), -2);
    std::deque<int> q;
    for (int r : roots) {
        if (inside && !inside(r)) continue;
        if (parent[std::size_t(r)] != -2) continue;
        parent[std::size_t(r)] = -1;
        q.push_back(r);
    }
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (goal(v)) {
            std::vector<int> path;
            for (int x = v; x != -1; x = parent[std::size_t(x)]) path.push_back(x);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (int w : adj[std::size_t(v)]) {
            if (parent[std::size_t(w)] != -2) continue;
            if (inside && !inside(w)) continue;
            parent[std::size_t(w)] = v;
            q.push_back(w);
        }
    }
    return std::nullopt;
}

std::optional<std::vector<int>> cycle_through(const Adjacency& adj, int start, int via,
                                              const std::function<bool(int)>& inside) {
    std::vector<int> first;
    if (via != -1 && via != start) {
        std::vector<int> succ;
        for (int w : adj[std::size_t(start)])
            if (inside(w)) succ.push_back(w);
        auto p = bfs_path(adj, succ, [&](int x) { return x == via; }, inside);
        if (!p) return std::nullopt;
        first.push_back(start);
        first.insert(first.end(), p->begin(), p->end());
        std::vector<int> succ2;
        for (int w : adj[std::size_t(via)])
            if (inside(w)) succ2.push_back(w);
        auto p2 = bfs_path(adj, succ2, [&](int x) { return x == start; }, inside);
        if (!p2) return std::nullopt;
        first.insert(first.end(), p2->begin(), p2->end());
        return first;
    }
    std::vector<int> succ;
    for (int w : adj[std::size_t(start)])
        if (inside(w)) succ.push_back(w);
    auto p = bfs_path(adj, succ, [&](int x) { return x == start; }, inside);
    if (!p) return std::nullopt;
    first.push_back(start);
    first.insert(first.end(), p->begin(), p->end());
    return first;
}

} // namespace omega::graph
