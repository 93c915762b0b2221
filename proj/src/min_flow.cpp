#include "min_flow.hpp"

#include <algorithm>
#include <queue>

namespace sperner::detail {

void FlowNetwork::add_pair(int u, int v, double cap, double reverse_cap) {
    auto& out = adjacency_[static_cast<std::size_t>(u)];
    auto& in = adjacency_[static_cast<std::size_t>(v)];
    out.push_back(Arc{v, static_cast<int>(in.size()), cap});
    in.push_back(Arc{u, static_cast<int>(out.size()) - 1, reverse_cap});
}

bool FlowNetwork::build_levels(int source, int sink) {
    level_.assign(adjacency_.size(), -1);
    std::queue<int> frontier;
    level_[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (const Arc& a : adjacency_[u]) {
            if (a.cap > eps_ && level_[a.to] < 0) {
                level_[a.to] = level_[u] + 1;
                frontier.push(a.to);
            }
        }
    }
    return level_[sink] >= 0;
}

double FlowNetwork::push(int u, int sink, double limit) {
    if (u == sink) return limit;
    auto& arcs = adjacency_[u];
    for (std::size_t& i = cursor_[u]; i < arcs.size(); ++i) {
        Arc& a = arcs[i];
        if (a.cap <= eps_ || level_[a.to] != level_[u] + 1) continue;
        const double sent = push(a.to, sink, std::min(limit, a.cap));
        if (sent > 0.0) {
            a.cap -= sent;
            adjacency_[a.to][a.partner].cap += sent;
            return sent;
        }
    }
    return 0.0;
}

double FlowNetwork::max_flow(int source, int sink) {
    double total = 0.0;
    while (build_levels(source, sink)) {
        cursor_.assign(adjacency_.size(), 0);
        while (true) {
            const double sent = push(source, sink, kInfinity);
            if (sent <= 0.0) break;
            total += sent;
        }
    }
    return total;
}

std::vector<bool> FlowNetwork::reachable(int from) const {
    std::vector<bool> seen(adjacency_.size(), false);
    std::vector<int> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (const Arc& a : adjacency_[u]) {
            if (a.cap > eps_ && !seen[a.to]) {
                seen[a.to] = true;
                stack.push_back(a.to);
            }
        }
    }
    return seen;
}

} // namespace sperner::detail
