#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace sperner::detail {

/// Dinic max flow on double capacities. Capacities below `eps` count as
/// saturated.
class FlowNetwork {
public:
    static constexpr double kInfinity = std::numeric_limits<double>::infinity();

    explicit FlowNetwork(int nodes, double eps) : adjacency_(static_cast<std::size_t>(nodes)), eps_(eps) {}

    /// Adds u->v with capacity `cap` and v->u with capacity `reverse_cap`
    /// as a mutually residual pair.
    void add_pair(int u, int v, double cap, double reverse_cap);

    double max_flow(int source, int sink);

    /// Nodes reachable from `from` over arcs with residual capacity > eps.
    std::vector<bool> reachable(int from) const;

private:
    struct Arc {
        int to;
        int partner;
        double cap;
    };

    bool build_levels(int source, int sink);
    double push(int u, int sink, double limit);

    std::vector<std::vector<Arc>> adjacency_;
    std::vector<int> level_;
    std::vector<std::size_t> cursor_;
    double eps_;
};

} // namespace sperner::detail
