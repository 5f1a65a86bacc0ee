#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nanboltz::detail {

struct FlowEntry {
    uint32_t from = 0, to = 0;  // source index, sink index
    int64_t amount = 0;
};

struct TransportSolution {
    double cost = 0.0;  // sum of amount * unit cost over all flows
    std::vector<FlowEntry> flows;
    uint64_t pivots = 0;
};

/// Exact primal network simplex for the dense uncapacitated transportation
/// problem: n sources with integer supplies, m sinks with integer demands
/// (balanced), unit costs in row-major cost[n*m]. Strongly feasible trees
/// (Cunningham leaving-arc rule) prevent cycling; block search picks the
/// entering arc. Optimal flows are integral.
TransportSolution solve_transport(const double* cost, std::size_t n, std::size_t m,
                                  std::span<const int64_t> supply,
                                  std::span<const int64_t> demand);

}  // namespace nanboltz::detail
