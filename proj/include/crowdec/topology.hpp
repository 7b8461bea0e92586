#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crowdec/rng.hpp"

namespace crowdec {

using AgentId = std::uint32_t;

/// Undirected communication graph over agent ids. Ids not in the alive set
/// have empty neighbor lists.
class Topology {
public:
    Topology() = default;

    std::size_t id_space() const noexcept { return neighbors_.size(); }
    std::size_t target_degree() const noexcept { return target_degree_; }
    const std::vector<AgentId>& alive() const noexcept { return alive_; }

    /// Sorted, duplicate-free.
    std::span<const AgentId> neighbors(AgentId id) const { return neighbors_.at(id); }
    std::size_t degree(AgentId id) const { return neighbors_.at(id).size(); }
    bool connected(AgentId a, AgentId b) const;
    std::size_t edge_count() const;

    /// Order-sensitive hash of the edge set, used to compare topology sequences.
    std::uint64_t digest() const;

    friend Topology random_topology(std::span<const AgentId> alive_ids, double sparsity, Rng& rng);

private:
    std::vector<AgentId> alive_;
    std::vector<std::vector<AgentId>> neighbors_;
    std::size_t target_degree_ = 0;
};

/// Target degree t = max(1, min(floor(sparsity * n), n - 1)).
std::size_t target_degree(std::size_t n_alive, double sparsity);

/// Each alive agent draws t distinct peers uniformly; the graph is the
/// symmetric closure of all draws. Throws TopologyDegenerate for < 2 agents
/// and ConfigError for sparsity outside (0, 1].
Topology random_topology(std::span<const AgentId> alive_ids, double sparsity, Rng& rng);

/// Per-generation resampling; same contract as random_topology.
inline Topology revary(std::span<const AgentId> alive_ids, double sparsity, Rng& rng) {
    return random_topology(alive_ids, sparsity, rng);
}

}  // namespace crowdec
