#include "crowdec/topology.hpp"

#include <algorithm>
#include <cmath>

#include "crowdec/error.hpp"

namespace crowdec {

bool Topology::connected(AgentId a, AgentId b) const {
    const auto& nb = neighbors_.at(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::size_t Topology::edge_count() const {
    std::size_t twice = 0;
    for (const auto& nb : neighbors_) twice += nb.size();
    return twice / 2;
}

std::uint64_t Topology::digest() const {
    std::uint64_t h = mix64(neighbors_.size());
    for (std::size_t i = 0; i < neighbors_.size(); ++i) {
        for (AgentId j : neighbors_[i]) {
            if (j > i) h = mix64(h ^ ((static_cast<std::uint64_t>(i) << 32) | j));
        }
    }
    return h;
}

std::size_t target_degree(std::size_t n_alive, double sparsity) {
    const auto scaled =
        static_cast<std::size_t>(std::floor(sparsity * static_cast<double>(n_alive) + 1e-9));
    return std::max<std::size_t>(1, std::min(scaled, n_alive - 1));
}

Topology random_topology(std::span<const AgentId> alive_ids, double sparsity, Rng& rng) {
    if (!(sparsity > 0.0 && sparsity <= 1.0))
        throw ConfigError("topology sparsity must lie in (0, 1]");
    if (alive_ids.size() < 2) throw TopologyDegenerate();

    Topology topo;
    topo.alive_.assign(alive_ids.begin(), alive_ids.end());
    std::sort(topo.alive_.begin(), topo.alive_.end());
    if (std::adjacent_find(topo.alive_.begin(), topo.alive_.end()) != topo.alive_.end())
        throw ContractViolation("alive id list contains duplicates");

    const std::size_t n = topo.alive_.size();
    const std::size_t t = target_degree(n, sparsity);
    topo.target_degree_ = t;
    topo.neighbors_.assign(topo.alive_.back() + 1, {});

    std::vector<AgentId> peers;
    peers.reserve(n - 1);
    for (AgentId self : topo.alive_) {
        peers.clear();
        for (AgentId other : topo.alive_) {
            if (other != self) peers.push_back(other);
        }
        for (std::size_t k = 0; k < t; ++k) {
            std::swap(peers[k], peers[k + rng.index(peers.size() - k)]);
            topo.neighbors_[self].push_back(peers[k]);
            topo.neighbors_[peers[k]].push_back(self);
        }
    }
    for (auto& nb : topo.neighbors_) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return topo;
}

}  // namespace crowdec
