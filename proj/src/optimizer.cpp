#include "crowdec/optimizer.hpp"

#include <array>

#include "crowdec/error.hpp"

namespace crowdec {

namespace {

// Two draws from `pool`, distinct whenever the pool allows it.
std::pair<AgentId, AgentId> draw_pair(const std::vector<AgentId>& pool, Rng& rng) {
    const std::size_t a = rng.index(pool.size());
    if (pool.size() == 1) return {pool[a], pool[a]};
    std::size_t b = rng.index(pool.size() - 1);
    if (b >= a) ++b;
    return {pool[a], pool[b]};
}

}  // namespace

std::optional<Exemplars> select_exemplars(AgentId agent, std::span<const Level> levels,
                                          const Topology& topology, Rng& rng) {
    const Level own = levels[agent];
    if (own < 2 || own > 4) throw ContractViolation("only level 2-4 agents select exemplars");

    // by_level[l] holds neighbors at level l + 1 that outrank the agent.
    std::array<std::vector<AgentId>, 3> by_level;
    for (AgentId nb : topology.neighbors(agent)) {
        const Level l = nb < levels.size() ? levels[nb] : 0;
        if (l >= 1 && l < own) by_level[l - 1].push_back(nb);
    }

    if (own == 2) {
        if (by_level[0].empty()) return std::nullopt;
        const auto [a, b] = draw_pair(by_level[0], rng);
        return Exemplars{a, b};
    }

    std::array<std::size_t, 3> present{};
    std::size_t count = 0;
    for (std::size_t l = 0; l < 3; ++l) {
        if (!by_level[l].empty()) present[count++] = l;
    }
    if (count == 0) return std::nullopt;
    if (count == 1) {
        const auto [a, b] = draw_pair(by_level[present[0]], rng);
        return Exemplars{a, b};
    }

    std::size_t i = rng.index(count);
    std::size_t j = rng.index(count - 1);
    if (j >= i) ++j;
    if (present[j] < present[i]) std::swap(i, j);
    const auto& hi = by_level[present[i]];
    const auto& lo = by_level[present[j]];
    const AgentId better = hi[rng.index(hi.size())];
    const AgentId other = lo[rng.index(lo.size())];
    return Exemplars{better, other};
}

void llso_update(Particle& p, std::span<const double> x1, std::span<const double> x2, double phi,
                 const SearchDomain& domain, Rng& rng, InertiaSource inertia) {
    const std::size_t dim = domain.dim();
    if (p.position.size() != dim || p.velocity.size() != dim || x1.size() != dim ||
        x2.size() != dim)
        throw ContractViolation("particle and exemplar dimensions must match the domain");

    for (std::size_t d = 0; d < dim; ++d) {
        const double r1 = rng.uniform01();
        const double r2 = rng.uniform01();
        const double r3 = rng.uniform01();
        const double x = p.position[d];
        const double base = inertia == InertiaSource::Velocity ? p.velocity[d] : x;
        double v = llso_velocity(base, x, x1[d], x2[d], r1, r2, r3, phi);
        double nx = x + v;
        if (!(nx >= domain.lower(d) && nx <= domain.upper(d))) {
            nx = rng.uniform(domain.lower(d), domain.upper(d));
            v = 0.0;
        }
        p.position[d] = nx;
        p.velocity[d] = v;
    }
}

std::vector<AgentId> evolve_generation(std::span<Particle> swarm, std::span<const Level> levels,
                                       const Topology& topology, const SearchDomain& domain,
                                       std::span<Rng> rngs, const EvolutionParams& params) {
    if (levels.size() != swarm.size() || rngs.size() != swarm.size())
        throw ContractViolation("swarm, levels and rng streams must be indexed alike");
    if (!(params.phi > 0.0)) throw ConfigError("phi must be positive");

    std::vector<std::vector<double>> snapshot(swarm.size());
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        if (levels[i] != 0) snapshot[i] = swarm[i].position;
    }

    std::vector<AgentId> updated;
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        if (levels[i] < 2) continue;
        const auto id = static_cast<AgentId>(i);
        const auto ex = select_exemplars(id, levels, topology, rngs[i]);
        if (!ex) continue;
        llso_update(swarm[i], snapshot[ex->better], snapshot[ex->other], params.phi, domain,
                    rngs[i], params.inertia);
        updated.push_back(id);
    }
    return updated;
}

}  // namespace crowdec
