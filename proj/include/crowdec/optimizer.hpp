#pragma once

#include <optional>
#include <span>
#include <vector>

#include "crowdec/problems.hpp"
#include "crowdec/ranking.hpp"
#include "crowdec/rng.hpp"
#include "crowdec/topology.hpp"

namespace crowdec {

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
};

/// What the first velocity term scales: the previous velocity (classic
/// level-based learning) or the current position (literal printed form).
enum class InertiaSource { Velocity, Position };

struct Exemplars {
    AgentId better;  ///< from the higher (or equal) level
    AgentId other;
};

/// Picks two learning exemplars among the agent's strictly better-ranked
/// neighbors. `levels` is indexed by agent id; level 0 marks agents that take
/// no part in this generation. Returns nullopt when no neighbor ranks higher.
std::optional<Exemplars> select_exemplars(AgentId agent, std::span<const Level> levels,
                                          const Topology& topology, Rng& rng);

/// Velocity for one coordinate:
///   v' = r1 * inertia + r2 * (x1 - x) + phi * r3 * (x2 - x)
inline double llso_velocity(double inertia, double x, double x1, double x2, double r1, double r2,
                            double r3, double phi) {
    return r1 * inertia + r2 * (x1 - x) + phi * r3 * (x2 - x);
}

/// Moves `p` toward the exemplar positions. Coordinates leaving the domain are
/// redrawn uniformly inside it with their velocity reset to zero.
void llso_update(Particle& p, std::span<const double> x1, std::span<const double> x2, double phi,
                 const SearchDomain& domain, Rng& rng,
                 InertiaSource inertia = InertiaSource::Velocity);

struct EvolutionParams {
    double phi = 0.4;
    InertiaSource inertia = InertiaSource::Velocity;
};

/// One level-based learning pass. Level-1 agents are left untouched; agents
/// at levels 2-4 learn from exemplars selected against a snapshot of the
/// pre-generation positions, so the result does not depend on visiting order.
/// `rngs` holds one stream per agent id. Returns the ids that moved, ascending.
std::vector<AgentId> evolve_generation(std::span<Particle> swarm, std::span<const Level> levels,
                                       const Topology& topology, const SearchDomain& domain,
                                       std::span<Rng> rngs, const EvolutionParams& params);

}  // namespace crowdec
