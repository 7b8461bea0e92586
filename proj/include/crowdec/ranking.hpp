#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "crowdec/topology.hpp"

namespace crowdec {

/// Outcome of comparing row agent i against column agent j.
/// Win means F_i < F_j (minimization).
enum class Outcome : std::uint8_t { Absent, Win, Lose, Tie };

/// Dense n x n outcome table kept antisymmetric by construction.
class ComparisonMatrix {
public:
    explicit ComparisonMatrix(std::size_t n = 0) : n_(n), cells_(n * n, Outcome::Absent) {}

    std::size_t size() const noexcept { return n_; }
    Outcome at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

    /// Records `o` at (i, j) and its mirror at (j, i). Diagonal writes are rejected.
    void record(std::size_t i, std::size_t j, Outcome o);

    /// Number of non-Absent cells in row i.
    std::size_t comparisons(std::size_t i) const;

private:
    std::size_t n_;
    std::vector<Outcome> cells_;
};

/// The message a worker sends the server: [id1, id2, w|l|t].
struct ComparisonTuple {
    AgentId id1;
    AgentId id2;
    char result;
};

struct Comparisons {
    ComparisonMatrix matrix;  ///< indexed by position in `ids`
    std::vector<ComparisonTuple> tuples;
};

/// Compares every connected pair among `ids`. `fitness[k]` belongs to `ids[k]`.
/// One tuple is emitted per ordered edge direction.
Comparisons build_comparisons(std::span<const AgentId> ids, std::span<const double> fitness,
                              const Topology& topology);

/// Convenience form with ids 0..n-1.
Comparisons build_comparisons(std::span<const double> fitness, const Topology& topology);

using Level = std::uint8_t;

struct RankingOutcome {
    std::vector<double> pri;          ///< priority per agent, sums to 1
    std::vector<std::size_t> order;   ///< agent indices, best first
    std::vector<std::size_t> rank;    ///< rank[i] = 1-based position of agent i in order
    std::vector<bool> isolated;       ///< agents with no comparison this round
    bool any_isolated = false;
};

inline constexpr double kDefaultLambda = 0.01;

/// Competition ranking: win/lose accumulation, penalized fuzzy preference,
/// ratio transform, Euclidean column normalization and row-sum priorities.
/// Ties in priority are broken by ascending index.
RankingOutcome competition_rank(const ComparisonMatrix& m, double lambda = kDefaultLambda);

/// Intermediate matrices, exposed for regression tests. Row-major n x n.
struct RankingTrace {
    std::vector<double> wins, losses, totals;
    std::vector<double> fuzzy;       ///< after the penalized win-rate step
    std::vector<double> ratio;       ///< after m / (1 - m)
    std::vector<double> normalized;  ///< after column normalization
};
RankingOutcome competition_rank(const ComparisonMatrix& m, double lambda, RankingTrace* trace);

/// Splits an order into four blocks of floor(n/4); the remainder joins level 4.
/// Returns levels indexed by agent. Throws ConfigError for n < 4.
std::vector<Level> classify_levels(std::span<const std::size_t> order);

/// Levels from an exact ascending sort of fitness (ties by index).
std::vector<Level> oracle_levels(std::span<const double> fitness);

/// Fraction of agents whose level matches the oracle.
double layered_accuracy(std::span<const Level> levels, std::span<const Level> oracle);

/// Trailing window of one agent's level assignments.
class LevelHistory {
public:
    explicit LevelHistory(std::size_t capacity = 0) : capacity_(capacity) {}

    void push(Level level);
    std::size_t size() const noexcept { return levels_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }
    const std::deque<Level>& levels() const noexcept { return levels_; }

    /// True if the last `window` entries exist and are all level 1 or all level 4.
    bool persistent_extreme(std::size_t window) const;
    Level last() const { return levels_.back(); }

private:
    std::size_t capacity_;
    std::deque<Level> levels_;
};

struct Detection {
    std::size_t index;  ///< position in the histories span
    Level tail_level;
};

/// Agents stuck in level 1 or level 4 for the full window of u generations.
std::vector<Detection> detect_unreliable(std::span<const LevelHistory> histories, std::size_t u);

/// Whether detection runs at generation g: g > 0 and g mod u == 0.
inline bool detection_due(std::uint64_t generation, std::size_t u) {
    return u > 0 && generation > 0 && generation % u == 0;
}

}  // namespace crowdec
