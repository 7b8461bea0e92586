#include "crowdec/ranking.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "crowdec/error.hpp"

namespace crowdec {

namespace {

Outcome mirror(Outcome o) {
    switch (o) {
        case Outcome::Win: return Outcome::Lose;
        case Outcome::Lose: return Outcome::Win;
        default: return o;
    }
}

}  // namespace

void ComparisonMatrix::record(std::size_t i, std::size_t j, Outcome o) {
    if (i >= n_ || j >= n_) throw ContractViolation("comparison index out of range");
    if (i == j) throw ContractViolation("agents do not compare with themselves");
    cells_[i * n_ + j] = o;
    cells_[j * n_ + i] = mirror(o);
}

std::size_t ComparisonMatrix::comparisons(std::size_t i) const {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n_; ++j) c += at(i, j) != Outcome::Absent;
    return c;
}

Comparisons build_comparisons(std::span<const AgentId> ids, std::span<const double> fitness,
                              const Topology& topology) {
    if (ids.size() != fitness.size())
        throw ContractViolation("one fitness value is needed per agent");
    const std::size_t n = ids.size();

    // Position of each id within `ids`; agents outside the list are skipped.
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<std::size_t> slot(topology.id_space(), kNone);
    for (std::size_t k = 0; k < n; ++k) {
        if (ids[k] < slot.size()) slot[ids[k]] = k;
    }

    Comparisons out{ComparisonMatrix(n), {}};
    for (std::size_t a = 0; a < n; ++a) {
        if (ids[a] >= topology.id_space()) continue;
        for (AgentId nb : topology.neighbors(ids[a])) {
            const std::size_t b = slot[nb];
            if (b == kNone) continue;
            Outcome o = Outcome::Tie;
            char c = 't';
            if (fitness[a] < fitness[b]) {
                o = Outcome::Win;
                c = 'w';
            } else if (fitness[a] > fitness[b]) {
                o = Outcome::Lose;
                c = 'l';
            }
            out.tuples.push_back({ids[a], nb, c});
            if (a < b) out.matrix.record(a, b, o);
        }
    }
    return out;
}

Comparisons build_comparisons(std::span<const double> fitness, const Topology& topology) {
    std::vector<AgentId> ids(fitness.size());
    std::iota(ids.begin(), ids.end(), AgentId{0});
    return build_comparisons(ids, fitness, topology);
}

RankingOutcome competition_rank(const ComparisonMatrix& m, double lambda) {
    return competition_rank(m, lambda, nullptr);
}

RankingOutcome competition_rank(const ComparisonMatrix& m, double lambda, RankingTrace* trace) {
    if (!(lambda >= 0.0 && lambda < 0.5)) throw ConfigError("lambda must lie in [0, 0.5)");
    const std::size_t n = m.size();
    if (n == 0) throw ContractViolation("cannot rank an empty crowd");
    const std::size_t nn = n * n;

    // Accumulation: Win -> 1 win, Lose -> 1 loss, Tie -> half of each.
    std::vector<double> wins(nn, 0.0);
    std::vector<double> losses(nn, 0.0);
    double max_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            switch (m.at(i, j)) {
                case Outcome::Win: wins[i * n + j] += 1.0; break;
                case Outcome::Lose: losses[i * n + j] += 1.0; break;
                case Outcome::Tie:
                    wins[i * n + j] += 0.5;
                    losses[i * n + j] += 0.5;
                    break;
                case Outcome::Absent: break;
            }
            max_total = std::max(max_total, wins[i * n + j] + losses[i * n + j]);
        }
    }

    // Penalized win rate; cells without comparisons keep the neutral 0.5.
    std::vector<double> fuzzy(nn, 0.5);
    for (std::size_t c = 0; c < nn; ++c) {
        const double total = wins[c] + losses[c];
        if (total == 0.0) continue;
        const double rate = wins[c] / total;
        const double penalty = lambda * std::exp2(-total / max_total);
        if (wins[c] > total / 2.0) {
            fuzzy[c] = rate - penalty;
        } else if (wins[c] < total / 2.0) {
            fuzzy[c] = rate + penalty;
        }
    }

    std::vector<double> ratio(nn);
    for (std::size_t c = 0; c < nn; ++c) {
        assert(fuzzy[c] < 1.0);
        ratio[c] = fuzzy[c] / (1.0 - fuzzy[c]);
    }

    // Column j divided by its Euclidean norm.
    std::vector<double> normalized(nn);
    for (std::size_t j = 0; j < n; ++j) {
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) sq += ratio[i * n + j] * ratio[i * n + j];
        const double norm = std::sqrt(sq);
        for (std::size_t i = 0; i < n; ++i) normalized[i * n + j] = ratio[i * n + j] / norm;
    }

    RankingOutcome out;
    out.pri.assign(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += normalized[i * n + j];
        out.pri[i] = row;
        grand += row;
    }
    for (double& p : out.pri) p /= grand;

    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), std::size_t{0});
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return out.pri[a] > out.pri[b]; });
    out.rank.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos) out.rank[out.order[pos]] = pos + 1;

    out.isolated.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.isolated[i] = m.comparisons(i) == 0;
        out.any_isolated = out.any_isolated || out.isolated[i];
    }

    if (trace != nullptr) {
        trace->wins = std::move(wins);
        trace->losses = std::move(losses);
        trace->totals.resize(nn);
        for (std::size_t c = 0; c < nn; ++c) trace->totals[c] = trace->wins[c] + trace->losses[c];
        trace->fuzzy = std::move(fuzzy);
        trace->ratio = std::move(ratio);
        trace->normalized = std::move(normalized);
    }
    return out;
}

std::vector<Level> classify_levels(std::span<const std::size_t> order) {
    const std::size_t n = order.size();
    if (n < 4) throw ConfigError("level classification needs at least 4 agents");
    const std::size_t block = n / 4;
    std::vector<Level> levels(n, 4);
    for (std::size_t pos = 0; pos < 3 * block; ++pos) {
        levels.at(order[pos]) = static_cast<Level>(1 + pos / block);
    }
    return levels;
}

std::vector<Level> oracle_levels(std::span<const double> fitness) {
    std::vector<std::size_t> order(fitness.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
    return classify_levels(order);
}

double layered_accuracy(std::span<const Level> levels, std::span<const Level> oracle) {
    if (levels.size() != oracle.size() || levels.empty())
        throw ContractViolation("layered accuracy needs equal, nonempty level vectors");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) hits += levels[i] == oracle[i];
    return static_cast<double>(hits) / static_cast<double>(levels.size());
}

void LevelHistory::push(Level level) {
    if (capacity_ == 0) return;
    if (levels_.size() == capacity_) levels_.pop_front();
    levels_.push_back(level);
}

bool LevelHistory::persistent_extreme(std::size_t window) const {
    if (window == 0 || levels_.size() < window) return false;
    const Level tail = levels_.back();
    if (tail != 1 && tail != 4) return false;
    return std::all_of(levels_.end() - static_cast<std::ptrdiff_t>(window), levels_.end(),
                       [tail](Level l) { return l == tail; });
}

std::vector<Detection> detect_unreliable(std::span<const LevelHistory> histories, std::size_t u) {
    std::vector<Detection> found;
    for (std::size_t i = 0; i < histories.size(); ++i) {
        if (histories[i].persistent_extreme(u)) found.push_back({i, histories[i].last()});
    }
    return found;
}

}  // namespace crowdec
