#include "crowdec/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "crowdec/error.hpp"
#include "crowdec/report.hpp"

namespace crowdec {

std::string to_string(NoiseMode mode) {
    switch (mode) {
        case NoiseMode::None: return "none";
        case NoiseMode::Positive: return "positive";
        case NoiseMode::Negative: return "negative";
        case NoiseMode::ClusteringReplacement: return "clustering-replacement";
    }
    return "?";
}

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Running: return "running";
        case RunStatus::BudgetExhausted: return "budget-exhausted";
        case RunStatus::DegenerateSwarm: return "degenerate-swarm";
        case RunStatus::GenerationLimit: return "generation-limit";
    }
    return "?";
}

std::string to_string(InertiaSource source) {
    return source == InertiaSource::Velocity ? "velocity" : "position";
}

std::size_t RunConfig::problem_dim() const {
    return kind == ProblemKind::Clustering ? 2 * clustering.k : dim;
}

std::uint64_t RunConfig::effective_max_fes() const {
    return max_fes != 0 ? max_fes : 1000 * static_cast<std::uint64_t>(problem_dim());
}

std::vector<std::string> RunConfig::violations() const {
    std::vector<std::string> v;
    auto bad = [&v](const std::string& field, const std::string& expected, auto got) {
        std::ostringstream os;
        os << field << ": expected " << expected << ", got " << got;
        v.push_back(os.str());
    };

    if (kind == ProblemKind::Benchmark) {
        const auto& names = benchmark_names();
        if (std::find(names.begin(), names.end(), benchmark) == names.end())
            bad("problem", "one of sphere|elliptic|rastrigin|ackley|rosenbrock|schwefel12|clustering",
                benchmark);
        if (dim < 1) bad("dim", ">= 1", dim);
        if (benchmark == "rosenbrock" && dim < 2) bad("dim", ">= 2 for rosenbrock", dim);
        if (noise == NoiseMode::ClusteringReplacement)
            bad("noise_mode", "none|positive|negative for benchmark problems", to_string(noise));
    } else {
        const auto& c = clustering;
        if (c.k < 1) bad("k", ">= 1", c.k);
        if (c.csv_path.empty()) {
            if (c.blob_clusters < 1) bad("blob_clusters", ">= 1", c.blob_clusters);
            if (c.points_per_cluster < 1) bad("points_per_cluster", ">= 1", c.points_per_cluster);
            if (!(c.spread >= 0.0) || !std::isfinite(c.spread))
                bad("spread", "a finite real >= 0", c.spread);
            const std::size_t points = c.blob_clusters * c.points_per_cluster;
            if (c.k > points) bad("k", "<= number of data points (" + std::to_string(points) + ")", c.k);
            if (noise == NoiseMode::ClusteringReplacement && np > points)
                bad("np", "<= number of data points (" + std::to_string(points) +
                              ") under clustering-replacement noise",
                    np);
        }
        if (noise == NoiseMode::Positive || noise == NoiseMode::Negative)
            bad("noise_mode", "clustering-replacement|none for clustering problems", to_string(noise));
    }

    if (np < kMinAliveSwarm) bad("np", ">= " + std::to_string(kMinAliveSwarm), np);
    if (effective_max_fes() < np) bad("fes", ">= np (" + std::to_string(np) + ")", effective_max_fes());
    if (u < 1) bad("u", ">= 1", u);
    if (!(sparsity > 0.0 && sparsity <= 1.0)) bad("sparsity", "a real in (0, 1]", sparsity);
    if (!(phi > 0.0) || !std::isfinite(phi)) bad("phi", "a finite real > 0", phi);
    if (!(lambda >= 0.0 && lambda < 0.5)) bad("lambda", "a real in [0, 0.5)", lambda);
    if (!(reliable_fraction > 0.0 && reliable_fraction <= 1.0))
        bad("reliable_fraction", "a real in (0, 1]", reliable_fraction);
    if (!(max_exponent > 0.0) || !std::isfinite(max_exponent))
        bad("max_exponent", "a finite real > 0", max_exponent);
    if (seeds.empty()) bad("seeds", "a nonempty list", "none");
    if (jobs < 1) bad("jobs", ">= 1", jobs);
    return v;
}

void RunConfig::validate() const {
    const auto v = violations();
    if (v.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& s : v) msg += "\n  " + s;
    throw ConfigError(msg);
}

Problem make_problem(const RunConfig& config) {
    Problem p;
    if (config.kind == ProblemKind::Benchmark) {
        p.truth = std::make_shared<const Objective>(make_benchmark(config.benchmark, config.dim));
        return p;
    }
    const auto& c = config.clustering;
    Dataset data = c.csv_path.empty()
                       ? synth_blobs(c.blob_clusters, c.points_per_cluster, c.spread, c.data_seed).data
                       : load_csv(c.csv_path, c.csv);
    if (config.noise == NoiseMode::ClusteringReplacement && config.np > data.count())
        throw ConfigError("np: expected <= number of data points (" + std::to_string(data.count()) +
                          ") under clustering-replacement noise, got " + std::to_string(config.np));
    p.truth = std::make_shared<const Objective>(make_clustering_objective(data, c.k));
    p.data = std::make_shared<const Dataset>(std::move(data));
    return p;
}

StreamSeeds StreamSeeds::from_master(std::uint64_t master) {
    return {derive_seed(master, "init"), derive_seed(master, "topology"),
            derive_seed(master, "evolution"), derive_seed(master, "noise")};
}

std::vector<AgentId> RunState::alive_ids() const {
    std::vector<AgentId> ids;
    for (const auto& a : agents) {
        if (a.alive) ids.push_back(a.id);
    }
    return ids;
}

Engine::Engine(const RunConfig& config, std::uint64_t master_seed)
    : Engine(config, StreamSeeds::from_master(master_seed)) {}

Engine::Engine(const RunConfig& config, const StreamSeeds& seeds)
    : Engine(config, seeds, (config.validate(), make_problem(config))) {}

Engine::Engine(const RunConfig& config, const StreamSeeds& seeds, Problem problem) {
    config.validate();
    state_.config = config;
    state_.problem = std::move(problem);
    initialize(seeds);
}

void Engine::initialize(const StreamSeeds& seeds) {
    auto& s = state_;
    const auto& cfg = s.config;
    const Objective& truth = *s.problem.truth;
    const SearchDomain& domain = truth.domain;
    const std::size_t np = cfg.np;

    s.budget = EvalBudget(cfg.effective_max_fes());
    s.topology_stream = Rng(seeds.topology);

    std::vector<double> bounds(np, 0.0);
    if (cfg.noise == NoiseMode::Positive || cfg.noise == NoiseMode::Negative)
        bounds = bound_schedule(np, cfg.reliable_fraction, cfg.max_exponent);
    const NoiseSign sign = cfg.noise == NoiseMode::Negative ? NoiseSign::Negative : NoiseSign::Positive;

    Rng init(seeds.init);
    s.agents.resize(np);
    s.particles.resize(np);
    s.evolution_streams.reserve(np);
    s.noise_streams.reserve(np);
    for (std::size_t i = 0; i < np; ++i) {
        auto& a = s.agents[i];
        a.id = static_cast<AgentId>(i);
        a.uncertainty = {bounds[i], sign};
        a.reported_bound = bounds[i];
        a.history = LevelHistory(cfg.u);

        auto& p = s.particles[i];
        p.position.resize(domain.dim());
        p.velocity.assign(domain.dim(), 0.0);
        for (std::size_t d = 0; d < domain.dim(); ++d)
            p.position[d] = init.uniform(domain.lower(d), domain.upper(d));

        s.evolution_streams.emplace_back(derive_seed(seeds.evolution, "agent", i));
        s.noise_streams.emplace_back(derive_seed(seeds.noise, "agent", i));

        if (cfg.noise == NoiseMode::ClusteringReplacement) {
            // Worker i holds a fixed corrupted copy with i+1 replaced points.
            const auto& base = *s.problem.data;
            auto own = std::make_shared<const Dataset>(
                replace_points(base, i + 1, bounding_box(base), s.noise_streams.back()));
            a.sensed = [own](std::span<const double> x) { return wcss_flat(x, *own); };
            a.reported_bound = static_cast<double>(i + 1);
        } else {
            a.sensed = truth.eval;
        }
    }

    for (std::size_t i = 0; i < np; ++i) evaluate(static_cast<AgentId>(i));
    s.topology = random_topology(s.alive_ids(), cfg.sparsity, s.topology_stream);
    s.generation = 1;
    s.best_F = std::numeric_limits<double>::infinity();
    refresh_best();
    if (s.budget.exhausted()) s.status = RunStatus::BudgetExhausted;
}

void Engine::evaluate(AgentId id) {
    auto& s = state_;
    auto& a = s.agents[id];
    const auto& x = s.particles[id].position;
    const NoisyValue v = noisy_eval(a.sensed, a.uncertainty, x, s.budget, s.noise_streams[id]);
    a.cached_F = v.uncertain;
    if (s.config.poison_true_fitness) {
        a.cached_f_true = std::numeric_limits<double>::quiet_NaN();
    } else if (s.config.noise == NoiseMode::ClusteringReplacement) {
        a.cached_f_true = (*s.problem.truth)(x);
    } else {
        a.cached_f_true = v.true_value;
    }
}

void Engine::refresh_best() {
    auto& s = state_;
    for (const auto& a : s.agents) {
        if (a.alive && a.cached_F < s.best_F) {
            s.best_F = a.cached_F;
            s.best_position = s.particles[a.id].position;
        }
    }
}

void Engine::summarize(GenerationRecord& rec, std::span<const AgentId> alive) const {
    const auto& s = state_;
    rec.fes = s.budget.used_fes();
    rec.alive = alive.size();
    rec.best_F = std::numeric_limits<double>::infinity();
    rec.best_f_true = std::numeric_limits<double>::infinity();
    for (AgentId id : alive) {
        rec.best_F = std::min(rec.best_F, s.agents[id].cached_F);
        rec.best_f_true = std::min(rec.best_f_true, s.agents[id].cached_f_true);
    }
    if (s.config.poison_true_fitness) rec.best_f_true = std::numeric_limits<double>::quiet_NaN();
}

bool Engine::done() const {
    return state_.status != RunStatus::Running;
}

void Engine::step() {
    auto& s = state_;
    const auto& cfg = s.config;
    if (done()) throw ContractViolation("step() called on a finished run");

    GenerationRecord rec;
    rec.generation = s.generation;
    rec.topology_digest = s.topology.digest();

    // Communication: neighbors exchange F and report outcomes to the server.
    const std::vector<AgentId> ids = s.alive_ids();
    const std::size_t n = ids.size();
    std::vector<double> fitness(n);
    for (std::size_t k = 0; k < n; ++k) fitness[k] = s.agents[ids[k]].cached_F;
    Comparisons comps = build_comparisons(ids, fitness, s.topology);
    if (cfg.log_tuples) {
        for (const auto& t : comps.tuples) s.tuples.push_back({s.generation, t});
    }

    // Server: competition ranking and four-level classification.
    const RankingOutcome ranking = competition_rank(comps.matrix, cfg.lambda);
    const std::vector<Level> local_levels = classify_levels(ranking.order);
    rec.layered_accuracy = layered_accuracy(local_levels, oracle_levels(fitness));

    std::vector<Level> levels(s.agents.size(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        levels[ids[k]] = local_levels[k];
        s.agents[ids[k]].history.push(local_levels[k]);
    }

    // Server: uncertainty detection on the trailing window.
    if (cfg.detection && detection_due(s.generation, cfg.u)) {
        std::vector<LevelHistory> hist;
        hist.reserve(n);
        for (AgentId id : ids) hist.push_back(s.agents[id].history);
        for (const Detection& d : detect_unreliable(hist, cfg.u)) {
            auto& a = s.agents[ids[d.index]];
            a.alive = false;
            levels[a.id] = 0;
            s.detections.push_back({s.generation, a.id, a.reported_bound, d.tail_level});
            rec.detection_event = true;
        }
    }

    const std::vector<AgentId> survivors = s.alive_ids();
    if (survivors.size() < kMinAliveSwarm) {
        summarize(rec, survivors);
        s.log.push_back(rec);
        s.status = RunStatus::DegenerateSwarm;
        ++s.generation;
        return;
    }

    // Workers: learn from better-ranked neighbors.
    std::vector<Particle> before;
    std::vector<AgentId> moved;
    {
        const std::vector<Particle> snapshot = s.particles;
        moved = evolve_generation(s.particles, levels, s.topology, s.problem.truth->domain,
                                  s.evolution_streams, {cfg.phi, cfg.inertia});
        before.reserve(moved.size());
        for (AgentId id : moved) before.push_back(snapshot[id]);
    }

    std::vector<AgentId> to_eval = moved;
    if (cfg.reevaluate_elites) {
        for (AgentId id : survivors) {
            if (levels[id] == 1) to_eval.push_back(id);
        }
        std::sort(to_eval.begin(), to_eval.end());
    }

    // Workers: uncertain evaluation of every moved agent, within budget.
    for (std::size_t k = 0; k < to_eval.size(); ++k) {
        const AgentId id = to_eval[k];
        if (s.budget.exhausted()) {
            rec.partial = true;
            const auto it = std::lower_bound(moved.begin(), moved.end(), id);
            if (it != moved.end() && *it == id)
                s.particles[id] = before[static_cast<std::size_t>(it - moved.begin())];
            continue;
        }
        evaluate(id);
    }

    refresh_best();
    summarize(rec, survivors);
    s.log.push_back(rec);

    s.topology = revary(survivors, cfg.sparsity, s.topology_stream);
    ++s.generation;

    if (s.budget.exhausted()) {
        s.status = RunStatus::BudgetExhausted;
    } else if (cfg.max_generations != 0 && s.generation > cfg.max_generations) {
        s.status = RunStatus::GenerationLimit;
    }
}

RunResult Engine::finish() const {
    const auto& s = state_;
    RunResult r;
    r.fes_used = s.budget.used_fes();
    r.max_fes = s.budget.max_fes();
    r.generations = s.generation - 1;
    r.status = s.status;
    r.detections = s.detections;
    r.convergence = s.log;
    r.tuples = s.tuples;
    r.best_so_far_F = s.best_F;

    const std::vector<AgentId> ids = s.alive_ids();
    r.final_alive = ids.size();
    if (ids.empty()) {
        r.x_best = s.best_position;
    } else if (ids.size() == 1) {
        r.best_agent = ids.front();
        r.x_best = s.particles[ids.front()].position;
    } else {
        // One more comparison round on the current graph; it costs no evaluations.
        std::vector<double> fitness(ids.size());
        for (std::size_t k = 0; k < ids.size(); ++k) fitness[k] = s.agents[ids[k]].cached_F;
        const auto comps = build_comparisons(ids, fitness, s.topology);
        const auto ranking = competition_rank(comps.matrix, s.config.lambda);
        r.best_agent = ids[ranking.order.front()];
        r.x_best = s.particles[r.best_agent].position;
    }
    r.f_server = (*s.problem.truth)(r.x_best);
    return r;
}

RunResult run(const RunConfig& config, std::uint64_t master_seed) {
    return run(config, StreamSeeds::from_master(master_seed));
}

RunResult run(const RunConfig& config, const StreamSeeds& seeds) {
    Engine engine(config, seeds);
    while (!engine.done()) engine.step();
    return engine.finish();
}

}  // namespace crowdec
