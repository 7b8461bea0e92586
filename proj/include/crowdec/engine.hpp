#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "crowdec/clustering.hpp"
#include "crowdec/optimizer.hpp"
#include "crowdec/problems.hpp"
#include "crowdec/ranking.hpp"
#include "crowdec/rng.hpp"
#include "crowdec/topology.hpp"
#include "crowdec/uncertainty.hpp"

namespace crowdec {

enum class ProblemKind { Benchmark, Clustering };

/// How worker evaluations are disturbed.
///   None                   - every worker sees f(x)
///   Positive / Negative    - additive uniform noise on the bound schedule
///   ClusteringReplacement  - worker i clusters a copy of the data with i+1
///                            points replaced by uniform junk
enum class NoiseMode { None, Positive, Negative, ClusteringReplacement };

enum class RunStatus { Running, BudgetExhausted, DegenerateSwarm, GenerationLimit };

std::string to_string(NoiseMode mode);
std::string to_string(RunStatus status);
std::string to_string(InertiaSource source);

/// Where the clustering data comes from: a CSV file, or synthetic blobs when
/// `csv_path` is empty.
struct ClusteringSource {
    std::string csv_path;
    CsvOptions csv;
    std::size_t k = 10;
    std::size_t blob_clusters = 10;
    std::size_t points_per_cluster = 100;
    double spread = 0.05;
    std::uint64_t data_seed = 1;
};

/// Smallest alive swarm the engine keeps running with.
inline constexpr std::size_t kMinAliveSwarm = 8;

struct RunConfig {
    ProblemKind kind = ProblemKind::Benchmark;
    std::string benchmark = "sphere";
    std::size_t dim = 50;
    ClusteringSource clustering;

    std::size_t np = 100;
    std::uint64_t max_fes = 0;  ///< 0 selects 1000 x dimension
    std::size_t u = 100;
    double sparsity = 0.1;
    double phi = 0.4;
    double lambda = kDefaultLambda;
    NoiseMode noise = NoiseMode::Positive;
    bool detection = true;
    double reliable_fraction = 0.9;
    double max_exponent = 30.0;
    InertiaSource inertia = InertiaSource::Velocity;
    bool reevaluate_elites = false;
    std::uint64_t max_generations = 0;  ///< 0 means unlimited
    bool log_tuples = false;
    /// Replaces every diagnostic true-fitness value with NaN. Decision logic
    /// never reads those values, so trajectories must not change.
    bool poison_true_fitness = false;

    std::vector<std::uint64_t> seeds{1};
    std::string out_dir;
    std::size_t jobs = 1;

    std::size_t problem_dim() const;
    std::uint64_t effective_max_fes() const;

    /// Every violated constraint, one message per field.
    std::vector<std::string> violations() const;
    /// Throws ConfigError listing all violations.
    void validate() const;
};

/// The objective as the server sees it, plus the clustering base data.
struct Problem {
    std::shared_ptr<const Objective> truth;
    std::shared_ptr<const Dataset> data;  ///< null for benchmarks
};

Problem make_problem(const RunConfig& config);

/// Independent seeds for the four random streams of a run.
struct StreamSeeds {
    std::uint64_t init = 0;
    std::uint64_t topology = 0;
    std::uint64_t evolution = 0;
    std::uint64_t noise = 0;

    static StreamSeeds from_master(std::uint64_t master);
};

struct WorkerAgent {
    AgentId id = 0;
    UncertaintySpec uncertainty;
    /// What this worker's sensors let it evaluate (its own data for clustering).
    EvalFn sensed;
    double cached_F = 0.0;
    double cached_f_true = 0.0;  ///< diagnostics only
    bool alive = true;
    LevelHistory history;
    /// Bound value or replaced-point count, reported on detection.
    double reported_bound = 0.0;
};

struct GenerationRecord {
    std::uint64_t generation = 0;
    std::uint64_t fes = 0;
    double best_F = 0.0;
    double best_f_true = 0.0;
    std::size_t alive = 0;
    double layered_accuracy = 0.0;
    bool partial = false;
    bool detection_event = false;
    std::uint64_t topology_digest = 0;
};

struct DetectionEvent {
    std::uint64_t generation = 0;
    AgentId agent = 0;
    double bound_value = 0.0;
    Level tail_level = 0;
};

struct TupleRecord {
    std::uint64_t generation = 0;
    ComparisonTuple tuple;
};

struct RunState {
    RunConfig config;
    Problem problem;
    std::uint64_t generation = 1;
    EvalBudget budget{1};
    std::vector<WorkerAgent> agents;
    std::vector<Particle> particles;
    std::vector<Rng> evolution_streams;
    std::vector<Rng> noise_streams;
    Rng topology_stream;
    Topology topology;
    std::vector<double> best_position;
    double best_F = 0.0;
    RunStatus status = RunStatus::Running;
    std::vector<GenerationRecord> log;
    std::vector<DetectionEvent> detections;
    std::vector<TupleRecord> tuples;

    std::vector<AgentId> alive_ids() const;
};

struct RunResult {
    std::vector<double> x_best;
    double f_server = 0.0;  ///< noise-free evaluation of x_best
    AgentId best_agent = 0;
    double best_so_far_F = 0.0;
    std::uint64_t fes_used = 0;
    std::uint64_t max_fes = 0;
    std::uint64_t generations = 0;
    std::size_t final_alive = 0;
    RunStatus status = RunStatus::Running;
    std::vector<DetectionEvent> detections;
    std::vector<GenerationRecord> convergence;
    std::vector<TupleRecord> tuples;
};

/// Drives one run: server-side ranking and detection, worker-side learning
/// and noisy evaluation, one generation per step().
class Engine {
public:
    Engine(const RunConfig& config, std::uint64_t master_seed);
    Engine(const RunConfig& config, const StreamSeeds& seeds);
    Engine(const RunConfig& config, const StreamSeeds& seeds, Problem problem);

    bool done() const;
    /// Runs one generation. Throws ContractViolation when already done.
    void step();
    /// Final verdict: the server evaluates the top-ranked alive candidate
    /// without noise.
    RunResult finish() const;

    const RunState& state() const noexcept { return state_; }

private:
    void initialize(const StreamSeeds& seeds);
    void evaluate(AgentId id);
    void refresh_best();
    void summarize(GenerationRecord& rec, std::span<const AgentId> alive) const;

    RunState state_;
};

RunResult run(const RunConfig& config, std::uint64_t master_seed);
RunResult run(const RunConfig& config, const StreamSeeds& seeds);

}  // namespace crowdec
