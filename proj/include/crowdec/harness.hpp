#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crowdec/engine.hpp"

namespace crowdec {

/// Expands "1..25", "3", "1,4,7..9" into an ordered seed list.
std::vector<std::uint64_t> parse_seeds(std::string_view spec);

/// Applies one `key = value` setting. Keys accept '-' or '_' separators.
/// Throws ConfigError naming the key for unknown keys or unparsable values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Parses a flat `key = value` file (TOML-style: '#' comments, optional quotes).
/// Throws IoError if unreadable and ParseError on a malformed line.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Defaults, then file settings, then flag overrides; validated at the end.
RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const std::map<std::string, std::string>& overrides,
                       const RunConfig& defaults = RunConfig{});

/// Effective configuration in the same key = value syntax read_config_file accepts.
std::string render_config(const RunConfig& config);

struct MeanCurvePoint {
    std::uint64_t generation = 0;
    std::size_t runs = 0;
    double fes = 0.0;
    double best_F = 0.0;
    double best_f_true = 0.0;
    double alive = 0.0;
    double layered_accuracy = 0.0;
};

struct SeedOutcome {
    std::uint64_t seed = 0;
    RunResult result;
    double mean_layered_accuracy = 0.0;
};

/// Statistics over the configured seeds. `std` is the sample standard deviation.
struct BatchSummary {
    std::vector<SeedOutcome> runs;
    double mean = 0.0;
    double std = 0.0;
    double median = 0.0;
    double mean_layered_accuracy = 0.0;
    double std_layered_accuracy = 0.0;
    std::vector<MeanCurvePoint> curve;
};

struct Stats {
    double mean = 0.0;
    double std = 0.0;
    double median = 0.0;
};
Stats describe(std::vector<double> values);

/// One engine run per seed, up to `config.jobs` at a time. When
/// `config.out_dir` is set, writes config.toml, per-seed convergence and
/// detection CSVs, summary.csv and mean_convergence.csv there.
BatchSummary run_batch(const RunConfig& config);

enum class SweepAxis { Sparsity, DetectionWindow };

struct SweepResult {
    SweepAxis axis = SweepAxis::Sparsity;
    std::vector<double> values;
    std::vector<BatchSummary> batches;
    /// Mean layered accuracy never decreases as sparsity grows.
    bool accuracy_nondecreasing = true;
};

/// Parses a comma-separated value list for `axis`; "max" is accepted for the
/// detection window and means a window longer than any run.
std::vector<double> parse_sweep_values(SweepAxis axis, std::string_view spec, const RunConfig& base);

/// One batch per value; each batch writes into `<out>/<axis>_<value>/` and a
/// combined sweep.csv goes to `<out>`.
SweepResult sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values);

std::string summary_csv(const BatchSummary& summary);
std::string mean_convergence_csv(const BatchSummary& summary);
std::string sweep_csv(const SweepResult& result);

}  // namespace crowdec
