// Command-line driver: `crowdec run|batch|sweep [options]`.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "crowdec/error.hpp"
#include "crowdec/harness.hpp"
#include "crowdec/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Flags {
    std::string config;
    std::map<std::string, std::string> values;
    bool no_detection = false;
    bool header = false;
    bool reevaluate_elites = false;
    bool log_tuples = false;
};

// Registers one string-valued option whose value lands in flags.values[key].
void value_option(CLI::App& app, Flags& flags, const std::string& name, const std::string& key,
                  const std::string& help) {
    app.add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
}

void add_common(CLI::App& app, Flags& f) {
    app.add_option("--config", f.config, "Flat key = value configuration file");
    value_option(app, f, "--problem", "problem",
                 "sphere|elliptic|rastrigin|ackley|rosenbrock|schwefel12|clustering");
    value_option(app, f, "--dim", "dim", "Benchmark dimension");
    value_option(app, f, "--np", "np", "Number of worker agents");
    value_option(app, f, "--fes", "fes", "Evaluation budget (default 1000 x dimension)");
    value_option(app, f, "--u", "u", "Detection window in generations");
    value_option(app, f, "--sparsity", "sparsity", "Neighbor fraction in (0, 1]");
    value_option(app, f, "--phi", "phi", "Second-exemplar weight");
    value_option(app, f, "--lambda", "lambda", "Win-rate penalty");
    value_option(app, f, "--noise-mode", "noise_mode", "none|positive|negative|clustering-replacement");
    app.add_flag("--no-detection", f.no_detection, "Disable uncertainty detection");
    value_option(app, f, "--seeds", "seeds", "Seed list, e.g. 1..25 or 1,3,5");
    value_option(app, f, "--jobs", "jobs", "Parallel runs");
    value_option(app, f, "--out", "out", "Output directory (default $CEC_OUT)");
    value_option(app, f, "--reliable-fraction", "reliable_fraction", "Share of workers with |bv| <= 1");
    value_option(app, f, "--max-exponent", "max_exponent", "Largest bound exponent");
    value_option(app, f, "--inertia", "inertia", "velocity|position");
    value_option(app, f, "--max-generations", "max_generations", "Generation cap (0 = none)");
    app.add_flag("--reevaluate-elites", f.reevaluate_elites, "Re-evaluate level-1 agents every generation");
    app.add_flag("--log-tuples", f.log_tuples, "Write comparison tuples per seed");
    value_option(app, f, "--k", "k", "Number of cluster centers");
    value_option(app, f, "--data", "data", "Clustering CSV file (synthetic blobs when omitted)");
    value_option(app, f, "--x-column", "x_column", "CSV column of the first coordinate");
    value_option(app, f, "--y-column", "y_column", "CSV column of the second coordinate");
    app.add_flag("--header", f.header, "CSV has a header row");
    value_option(app, f, "--blob-clusters", "blob_clusters", "Synthetic blob count");
    value_option(app, f, "--points-per-cluster", "points_per_cluster", "Synthetic points per blob");
    value_option(app, f, "--spread", "spread", "Synthetic blob standard deviation");
    value_option(app, f, "--data-seed", "data_seed", "Synthetic data seed");
}

crowdec::RunConfig resolve(const Flags& f) {
    crowdec::RunConfig defaults;
    if (const char* env = std::getenv("CEC_OUT"); env != nullptr && *env != '\0') defaults.out_dir = env;
    else defaults.out_dir = "crowdec-out";

    auto overrides = f.values;
    if (f.no_detection) overrides["detection"] = "false";
    if (f.header) overrides["header"] = "true";
    if (f.reevaluate_elites) overrides["reevaluate_elites"] = "true";
    if (f.log_tuples) overrides["log_tuples"] = "true";
    std::optional<std::filesystem::path> file;
    if (!f.config.empty()) file = f.config;
    return crowdec::parse_config(file, overrides, defaults);
}

void print_batch(const crowdec::BatchSummary& s) {
    using crowdec::format_real;
    for (const auto& r : s.runs) {
        std::cout << "seed " << r.seed << ": f_server=" << format_real(r.result.f_server)
                  << " fes=" << r.result.fes_used << " generations=" << r.result.generations
                  << " alive=" << r.result.final_alive << " detections=" << r.result.detections.size()
                  << " status=" << crowdec::to_string(r.result.status) << '\n';
    }
    std::cout << "mean=" << format_real(s.mean) << " std=" << format_real(s.std)
              << " median=" << format_real(s.median)
              << " layered_accuracy=" << format_real(s.mean_layered_accuracy) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crowdsourcing-based evolutionary computation simulator"};
    app.require_subcommand(1);

    Flags run_flags, batch_flags, sweep_flags;
    auto* run_cmd = app.add_subcommand("run", "Single run with the first configured seed");
    add_common(*run_cmd, run_flags);
    auto* batch_cmd = app.add_subcommand("batch", "One run per seed with aggregate statistics");
    add_common(*batch_cmd, batch_flags);
    auto* sweep_cmd = app.add_subcommand("sweep", "One batch per value of a parameter axis");
    add_common(*sweep_cmd, sweep_flags);
    std::string axis;
    std::string values;
    sweep_cmd->add_option("--axis", axis, "sparsity|u")->required();
    sweep_cmd->add_option("--values", values, "Comma-separated values ('max' allowed for u)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (run_cmd->parsed()) {
            auto cfg = resolve(run_flags);
            cfg.seeds.resize(1);
            print_batch(crowdec::run_batch(cfg));
        } else if (batch_cmd->parsed()) {
            print_batch(crowdec::run_batch(resolve(batch_flags)));
        } else {
            const auto cfg = resolve(sweep_flags);
            crowdec::SweepAxis ax;
            if (axis == "sparsity") ax = crowdec::SweepAxis::Sparsity;
            else if (axis == "u") ax = crowdec::SweepAxis::DetectionWindow;
            else throw crowdec::ConfigError("axis: expected sparsity|u, got '" + axis + "'");
            const auto result = crowdec::sweep(cfg, ax, crowdec::parse_sweep_values(ax, values, cfg));
            for (std::size_t i = 0; i < result.values.size(); ++i) {
                const auto& b = result.batches[i];
                std::cout << axis << '=' << crowdec::format_real(result.values[i])
                          << ": mean=" << crowdec::format_real(b.mean)
                          << " median=" << crowdec::format_real(b.median)
                          << " layered_accuracy=" << crowdec::format_real(b.mean_layered_accuracy) << '\n';
            }
            if (ax == crowdec::SweepAxis::Sparsity)
                std::cout << "accuracy trend: "
                          << (result.accuracy_nondecreasing ? "nondecreasing" : "violated") << '\n';
        }
    } catch (const crowdec::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const crowdec::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const crowdec::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
