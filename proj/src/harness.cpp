#include "crowdec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "crowdec/error.hpp"
#include "crowdec/report.hpp"

namespace crowdec {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string normalize_key(std::string_view key) {
    std::string k(trim(key));
    while (!k.empty() && k.front() == '-') k.erase(k.begin());
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    text = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError(std::string(key) + ": cannot parse '" + std::string(text) + "' as a number");
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(t) + "'");
}

std::string unquote(std::string_view v) {
    v = trim(v);
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
        v = v.substr(1, v.size() - 2);
    return std::string(v);
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(std::string_view spec) {
    std::string s = unquote(spec);
    if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
    std::vector<std::uint64_t> seeds;
    std::string_view rest(s);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty()) continue;
        const auto dots = item.find("..");
        if (dots == std::string_view::npos) {
            seeds.push_back(parse_number<std::uint64_t>("seeds", item));
            continue;
        }
        const auto lo = parse_number<std::uint64_t>("seeds", item.substr(0, dots));
        const auto hi = parse_number<std::uint64_t>("seeds", item.substr(dots + 2));
        if (hi < lo) throw ConfigError("seeds: range '" + std::string(item) + "' is descending");
        for (std::uint64_t x = lo; x <= hi; ++x) seeds.push_back(x);
    }
    if (seeds.empty()) throw ConfigError("seeds: expected a nonempty list, got '" + std::string(spec) + "'");
    return seeds;
}

void apply_setting(RunConfig& c, std::string_view raw_key, std::string_view raw_value) {
    const std::string key = normalize_key(raw_key);
    const std::string value = unquote(raw_value);
    auto& cl = c.clustering;

    if (key == "problem") {
        if (value == "clustering") {
            c.kind = ProblemKind::Clustering;
            if (c.noise == NoiseMode::Positive || c.noise == NoiseMode::Negative)
                c.noise = NoiseMode::ClusteringReplacement;
        } else {
            c.kind = ProblemKind::Benchmark;
            c.benchmark = value;
        }
    } else if (key == "dim") {
        c.dim = parse_number<std::size_t>(key, value);
    } else if (key == "np") {
        c.np = parse_number<std::size_t>(key, value);
    } else if (key == "fes") {
        c.max_fes = parse_number<std::uint64_t>(key, value);
    } else if (key == "u") {
        c.u = parse_number<std::size_t>(key, value);
    } else if (key == "sparsity") {
        c.sparsity = parse_number<double>(key, value);
    } else if (key == "phi") {
        c.phi = parse_number<double>(key, value);
    } else if (key == "lambda") {
        c.lambda = parse_number<double>(key, value);
    } else if (key == "noise_mode") {
        if (value == "none") c.noise = NoiseMode::None;
        else if (value == "positive") c.noise = NoiseMode::Positive;
        else if (value == "negative") c.noise = NoiseMode::Negative;
        else if (value == "clustering-replacement" || value == "clustering_replacement")
            c.noise = NoiseMode::ClusteringReplacement;
        else
            throw ConfigError("noise_mode: expected none|positive|negative|clustering-replacement, got '" +
                              value + "'");
    } else if (key == "detection") {
        c.detection = parse_bool(key, value);
    } else if (key == "no_detection") {
        c.detection = !parse_bool(key, value);
    } else if (key == "reliable_fraction") {
        c.reliable_fraction = parse_number<double>(key, value);
    } else if (key == "max_exponent") {
        c.max_exponent = parse_number<double>(key, value);
    } else if (key == "inertia") {
        if (value == "velocity") c.inertia = InertiaSource::Velocity;
        else if (value == "position") c.inertia = InertiaSource::Position;
        else throw ConfigError("inertia: expected velocity|position, got '" + value + "'");
    } else if (key == "reevaluate_elites") {
        c.reevaluate_elites = parse_bool(key, value);
    } else if (key == "max_generations") {
        c.max_generations = parse_number<std::uint64_t>(key, value);
    } else if (key == "log_tuples") {
        c.log_tuples = parse_bool(key, value);
    } else if (key == "seeds") {
        c.seeds = parse_seeds(value);
    } else if (key == "jobs") {
        c.jobs = parse_number<std::size_t>(key, value);
    } else if (key == "out") {
        c.out_dir = value;
    } else if (key == "k") {
        cl.k = parse_number<std::size_t>(key, value);
    } else if (key == "data") {
        cl.csv_path = value;
    } else if (key == "x_column") {
        cl.csv.x_column = parse_number<std::size_t>(key, value);
    } else if (key == "y_column") {
        cl.csv.y_column = parse_number<std::size_t>(key, value);
    } else if (key == "header") {
        cl.csv.has_header = parse_bool(key, value);
    } else if (key == "blob_clusters") {
        cl.blob_clusters = parse_number<std::size_t>(key, value);
    } else if (key == "points_per_cluster") {
        cl.points_per_cluster = parse_number<std::size_t>(key, value);
    } else if (key == "spread") {
        cl.spread = parse_number<double>(key, value);
    } else if (key == "data_seed") {
        cl.data_seed = parse_number<std::uint64_t>(key, value);
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path.string() + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v(line);
        // '#' starts a comment unless it sits inside quotes.
        bool quoted = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == '"') quoted = !quoted;
            if (v[i] == '#' && !quoted) {
                v = v.substr(0, i);
                break;
            }
        }
        v = trim(v);
        if (v.empty()) continue;
        if (v.front() == '[') throw ParseError("tables are not supported; use flat key = value", line_no);
        const auto eq = v.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        const auto key = normalize_key(v.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", line_no);
        out[key] = std::string(trim(v.substr(eq + 1)));
    }
    return out;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                       const std::map<std::string, std::string>& overrides,
                       const RunConfig& defaults) {
    RunConfig c = defaults;
    // "problem" goes first so that noise defaults follow the problem kind.
    auto apply_all = [&c](const std::map<std::string, std::string>& kv) {
        if (auto it = kv.find("problem"); it != kv.end()) apply_setting(c, it->first, it->second);
        for (const auto& [k, v] : kv) {
            if (k != "problem") apply_setting(c, k, v);
        }
    };
    if (file) apply_all(read_config_file(*file));
    std::map<std::string, std::string> normalized;
    for (const auto& [k, v] : overrides) normalized[normalize_key(k)] = v;
    apply_all(normalized);
    c.validate();
    return c;
}

std::string render_config(const RunConfig& c) {
    std::ostringstream os;
    const auto& cl = c.clustering;
    os << "problem = \"" << (c.kind == ProblemKind::Clustering ? "clustering" : c.benchmark) << "\"\n";
    if (c.kind == ProblemKind::Benchmark) {
        os << "dim = " << c.dim << '\n';
    } else {
        os << "k = " << cl.k << '\n';
        if (!cl.csv_path.empty()) {
            os << "data = \"" << cl.csv_path << "\"\n"
               << "x_column = " << cl.csv.x_column << '\n'
               << "y_column = " << cl.csv.y_column << '\n'
               << "header = " << (cl.csv.has_header ? "true" : "false") << '\n';
        } else {
            os << "blob_clusters = " << cl.blob_clusters << '\n'
               << "points_per_cluster = " << cl.points_per_cluster << '\n'
               << "spread = " << format_real(cl.spread) << '\n'
               << "data_seed = " << cl.data_seed << '\n';
        }
    }
    os << "np = " << c.np << '\n'
       << "fes = " << c.effective_max_fes() << '\n'
       << "u = " << c.u << '\n'
       << "sparsity = " << format_real(c.sparsity) << '\n'
       << "phi = " << format_real(c.phi) << '\n'
       << "lambda = " << format_real(c.lambda) << '\n'
       << "noise_mode = \"" << to_string(c.noise) << "\"\n"
       << "detection = " << (c.detection ? "true" : "false") << '\n'
       << "reliable_fraction = " << format_real(c.reliable_fraction) << '\n'
       << "max_exponent = " << format_real(c.max_exponent) << '\n'
       << "inertia = \"" << to_string(c.inertia) << "\"\n"
       << "reevaluate_elites = " << (c.reevaluate_elites ? "true" : "false") << '\n'
       << "max_generations = " << c.max_generations << '\n'
       << "log_tuples = " << (c.log_tuples ? "true" : "false") << '\n';
    os << "seeds = \"";
    for (std::size_t i = 0; i < c.seeds.size(); ++i) os << (i ? "," : "") << c.seeds[i];
    os << "\"\n";
    return os.str();
}

Stats describe(std::vector<double> values) {
    Stats s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / n;
    if (values.size() > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(sq / (n - 1.0));
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    return s;
}

namespace {

double mean_accuracy(const RunResult& r) {
    if (r.convergence.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& g : r.convergence) sum += g.layered_accuracy;
    return sum / static_cast<double>(r.convergence.size());
}

std::vector<MeanCurvePoint> mean_curve(const std::vector<SeedOutcome>& runs) {
    std::vector<MeanCurvePoint> curve;
    for (const auto& run : runs) {
        const auto& log = run.result.convergence;
        if (log.size() > curve.size()) curve.resize(log.size());
        for (std::size_t i = 0; i < log.size(); ++i) {
            auto& p = curve[i];
            p.generation = log[i].generation;
            ++p.runs;
            p.fes += static_cast<double>(log[i].fes);
            p.best_F += log[i].best_F;
            p.best_f_true += log[i].best_f_true;
            p.alive += static_cast<double>(log[i].alive);
            p.layered_accuracy += log[i].layered_accuracy;
        }
    }
    for (auto& p : curve) {
        const double k = static_cast<double>(p.runs);
        p.fes /= k;
        p.best_F /= k;
        p.best_f_true /= k;
        p.alive /= k;
        p.layered_accuracy /= k;
    }
    return curve;
}

std::string to_csv(void (*writer)(std::ostream&, const RunResult&), const RunResult& r) {
    std::ostringstream os;
    writer(os, r);
    return os.str();
}

}  // namespace

BatchSummary run_batch(const RunConfig& config) {
    config.validate();
    // Build the problem once so configuration and I/O errors surface before any run.
    const Problem problem = make_problem(config);

    BatchSummary summary;
    summary.runs.resize(config.seeds.size());

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= config.seeds.size()) return;
            try {
                Engine engine(config, StreamSeeds::from_master(config.seeds[i]), problem);
                while (!engine.done()) engine.step();
                auto& out = summary.runs[i];
                out.seed = config.seeds[i];
                out.result = engine.finish();
                out.mean_layered_accuracy = mean_accuracy(out.result);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    const std::size_t jobs = std::min(config.jobs, config.seeds.size());
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    std::vector<double> finals;
    std::vector<double> accs;
    for (const auto& r : summary.runs) {
        finals.push_back(r.result.f_server);
        accs.push_back(r.mean_layered_accuracy);
    }
    const Stats fs = describe(finals);
    const Stats as = describe(accs);
    summary.mean = fs.mean;
    summary.std = fs.std;
    summary.median = fs.median;
    summary.mean_layered_accuracy = as.mean;
    summary.std_layered_accuracy = as.std;
    summary.curve = mean_curve(summary.runs);

    if (!config.out_dir.empty()) {
        const std::filesystem::path out(config.out_dir);
        write_text_file(out / "config.toml", render_config(config));
        for (const auto& r : summary.runs) {
            const std::string stem = "seed_" + std::to_string(r.seed);
            write_text_file(out / (stem + "_convergence.csv"), to_csv(write_convergence_csv, r.result));
            write_text_file(out / (stem + "_detections.csv"), to_csv(write_detections_csv, r.result));
            if (config.log_tuples)
                write_text_file(out / (stem + "_tuples.csv"), to_csv(write_tuples_csv, r.result));
        }
        write_text_file(out / "summary.csv", summary_csv(summary));
        write_text_file(out / "mean_convergence.csv", mean_convergence_csv(summary));
    }
    return summary;
}

std::string summary_csv(const BatchSummary& s) {
    std::ostringstream os;
    os << "row,seed,f_server,fes_used,generations,final_alive,detections,status,mean_layered_accuracy,"
          "mean,std,median\n";
    for (const auto& r : s.runs) {
        const auto& res = r.result;
        os << "seed," << r.seed << ',' << format_real(res.f_server) << ',' << res.fes_used << ','
           << res.generations << ',' << res.final_alive << ',' << res.detections.size() << ','
           << to_string(res.status) << ',' << format_real(r.mean_layered_accuracy) << ",,,\n";
    }
    os << "aggregate,,,,,,,," << format_real(s.mean_layered_accuracy) << ',' << format_real(s.mean)
       << ',' << format_real(s.std) << ',' << format_real(s.median) << '\n';
    return os.str();
}

std::string mean_convergence_csv(const BatchSummary& s) {
    std::ostringstream os;
    os << "generation,runs,mean_fes,mean_best_F,mean_best_f_true,mean_alive,mean_layered_accuracy\n";
    for (const auto& p : s.curve) {
        os << p.generation << ',' << p.runs << ',' << format_real(p.fes) << ',' << format_real(p.best_F)
           << ',' << format_real(p.best_f_true) << ',' << format_real(p.alive) << ','
           << format_real(p.layered_accuracy) << '\n';
    }
    return os.str();
}

std::vector<double> parse_sweep_values(SweepAxis axis, std::string_view spec, const RunConfig& base) {
    std::vector<double> values;
    std::string_view rest = spec;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item.empty()) continue;
        if (item == "max") {
            if (axis != SweepAxis::DetectionWindow)
                throw ConfigError("values: 'max' only applies to the u axis");
            // No run can last longer than its evaluation budget in generations.
            values.push_back(static_cast<double>(base.effective_max_fes() + 1));
            continue;
        }
        const double v = parse_number<double>("values", item);
        if (axis == SweepAxis::Sparsity && !(v > 0.0 && v <= 1.0))
            throw ConfigError("values: sparsity " + std::string(item) + " outside (0, 1]");
        if (axis == SweepAxis::DetectionWindow && !(v >= 1.0 && v == std::floor(v)))
            throw ConfigError("values: u " + std::string(item) + " is not a positive integer");
        values.push_back(v);
    }
    if (values.empty()) throw ConfigError("values: expected a nonempty list");
    return values;
}

namespace {

RunConfig with_axis(RunConfig c, SweepAxis axis, double v) {
    if (axis == SweepAxis::Sparsity) c.sparsity = v;
    else c.u = static_cast<std::size_t>(v);
    return c;
}

const char* axis_name(SweepAxis axis) {
    return axis == SweepAxis::Sparsity ? "sparsity" : "u";
}

}  // namespace

SweepResult sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    // Validate every point before running any of them.
    for (double v : values) with_axis(base, axis, v).validate();

    SweepResult res;
    res.axis = axis;
    res.values = values;
    for (double v : values) {
        RunConfig c = with_axis(base, axis, v);
        if (!base.out_dir.empty())
            c.out_dir = (std::filesystem::path(base.out_dir) / (std::string(axis_name(axis)) + "_" + format_real(v))).string();
        res.batches.push_back(run_batch(c));
    }

    if (axis == SweepAxis::Sparsity) {
        std::vector<std::size_t> idx(values.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        for (std::size_t k = 1; k < idx.size(); ++k) {
            if (res.batches[idx[k]].mean_layered_accuracy < res.batches[idx[k - 1]].mean_layered_accuracy)
                res.accuracy_nondecreasing = false;
        }
    }
    if (!base.out_dir.empty()) write_text_file(std::filesystem::path(base.out_dir) / "sweep.csv", sweep_csv(res));
    return res;
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "axis,value,runs,mean,std,median,mean_layered_accuracy,std_layered_accuracy\n";
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const auto& b = r.batches[i];
        os << axis_name(r.axis) << ',' << format_real(r.values[i]) << ',' << b.runs.size() << ','
           << format_real(b.mean) << ',' << format_real(b.std) << ',' << format_real(b.median) << ','
           << format_real(b.mean_layered_accuracy) << ',' << format_real(b.std_layered_accuracy) << '\n';
    }
    return os.str();
}

}  // namespace crowdec
