// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "crowdec/engine.hpp"
#include "crowdec/harness.hpp"
#include "crowdec/ranking.hpp"
#include "crowdec/report.hpp"

using namespace crowdec;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < limit_seconds;
    const bool ok = v.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] %2d %s | %s | %.3fs (limit %gs)%s\n", ok ? "PASS" : "FAIL", id, title,
                v.detail.c_str(), secs, limit_seconds, in_time ? "" : " TIMEOUT");
    std::fflush(stdout);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

std::vector<std::uint64_t> seed_range(std::uint64_t n) {
    std::vector<std::uint64_t> s(n);
    std::iota(s.begin(), s.end(), std::uint64_t{1});
    return s;
}

ComparisonMatrix complete_matrix(const std::vector<double>& f) {
    ComparisonMatrix m(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            m.record(i, j, f[i] < f[j] ? Outcome::Win : f[i] > f[j] ? Outcome::Lose : Outcome::Tie);
    return m;
}

bool order_matches(const std::vector<double>& f) {
    const auto r = competition_rank(complete_matrix(f));
    for (std::size_t k = 1; k < f.size(); ++k) {
        if (!(f[r.order[k - 1]] < f[r.order[k]])) return false;
    }
    return true;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Tolerances and thresholds.
constexpr double kPriTolerance = 1e-3;
constexpr double kSparseAccuracyFloor = 0.80;
constexpr double kDetectionOrderShare = 0.80;
constexpr double kConvergenceFactor = 1e6;
constexpr double kKMeansEnvelope = 2.0;

}  // namespace

int main() {
    criterion(1, "worked five-agent ranking", 0.001, [] {
        const int wins[5][5] = {
            {0, 0, 0, 0, 1}, {1, 0, 1, 1, 1}, {1, 0, 0, 0, 1}, {1, 0, 1, 0, 1}, {0, 0, 0, 0, 0}};
        ComparisonMatrix m(5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = i + 1; j < 5; ++j) m.record(i, j, wins[i][j] ? Outcome::Win : Outcome::Lose);
        const auto r = competition_rank(m, 0.01);
        const double expected[5] = {0.0707, 0.5270, 0.1512, 0.2499, 0.0011};
        double worst = 0.0;
        for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, std::abs(r.pri[i] - expected[i]));
        std::string order;
        for (auto k : r.order) order += std::to_string(k + 1);
        return Verdict{worst <= kPriTolerance && order == "24315",
                       "max |dPRI| " + fmt(worst) + ", order " + order};
    });

    criterion(2, "dense ranking equals the fitness order", 10.0, [] {
        std::size_t cases = 0;
        std::size_t mismatches = 0;
        for (std::size_t n = 1; n <= 8; ++n) {
            std::vector<double> f(n);
            std::iota(f.begin(), f.end(), 1.0);
            do {
                ++cases;
                mismatches += !order_matches(f);
            } while (std::next_permutation(f.begin(), f.end()));
        }
        Rng rng(2024);
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 9 + rng.index(92);
            std::vector<double> f(n);
            for (auto& v : f) v = rng.uniform(-1e3, 1e3);
            ++cases;
            mismatches += !order_matches(f);
        }
        return Verdict{mismatches == 0,
                       std::to_string(mismatches) + " mismatches in " + std::to_string(cases) + " cases"};
    });

    // Shared by criteria 3 and 4.
    BatchSummary dense;
    criterion(3, "fully connected layered accuracy", 120.0, [&dense] {
        RunConfig c;
        c.benchmark = "sphere";
        c.dim = 50;
        c.np = 100;
        c.sparsity = 1.0;
        c.seeds = seed_range(25);
        dense = run_batch(c);
        double lowest = 1.0;
        for (const auto& r : dense.runs)
            for (const auto& g : r.result.convergence) lowest = std::min(lowest, g.layered_accuracy);
        return Verdict{dense.mean_layered_accuracy == 1.0 && dense.std_layered_accuracy == 0.0 && lowest == 1.0,
                       "mean " + fmt(dense.mean_layered_accuracy) + ", sd " + fmt(dense.std_layered_accuracy) +
                           ", lowest generation " + fmt(lowest)};
    });

    criterion(4, "sparse layered accuracy and trend", 600.0, [&dense] {
        RunConfig c;
        c.benchmark = "sphere";
        c.dim = 50;
        c.np = 100;
        c.sparsity = 0.1;
        c.seeds = seed_range(25);
        const auto sparse = run_batch(c);
        const double a = sparse.mean_layered_accuracy;
        const double b = dense.runs.empty() ? std::numeric_limits<double>::quiet_NaN()
                                            : dense.mean_layered_accuracy;
        return Verdict{a > kSparseAccuracyFloor && a < b,
                       "sparsity 0.1: " + fmt(a) + " (floor " + fmt(kSparseAccuracyFloor) + "), sparsity 1.0: " + fmt(b)};
    });

    criterion(5, "noisier workers are detected earlier", 600.0, [] {
        RunConfig c;
        c.np = 100;
        c.noise = NoiseMode::Positive;
        c.seeds = seed_range(25);
        const auto batch = run_batch(c);
        std::size_t ordered = 0;
        for (const auto& r : batch.runs) {
            auto when = [&r](AgentId id) {
                for (const auto& d : r.result.detections)
                    if (d.agent == id) return static_cast<double>(d.generation);
                return std::numeric_limits<double>::infinity();
            };
            // 0-based agents 99, 95, 91 carry bounds 2^30, 2^18, 2^6.
            ordered += when(99) <= when(95) && when(95) <= when(91);
        }
        const double share = static_cast<double>(ordered) / 25.0;
        return Verdict{share >= kDetectionOrderShare, std::to_string(ordered) + "/25 seeds ordered"};
    });

    criterion(6, "detection helps on sphere and elliptic", 900.0, [] {
        std::string detail;
        bool ok = true;
        for (const char* p : {"sphere", "elliptic"}) {
            RunConfig c;
            c.benchmark = p;
            c.dim = 50;
            c.np = 100;
            c.max_fes = 50000;
            c.u = 100;
            c.sparsity = 0.1;
            c.seeds = seed_range(25);
            c.detection = true;
            const double with = run_batch(c).median;
            c.detection = false;
            const double without = run_batch(c).median;
            ok = ok && with <= without;
            detail += std::string(p) + " " + fmt(with) + " vs " + fmt(without) + "; ";
        }
        return Verdict{ok, detail};
    });

    criterion(7, "noise-free convergence", 60.0, [] {
        std::vector<double> factors;
        for (std::uint64_t s = 1; s <= 10; ++s) {
            RunConfig c;
            c.benchmark = "sphere";
            c.dim = 30;
            c.np = 64;
            c.phi = 0.4;
            c.sparsity = 1.0;
            c.noise = NoiseMode::None;
            c.detection = false;
            c.max_generations = 500;
            c.max_fes = 64 + 500 * 64;
            Engine e(c, s);
            double initial = std::numeric_limits<double>::infinity();
            for (const auto& a : e.state().agents) initial = std::min(initial, a.cached_f_true);
            while (!e.done()) e.step();
            const auto r = e.finish();
            factors.push_back(initial / r.convergence.back().best_f_true);
        }
        const double m = median(factors);
        return Verdict{m >= kConvergenceFactor, "median improvement factor " + fmt(m)};
    });

    criterion(8, "clustering beats random centers and tracks k-means", 300.0, [] {
        RunConfig c;
        c.kind = ProblemKind::Clustering;
        c.noise = NoiseMode::ClusteringReplacement;
        c.clustering.k = 4;
        c.clustering.blob_clusters = 4;
        c.clustering.points_per_cluster = 250;
        c.clustering.spread = 0.1;
        c.seeds = seed_range(25);
        const auto problem = make_problem(c);
        const auto batch = run_batch(c);
        const auto& dom = problem.truth->domain;
        std::size_t beat_random = 0;
        std::vector<double> finals;
        std::vector<double> kmeans;
        for (const auto& r : batch.runs) {
            Rng rng(derive_seed(r.seed, "random-centers"));
            std::vector<double> centers(dom.dim());
            for (std::size_t d = 0; d < dom.dim(); ++d) centers[d] = rng.uniform(dom.lower(d), dom.upper(d));
            beat_random += r.result.f_server <= (*problem.truth)(centers);
            finals.push_back(r.result.f_server);
            kmeans.push_back(kmeans_oracle(*problem.data, 4, r.seed).wcss);
        }
        const double km = median(kmeans);
        const double worst = *std::max_element(finals.begin(), finals.end());
        return Verdict{beat_random == 25 && worst <= kKMeansEnvelope * km,
                       std::to_string(beat_random) + "/25 beat random; worst " + fmt(worst) +
                           ", k-means median " + fmt(km)};
    });

    criterion(9, "budget, determinism and stream isolation", 60.0, [] {
        RunConfig c;
        c.benchmark = "rastrigin";
        c.dim = 10;
        c.np = 30;
        c.max_fes = 4013;
        c.u = 10;
        c.sparsity = 0.2;
        c.seeds = seed_range(5);
        c.log_tuples = true;
        const auto root = fs::temp_directory_path() / "crowdec_acceptance_9";
        fs::remove_all(root);
        c.out_dir = (root / "a").string();
        const auto a = run_batch(c);
        c.out_dir = (root / "b").string();
        c.jobs = 2;
        run_batch(c);

        bool budget = true;
        for (const auto& r : a.runs) budget = budget && r.result.fes_used <= r.result.max_fes;

        bool identical = true;
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(root / "a")) {
            const auto other = root / "b" / entry.path().filename();
            if (entry.path().filename() == "config.toml") continue;
            identical = identical && fs::exists(other) && slurp(entry.path()) == slurp(other);
            ++files;
        }

        RunConfig iso = c;
        iso.detection = false;
        iso.out_dir.clear();
        auto seeds = StreamSeeds::from_master(77);
        const auto base = run(iso, seeds);
        seeds.noise ^= 0x9e3779b97f4a7c15ULL;
        const auto moved = run(iso, seeds);
        bool isolated = base.convergence.size() == moved.convergence.size();
        for (std::size_t g = 0; isolated && g < base.convergence.size(); ++g)
            isolated = base.convergence[g].topology_digest == moved.convergence[g].topology_digest;

        return Verdict{budget && identical && isolated && files > 0,
                       std::string("budget ") + (budget ? "ok" : "broken") + ", " + std::to_string(files) +
                           " files " + (identical ? "identical" : "differ") + ", streams " +
                           (isolated ? "isolated" : "coupled")};
    });

    criterion(10, "true fitness never reaches the decision logic", 120.0, [] {
        std::size_t same = 0;
        const char* problems[] = {"sphere", "elliptic", "rastrigin", "ackley", "rosenbrock"};
        for (const char* p : problems) {
            RunConfig c;
            c.benchmark = p;
            c.dim = 20;
            c.np = 40;
            c.max_fes = 8000;
            c.u = 20;
            const auto clean = run(c, 5);
            c.poison_true_fitness = true;
            const auto poisoned = run(c, 5);
            same += clean.x_best == poisoned.x_best && clean.detections.size() == poisoned.detections.size();
        }
        return Verdict{same == 5, std::to_string(same) + "/5 configurations identical"};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
