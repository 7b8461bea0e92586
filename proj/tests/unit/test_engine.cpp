#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "crowdec/engine.hpp"
#include "crowdec/error.hpp"
#include "crowdec/report.hpp"

using namespace crowdec;

namespace {

RunConfig small_config() {
    RunConfig c;
    c.benchmark = "sphere";
    c.dim = 5;
    c.np = 20;
    c.max_fes = 3000;
    c.u = 10;
    c.sparsity = 0.3;
    return c;
}

std::string convergence_text(const RunResult& r) {
    std::ostringstream os;
    write_convergence_csv(os, r);
    return os.str();
}

}  // namespace

TEST_CASE("initialization spends one evaluation per agent") {
    const Engine e(small_config(), 1);
    CHECK(e.state().budget.used_fes() == 20);
    CHECK(e.state().alive_ids().size() == 20);
    CHECK_FALSE(e.done());
}

TEST_CASE("same seed, same run") {
    const auto a = run(small_config(), 7);
    const auto b = run(small_config(), 7);
    CHECK(convergence_text(a) == convergence_text(b));
    CHECK(a.x_best == b.x_best);
    const auto c = run(small_config(), 8);
    CHECK(convergence_text(a) != convergence_text(c));
}

TEST_CASE("budget equal to the swarm size leaves no generations") {
    auto cfg = small_config();
    cfg.max_fes = cfg.np;
    const auto r = run(cfg, 1);
    CHECK(r.generations == 0);
    CHECK(r.status == RunStatus::BudgetExhausted);
    CHECK(r.fes_used == cfg.np);
    CHECK(std::isfinite(r.f_server));
}

TEST_CASE("positions stay in bounds and the budget holds") {
    auto cfg = small_config();
    cfg.max_fes = 2017;
    cfg.detection = false;
    Engine e(cfg, 3);
    std::uint64_t last_fes = 0;
    while (!e.done()) {
        e.step();
        const auto& s = e.state();
        for (const auto& p : s.particles) REQUIRE(s.problem.truth->domain.contains(p.position));
        REQUIRE(s.budget.used_fes() <= cfg.max_fes);
        REQUIRE(s.log.back().fes >= last_fes);
        last_fes = s.log.back().fes;
    }
    CHECK(e.finish().fes_used == 2017);
}

TEST_CASE("without detection the swarm never shrinks") {
    auto cfg = small_config();
    cfg.detection = false;
    const auto r = run(cfg, 4);
    CHECK(r.detections.empty());
    for (const auto& rec : r.convergence) CHECK(rec.alive == 20);
}

TEST_CASE("detection fires only on window boundaries") {
    auto cfg = small_config();
    cfg.np = 40;
    cfg.u = 5;
    const auto r = run(cfg, 5);
    REQUIRE_FALSE(r.detections.empty());
    CHECK(r.detections.front().generation == 5);
    for (const auto& d : r.detections) CHECK(d.generation % 5 == 0);
    // The noisiest worker cannot climb out of the bottom level.
    const bool worst_found = std::any_of(r.detections.begin(), r.detections.end(),
                                         [](const DetectionEvent& d) { return d.agent == 39; });
    CHECK(worst_found);
    CHECK(r.final_alive + r.detections.size() == 40);
}

TEST_CASE("the best agent persists on a complete graph") {
    auto cfg = small_config();
    cfg.sparsity = 1.0;
    cfg.detection = false;
    const auto r = run(cfg, 6);
    for (std::size_t g = 1; g < r.convergence.size(); ++g)
        CHECK(r.convergence[g].best_F <= r.convergence[g - 1].best_F);
}

TEST_CASE("detected agents take no further part") {
    auto cfg = small_config();
    cfg.np = 40;
    cfg.u = 5;
    cfg.log_tuples = true;
    const auto r = run(cfg, 9);
    REQUIRE_FALSE(r.detections.empty());
    for (const auto& d : r.detections) {
        for (const auto& t : r.tuples) {
            if (t.generation <= d.generation) continue;
            REQUIRE(t.tuple.id1 != d.agent);
            REQUIRE(t.tuple.id2 != d.agent);
        }
    }
}

TEST_CASE("topology stream is isolated from the others") {
    auto cfg = small_config();
    cfg.detection = false;
    auto seeds = StreamSeeds::from_master(11);
    const auto a = run(cfg, seeds);
    seeds.noise ^= 0x1234;
    seeds.evolution ^= 0x5678;
    const auto b = run(cfg, seeds);
    REQUIRE(a.convergence.size() == b.convergence.size());
    for (std::size_t g = 0; g < a.convergence.size(); ++g)
        CHECK(a.convergence[g].topology_digest == b.convergence[g].topology_digest);
    CHECK(convergence_text(a) != convergence_text(b));
}

TEST_CASE("true fitness never steers the run") {
    auto cfg = small_config();
    const auto clean = run(cfg, 12);
    cfg.poison_true_fitness = true;
    const auto poisoned = run(cfg, 12);
    CHECK(clean.x_best == poisoned.x_best);
    CHECK(clean.detections.size() == poisoned.detections.size());
    REQUIRE(clean.convergence.size() == poisoned.convergence.size());
    for (std::size_t g = 0; g < clean.convergence.size(); ++g) {
        CHECK(clean.convergence[g].best_F == poisoned.convergence[g].best_F);
        CHECK(std::isnan(poisoned.convergence[g].best_f_true));
    }
}

TEST_CASE("agents without budget are reverted") {
    auto cfg = small_config();
    cfg.sparsity = 1.0;
    cfg.max_fes = 25;
    Engine e(cfg, 13);
    const auto before = e.state().particles;
    e.step();
    const auto& s = e.state();
    CHECK(s.log.back().partial);
    CHECK(s.budget.used_fes() == 25);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < before.size(); ++i) changed += before[i].position != s.particles[i].position;
    CHECK(changed == 5);
    CHECK(e.done());
}

TEST_CASE("re-evaluating elites costs their evaluations") {
    auto cfg = small_config();
    cfg.sparsity = 1.0;
    cfg.max_generations = 1;
    const auto plain = run(cfg, 14);
    cfg.reevaluate_elites = true;
    const auto elites = run(cfg, 14);
    CHECK(plain.fes_used == 20 + 15);
    CHECK(elites.fes_used == 20 + 20);
    CHECK(elites.status == RunStatus::GenerationLimit);
}

TEST_CASE("noise-free workers report the truth") {
    auto cfg = small_config();
    cfg.noise = NoiseMode::None;
    Engine e(cfg, 15);
    e.step();
    for (const auto& a : e.state().agents) CHECK(a.cached_F == a.cached_f_true);
}

TEST_CASE("clustering run") {
    RunConfig cfg;
    cfg.kind = ProblemKind::Clustering;
    cfg.noise = NoiseMode::ClusteringReplacement;
    cfg.clustering.k = 3;
    cfg.clustering.blob_clusters = 3;
    cfg.clustering.points_per_cluster = 40;
    cfg.clustering.spread = 0.05;
    cfg.np = 20;
    cfg.max_fes = 3000;
    cfg.u = 20;
    const auto r = run(cfg, 16);
    CHECK(r.x_best.size() == 6);
    CHECK(r.f_server >= 0.0);
    const auto problem = make_problem(cfg);
    Rng rng(99);
    std::vector<double> random_centers(6);
    for (std::size_t d = 0; d < 6; ++d)
        random_centers[d] = rng.uniform(problem.truth->domain.lower(d), problem.truth->domain.upper(d));
    CHECK(r.f_server < (*problem.truth)(random_centers));
    for (const auto& d : r.detections) {
        CHECK(d.bound_value == double(d.agent + 1));
    }
}

TEST_CASE("configuration validation") {
    auto cfg = small_config();
    cfg.np = 4;
    CHECK_THROWS_AS(Engine(cfg, 1), ConfigError);
    cfg = small_config();
    cfg.sparsity = 0.0;
    cfg.phi = -1.0;
    CHECK(cfg.violations().size() == 2);
    cfg = small_config();
    cfg.noise = NoiseMode::ClusteringReplacement;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = small_config();
    cfg.max_fes = 0;
    CHECK(cfg.effective_max_fes() == 5000);
}
