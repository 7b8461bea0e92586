#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <numeric>

#include "crowdec/clustering.hpp"
#include "crowdec/engine.hpp"
#include "crowdec/error.hpp"
#include "crowdec/harness.hpp"
#include "crowdec/problems.hpp"
#include "crowdec/ranking.hpp"
#include "crowdec/topology.hpp"
#include "crowdec/uncertainty.hpp"

namespace py = pybind11;
using namespace crowdec;

namespace {

Outcome outcome_from(const std::string& cell) {
    if (cell == "w") return Outcome::Win;
    if (cell == "l") return Outcome::Lose;
    if (cell == "t") return Outcome::Tie;
    if (cell.empty() || cell == "-") return Outcome::Absent;
    throw ConfigError("outcome cells are 'w', 'l', 't' or '-', got '" + cell + "'");
}

py::dict ranking_dict(const RankingOutcome& r) {
    py::dict d;
    d["pri"] = r.pri;
    d["order"] = r.order;
    d["rank"] = r.rank;
    d["isolated"] = r.isolated;
    d["levels"] = classify_levels(r.order);
    return d;
}

py::dict result_dict(const RunResult& r) {
    py::dict d;
    d["x_best"] = r.x_best;
    d["f_server"] = r.f_server;
    d["best_agent"] = r.best_agent;
    d["fes_used"] = r.fes_used;
    d["max_fes"] = r.max_fes;
    d["generations"] = r.generations;
    d["final_alive"] = r.final_alive;
    d["status"] = to_string(r.status);
    py::list detections;
    for (const auto& e : r.detections) {
        py::dict x;
        x["generation"] = e.generation;
        x["agent_id"] = e.agent;
        x["bound_value"] = e.bound_value;
        x["tail_level"] = static_cast<int>(e.tail_level);
        detections.append(x);
    }
    d["detections"] = detections;
    py::list conv;
    for (const auto& g : r.convergence) {
        py::dict x;
        x["generation"] = g.generation;
        x["fes"] = g.fes;
        x["best_F"] = g.best_F;
        x["best_f_true"] = g.best_f_true;
        x["alive"] = g.alive;
        x["layered_accuracy"] = g.layered_accuracy;
        conv.append(x);
    }
    d["convergence"] = conv;
    return d;
}

std::vector<Point2> to_points(const std::vector<std::array<double, 2>>& pts) {
    return {pts.begin(), pts.end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Crowdsourcing-based evolutionary computation core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

    m.def("benchmark_names", &benchmark_names);
    m.def(
        "evaluate",
        [](const std::string& name, const std::vector<double>& x) { return make_benchmark(name, x.size())(x); },
        py::arg("name"), py::arg("x"));
    m.def(
        "domain",
        [](const std::string& name, std::size_t dim) {
            const auto obj = make_benchmark(name, dim);
            std::vector<double> lo(dim), hi(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                lo[d] = obj.domain.lower(d);
                hi[d] = obj.domain.upper(d);
            }
            return py::make_tuple(lo, hi);
        },
        py::arg("name"), py::arg("dim"));

    m.def(
        "wcss",
        [](const std::vector<std::array<double, 2>>& centers, const std::vector<std::array<double, 2>>& points) {
            return wcss(to_points(centers), Dataset(to_points(points)));
        },
        py::arg("centers"), py::arg("points"));
    m.def(
        "synth_blobs",
        [](std::size_t n_clusters, std::size_t ppc, double spread, std::uint64_t seed) {
            const auto b = synth_blobs(n_clusters, ppc, spread, seed);
            return py::make_tuple(b.data.points(), b.centers);
        },
        py::arg("n_clusters"), py::arg("points_per_cluster"), py::arg("spread"), py::arg("seed"));
    m.def(
        "kmeans",
        [](const std::vector<std::array<double, 2>>& points, std::size_t k, std::uint64_t seed) {
            const auto r = kmeans_oracle(Dataset(to_points(points)), k, seed);
            return py::make_tuple(r.centers, r.wcss);
        },
        py::arg("points"), py::arg("k"), py::arg("seed") = 1);

    m.def("bound_schedule", &bound_schedule, py::arg("n"), py::arg("reliable_fraction") = 0.9,
          py::arg("max_exponent") = 30.0);

    m.def(
        "random_topology",
        [](std::size_t n, double sparsity, std::uint64_t seed) {
            std::vector<AgentId> ids(n);
            std::iota(ids.begin(), ids.end(), AgentId{0});
            Rng rng(seed);
            const auto t = random_topology(ids, sparsity, rng);
            std::vector<std::vector<AgentId>> out(n);
            for (AgentId i = 0; i < n; ++i) out[i].assign(t.neighbors(i).begin(), t.neighbors(i).end());
            return out;
        },
        py::arg("n"), py::arg("sparsity"), py::arg("seed"));

    m.def(
        "competition_rank",
        [](const std::vector<std::vector<std::string>>& cells, double lambda) {
            const std::size_t n = cells.size();
            ComparisonMatrix mat(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (cells[i].size() != n) throw ConfigError("outcome matrix must be square");
                for (std::size_t j = i + 1; j < n; ++j) mat.record(i, j, outcome_from(cells[i][j]));
            }
            return ranking_dict(competition_rank(mat, lambda));
        },
        py::arg("outcomes"), py::arg("lambda_") = kDefaultLambda);
    m.def(
        "rank_fitness",
        [](const std::vector<double>& fitness, double sparsity, std::uint64_t seed, double lambda) {
            std::vector<AgentId> ids(fitness.size());
            std::iota(ids.begin(), ids.end(), AgentId{0});
            Rng rng(seed);
            const auto topo = random_topology(ids, sparsity, rng);
            auto d = ranking_dict(competition_rank(build_comparisons(fitness, topo).matrix, lambda));
            d["layered_accuracy"] =
                layered_accuracy(d["levels"].cast<std::vector<Level>>(), oracle_levels(fitness));
            return d;
        },
        py::arg("fitness"), py::arg("sparsity") = 1.0, py::arg("seed") = 1,
        py::arg("lambda_") = kDefaultLambda);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init([](const std::map<std::string, std::string>& settings) {
                 return parse_config(std::nullopt, settings);
             }),
             py::arg("settings") = std::map<std::string, std::string>{})
        .def("set", [](RunConfig& c, const std::string& key, const std::string& value) {
            apply_setting(c, key, value);
            c.validate();
        })
        .def_readonly("np", &RunConfig::np)
        .def_readonly("u", &RunConfig::u)
        .def_readonly("sparsity", &RunConfig::sparsity)
        .def_readonly("seeds", &RunConfig::seeds)
        .def_property_readonly("dim", &RunConfig::problem_dim)
        .def_property_readonly("max_fes", &RunConfig::effective_max_fes)
        .def("render", &render_config)
        .def("__repr__", &render_config);

    m.def(
        "run",
        [](const RunConfig& c, std::uint64_t seed) {
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run(c, seed);
            }
            return result_dict(r);
        },
        py::arg("config"), py::arg("seed") = 1);
    m.def(
        "run_batch",
        [](const RunConfig& c) {
            BatchSummary s;
            {
                py::gil_scoped_release release;
                s = run_batch(c);
            }
            py::dict d;
            d["mean"] = s.mean;
            d["std"] = s.std;
            d["median"] = s.median;
            d["mean_layered_accuracy"] = s.mean_layered_accuracy;
            py::list runs;
            for (const auto& r : s.runs) {
                auto x = result_dict(r.result);
                x["seed"] = r.seed;
                runs.append(x);
            }
            d["runs"] = runs;
            return d;
        },
        py::arg("config"));
}
