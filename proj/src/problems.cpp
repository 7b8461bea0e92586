#include "crowdec/problems.hpp"

#include <cmath>
#include <numbers>

#include "crowdec/error.hpp"

namespace crowdec {

SearchDomain::SearchDomain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) throw ConfigError("search domain must have at least one dimension");
    if (lower_.size() != upper_.size())
        throw ConfigError("search domain lower/upper bound lengths differ");
    for (std::size_t d = 0; d < lower_.size(); ++d) {
        if (!std::isfinite(lower_[d]) || !std::isfinite(upper_[d]) || !(lower_[d] < upper_[d]))
            throw ConfigError("search domain needs finite lower < upper in dimension " +
                              std::to_string(d));
    }
}

SearchDomain SearchDomain::cube(std::size_t dim, double lo, double hi) {
    return SearchDomain(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

bool SearchDomain::contains(std::span<const double> x) const {
    if (x.size() != dim())
        throw ContractViolation("point has " + std::to_string(x.size()) +
                                " coordinates, domain has " + std::to_string(dim()));
    for (std::size_t d = 0; d < x.size(); ++d) {
        if (!(x[d] >= lower_[d] && x[d] <= upper_[d])) return false;
    }
    return true;
}

bool clamp_check(const SearchDomain& domain, std::span<const double> x) {
    return domain.contains(x);
}

namespace functions {

double sphere(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return sum;
}

double elliptic(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 1) return x[0] * x[0];
    double sum = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
        const double weight =
            std::pow(1.0e6, static_cast<double>(d) / static_cast<double>(n - 1));
        sum += weight * x[d] * x[d];
    }
    return sum;
}

double rastrigin(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
    return sum;
}

double ackley(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * std::numbers::pi * v);
    }
    // Grouped so that both halves cancel exactly at the origin.
    const double e = std::exp(1.0);
    return (20.0 - 20.0 * std::exp(-0.2 * std::sqrt(sq / n))) + (e - std::exp(cs / n));
}

double rosenbrock(std::span<const double> x) {
    double sum = 0.0;
    for (std::size_t d = 0; d + 1 < x.size(); ++d) {
        const double a = x[d + 1] - x[d] * x[d];
        const double b = x[d] - 1.0;
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double schwefel12(std::span<const double> x) {
    double sum = 0.0;
    double prefix = 0.0;
    for (double v : x) {
        prefix += v;
        sum += prefix * prefix;
    }
    return sum;
}

}  // namespace functions

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names{"sphere",  "elliptic",   "rastrigin",
                                                "ackley",  "rosenbrock", "schwefel12"};
    return names;
}

Objective make_benchmark(const std::string& name, std::size_t dim) {
    if (dim == 0) throw ConfigError("benchmark dimension must be >= 1");

    Objective obj;
    obj.name = name;
    obj.known_optimum = 0.0;
    obj.optimum_point.assign(dim, 0.0);

    if (name == "sphere") {
        obj.domain = SearchDomain::cube(dim, -100.0, 100.0);
        obj.eval = functions::sphere;
    } else if (name == "elliptic") {
        obj.domain = SearchDomain::cube(dim, -100.0, 100.0);
        obj.eval = functions::elliptic;
    } else if (name == "schwefel12") {
        obj.domain = SearchDomain::cube(dim, -100.0, 100.0);
        obj.eval = functions::schwefel12;
    } else if (name == "rastrigin") {
        obj.domain = SearchDomain::cube(dim, -5.12, 5.12);
        obj.eval = functions::rastrigin;
    } else if (name == "ackley") {
        obj.domain = SearchDomain::cube(dim, -32.0, 32.0);
        obj.eval = functions::ackley;
    } else if (name == "rosenbrock") {
        if (dim < 2) throw ConfigError("rosenbrock requires dimension >= 2");
        obj.domain = SearchDomain::cube(dim, -30.0, 30.0);
        obj.eval = functions::rosenbrock;
        obj.optimum_point.assign(dim, 1.0);
    } else {
        throw ConfigError("unknown benchmark '" + name +
                          "' (expected sphere, elliptic, rastrigin, ackley, rosenbrock or "
                          "schwefel12)");
    }
    return obj;
}

}  // namespace crowdec
