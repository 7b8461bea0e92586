#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace crowdec {

/// Axis-aligned box [lower_d, upper_d] per dimension.
class SearchDomain {
public:
    SearchDomain() = default;
    SearchDomain(std::vector<double> lower, std::vector<double> upper);

    static SearchDomain cube(std::size_t dim, double lo, double hi);

    std::size_t dim() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    double lower(std::size_t d) const { return lower_[d]; }
    double upper(std::size_t d) const { return upper_[d]; }

    /// Bounds are inclusive. Throws ContractViolation on length mismatch.
    bool contains(std::span<const double> x) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

using EvalFn = std::function<double(std::span<const double>)>;

/// A minimization target. `eval` must be pure and thread-safe.
struct Objective {
    std::string name;
    SearchDomain domain;
    EvalFn eval;
    std::optional<double> known_optimum;
    /// Location of the optimum when it is known, for tests and diagnostics.
    std::vector<double> optimum_point;

    double operator()(std::span<const double> x) const { return eval(x); }
    std::size_t dim() const noexcept { return domain.dim(); }
};

/// Names accepted by make_benchmark.
const std::vector<std::string>& benchmark_names();

/// Analytic benchmark on its conventional domain. Throws ConfigError for an
/// unknown name or a dimension the function does not support.
Objective make_benchmark(const std::string& name, std::size_t dim);

/// Free-function form of SearchDomain::contains.
bool clamp_check(const SearchDomain& domain, std::span<const double> x);

namespace functions {
double sphere(std::span<const double> x);
double elliptic(std::span<const double> x);
double rastrigin(std::span<const double> x);
double ackley(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double schwefel12(std::span<const double> x);
}  // namespace functions

}  // namespace crowdec
