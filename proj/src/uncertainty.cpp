#include "crowdec/uncertainty.hpp"

#include <cmath>
#include <iostream>

#include "crowdec/error.hpp"

namespace crowdec {

void UncertaintySpec::validate() const {
    if (!(bound_value >= 0.0) || !std::isfinite(bound_value))
        throw ConfigError("uncertainty bound must be a finite nonnegative real");
}

std::size_t reliable_count(std::size_t n_workers, double reliable_fraction) {
    // The epsilon absorbs representation error in products such as 100 * 0.9.
    const double m = std::floor(static_cast<double>(n_workers) * reliable_fraction + 1e-9);
    return static_cast<std::size_t>(m);
}

std::vector<double> bound_schedule(std::size_t n_workers, double reliable_fraction,
                                   double max_exponent) {
    if (n_workers < 2) throw ConfigError("bound schedule needs at least 2 workers");
    if (!(reliable_fraction > 0.0 && reliable_fraction <= 1.0))
        throw ConfigError("reliable_fraction must lie in (0, 1]");
    if (!(max_exponent > 0.0) || !std::isfinite(max_exponent))
        throw ConfigError("max_exponent must be a finite positive real");

    std::size_t m = reliable_count(n_workers, reliable_fraction);
    if (m >= n_workers) {
        std::clog << "warning: no unreliable workers at n=" << n_workers
                  << ", reliable_fraction=" << reliable_fraction << "; all workers reliable\n";
        m = n_workers;
    }

    std::vector<double> bv(n_workers);
    for (std::size_t i = 1; i <= n_workers; ++i) {
        double exponent = 0.0;
        if (i <= m) {
            exponent = -static_cast<double>(m - i);
        } else {
            exponent = static_cast<double>(i - m) * max_exponent / static_cast<double>(n_workers - m);
        }
        bv[i - 1] = std::exp2(std::max(exponent, kMinBoundExponent));
    }
    return bv;
}

double draw_noise(const UncertaintySpec& spec, Rng& rng) {
    const double r = spec.bound_value * rng.uniform01();
    return spec.sign == NoiseSign::Positive ? r : -r;
}

EvalBudget::EvalBudget(std::uint64_t max_fes) : max_(max_fes) {
    if (max_fes == 0) throw ConfigError("evaluation budget must be positive");
}

void EvalBudget::consume() {
    if (exhausted()) throw BudgetExhausted();
    ++used_;
}

NoisyValue noisy_eval(const EvalFn& f, const UncertaintySpec& spec, std::span<const double> x,
                      EvalBudget& budget, Rng& rng) {
    budget.consume();
    const double fx = f(x);
    return {fx + draw_noise(spec, rng), fx};
}

}  // namespace crowdec
