#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "crowdec/problems.hpp"
#include "crowdec/rng.hpp"

namespace crowdec {

/// Sign of the additive evaluation noise.
enum class NoiseSign { Positive, Negative };

/// Per-worker noise interval: Positive draws from [0, bv], Negative from [-bv, 0].
struct UncertaintySpec {
    double bound_value = 0.0;
    NoiseSign sign = NoiseSign::Positive;

    void validate() const;
};

/// Smallest exponent used by bound_schedule; keeps every bound a normal double.
inline constexpr double kMinBoundExponent = -1022.0;

/// Number of workers in the reliable (|bv| <= 1) block: floor(n * fraction).
std::size_t reliable_count(std::size_t n_workers, double reliable_fraction);

/// Per-worker bound values. Worker i (1-based) with i <= m = floor(n*rf) gets
/// 2^-(m-i); the remaining workers get 2^((i-m) * max_exponent / (n-m)).
std::vector<double> bound_schedule(std::size_t n_workers, double reliable_fraction = 0.9,
                                   double max_exponent = 30.0);

double draw_noise(const UncertaintySpec& spec, Rng& rng);

/// Fitness-evaluation counter with a hard ceiling.
class EvalBudget {
public:
    explicit EvalBudget(std::uint64_t max_fes);

    std::uint64_t max_fes() const noexcept { return max_; }
    std::uint64_t used_fes() const noexcept { return used_; }
    std::uint64_t remaining() const noexcept { return max_ - used_; }
    bool exhausted() const noexcept { return used_ >= max_; }

    /// Throws BudgetExhausted if no evaluation is left.
    void consume();

private:
    std::uint64_t max_;
    std::uint64_t used_ = 0;
};

struct NoisyValue {
    double uncertain;  ///< F = f(x) + r, the only value decision logic may read
    double true_value; ///< f(x), diagnostics only
};

/// One budgeted evaluation F(x) = f(x) + r with a fresh noise draw.
NoisyValue noisy_eval(const EvalFn& f, const UncertaintySpec& spec, std::span<const double> x,
                      EvalBudget& budget, Rng& rng);

}  // namespace crowdec
