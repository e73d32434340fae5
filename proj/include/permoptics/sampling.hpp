#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "permoptics/hpsm.hpp"
#include "permoptics/matrix.hpp"
#include "permoptics/photonic.hpp"

namespace permoptics {

struct SamplingPlan {
    std::uint64_t n_samples = 1;
    std::uint64_t seed = 0;
    unsigned partitions = 1;
    double confidence = 0.95;  // delta

    // Throws InputError for N = 0, zero partitions, or delta outside (0, 1).
    void validate() const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    double half_width() const { return 0.5 * (hi - lo); }
    bool operator==(const Interval&) const = default;
};

// Bernoulli statistics of one estimation. When a permanent context is
// attached, perm = perm_scale * p_hat maps probability space to permanent
// space (for thermal light perm_scale = 1 / prod (1 - mu_i), times
// factor^M after a brightness rescaling).
struct SamplingResult {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double p_true = 0.0;  // probability the trials were drawn at
    double confidence = 0.95;
    double z_c = 0.0;
    double p_hat = 0.0;
    double stderr_p = 0.0;
    Interval ci;
    std::optional<double> perm_scale;
    std::optional<double> perm_estimate;
    std::optional<Interval> perm_ci;
    std::optional<double> perm_stderr;
    std::string generator;
    std::vector<std::string> warnings;
};

// Trials are grouped in fixed blocks of 2^24; block b draws from its own
// Philox substream keyed by the seed. Partitions take contiguous runs of
// blocks, so k depends only on (p, N, seed), not on the partition count.
// Within a block, p < kSkipSamplingThreshold uses geometric gaps between
// successes; larger p compares one uniform per trial.
inline constexpr std::uint64_t kTrialsPerBlock = std::uint64_t{1} << 24;
inline constexpr double kSkipSamplingThreshold = 0.05;

// Success count for the trial range [first, first + count) of the stream.
std::uint64_t count_successes(double p, std::uint64_t seed, std::uint64_t first,
                              std::uint64_t count);

// Draws N Bernoulli(p) trials and summarizes them with the normal
// approximation p_hat +- z_c sqrt(p_hat (1 - p_hat) / N), clipped to [0, 1].
// A warning is attached when N p_hat < 10 or N (1 - p_hat) < 10.
SamplingResult bernoulli_estimate(double p, const SamplingPlan& plan);

// Recomputes the summary statistics of a result from (n, k).
void summarize(SamplingResult& result);

// Samples at click_probability_interfering and divides by prod_i (1 - mu_i).
SamplingResult estimate_permanent_thermal(const UnitaryMatrix& u, const ThermalBank& bank,
                                          const SamplingPlan& plan);

// Estimates Perm[A] of an HPSM by running the sources at spectrum / factor
// and multiplying the result by factor^M. The rescaled spectrum must stay
// below 1.
SamplingResult estimate_permanent_hpsm(const Hpsm& a, double factor, const SamplingPlan& plan);

// Factor that maximizes the coincidence probability of spectrum / factor:
// the root of M / s = sum_i mu_i / (1 - s mu_i) in s = 1 / factor.
double optimal_brightness_factor(std::span<const double> spectrum);

// Samples at |Perm U|^2; the estimate is of |Perm U|^2 itself.
SamplingResult estimate_permanent_unitary(const UnitaryMatrix& u, const SamplingPlan& plan);

// Pools (n, k). Throws InputError for an empty list or results drawn at
// different probabilities, confidence levels, or permanent scales.
SamplingResult merge(std::span<const SamplingResult> results);

struct ErrorSweepRow {
    std::uint64_t n;
    double delta;
    double eps_empirical;  // delta-quantile of |p_hat - p| / p over repeats
    double eps_theory;     // margin_of_error(p, N, delta)
    double ratio;
};

// For each N, runs `repeats` independent estimations at probability p and
// compares the empirical delta-quantile of the relative error with margin_of_error.
// Quantiles use the nearest-rank definition.
std::vector<ErrorSweepRow> empirical_error_sweep(double p, std::span<const std::uint64_t> n_grid,
                                                 std::size_t repeats,
                                                 std::span<const double> deltas,
                                                 std::uint64_t seed);

std::vector<ErrorSweepRow> empirical_error_sweep(const UnitaryMatrix& u, const ThermalBank& bank,
                                                 std::span<const std::uint64_t> n_grid,
                                                 std::size_t repeats,
                                                 std::span<const double> deltas,
                                                 std::uint64_t seed);

// Least-squares slope of log(eps_empirical) against log(N) for one delta.
double loglog_slope(std::span<const ErrorSweepRow> rows, double delta);

}  // namespace permoptics
