#include "permoptics/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "permoptics/error.hpp"
#include "permoptics/permanent.hpp"
#include "permoptics/philox.hpp"
#include "permoptics/resources.hpp"

namespace permoptics {
namespace {

std::string generator_id() {
    std::ostringstream os;
    os << Philox4x32::name << ";block=2^24;skip<" << kSkipSamplingThreshold;
    return os.str();
}

// Successes among trials [lo, hi) of block `block` (offsets within the block).
std::uint64_t block_successes(double p, std::uint64_t seed, std::uint64_t block, std::uint64_t lo,
                              std::uint64_t hi) {
    RandomStream stream(seed, block);
    std::uint64_t k = 0;
    if (p < kSkipSamplingThreshold) {
        // Failures before the next success are geometric:
        // G = floor(log U / log(1 - p)), U uniform on (0, 1].
        const double log_q = std::log1p(-p);
        std::uint64_t pos = 0;
        while (true) {
            const double gap = std::floor(std::log(stream.uniform_open_zero()) / log_q);
            if (!(gap < static_cast<double>(hi - pos))) {
                break;
            }
            pos += static_cast<std::uint64_t>(gap);
            if (pos >= lo) {
                ++k;
            }
            ++pos;
            if (pos >= hi) {
                break;
            }
        }
        return k;
    }
    // One 64-bit word per trial, two words per Philox block.
    stream.seek(lo / 2);
    if (lo % 2 == 1) {
        stream.next_u64();
    }
    for (std::uint64_t t = lo; t < hi; ++t) {
        k += stream.uniform() < p ? 1 : 0;
    }
    return k;
}

SamplingResult partial_result(double p, const SamplingPlan& plan, std::uint64_t n,
                              std::uint64_t k) {
    SamplingResult r;
    r.n = n;
    r.k = k;
    r.p_true = p;
    r.confidence = plan.confidence;
    r.generator = generator_id();
    return r;
}

void attach_permanent_scale(SamplingResult& result, double scale) {
    result.perm_scale = scale;
    summarize(result);
}

}  // namespace

void SamplingPlan::validate() const {
    if (n_samples < 1) {
        throw InputError("sampling plan: N must be at least 1");
    }
    if (partitions < 1) {
        throw InputError("sampling plan: at least one partition is required");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw InputError("sampling plan: confidence must lie in (0, 1)");
    }
}

std::uint64_t count_successes(double p, std::uint64_t seed, std::uint64_t first,
                              std::uint64_t count) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError("count_successes: p must lie in [0, 1]");
    }
    if (p == 0.0 || count == 0) {
        return 0;
    }
    if (p == 1.0) {
        return count;
    }
    const std::uint64_t end = first + count;
    std::uint64_t k = 0;
    for (std::uint64_t block = first / kTrialsPerBlock; block * kTrialsPerBlock < end; ++block) {
        const std::uint64_t base = block * kTrialsPerBlock;
        const std::uint64_t lo = std::max(first, base) - base;
        const std::uint64_t hi = std::min(end, base + kTrialsPerBlock) - base;
        k += block_successes(p, seed, block, lo, hi);
    }
    return k;
}

void summarize(SamplingResult& r) {
    r.p_hat = r.n > 0 ? static_cast<double>(r.k) / static_cast<double>(r.n) : 0.0;
    r.stderr_p = r.n > 0 ? std::sqrt(r.p_hat * (1.0 - r.p_hat) / static_cast<double>(r.n)) : 0.0;
    r.z_c = critical_value(r.confidence);
    r.ci = Interval{std::max(0.0, r.p_hat - r.z_c * r.stderr_p),
                    std::min(1.0, r.p_hat + r.z_c * r.stderr_p)};
    r.warnings.clear();
    const double n = static_cast<double>(r.n);
    if (n * r.p_hat < 10.0 || n * (1.0 - r.p_hat) < 10.0) {
        r.warnings.emplace_back(
            "normal approximation is poor: N p_hat or N (1 - p_hat) is below 10");
    }
    if (r.perm_scale) {
        const double s = *r.perm_scale;
        r.perm_estimate = s * r.p_hat;
        r.perm_ci = Interval{s * r.ci.lo, s * r.ci.hi};
        r.perm_stderr = s * r.stderr_p;
    } else {
        r.perm_estimate.reset();
        r.perm_ci.reset();
        r.perm_stderr.reset();
    }
}

SamplingResult bernoulli_estimate(double p, const SamplingPlan& plan) {
    plan.validate();
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError("bernoulli_estimate: p must lie in [0, 1]");
    }
    const std::uint64_t n = plan.n_samples;
    const std::uint64_t blocks = (n + kTrialsPerBlock - 1) / kTrialsPerBlock;
    const std::uint64_t parts = std::min<std::uint64_t>(plan.partitions, blocks);

    std::vector<SamplingResult> partials(parts);
    auto run = [&](std::uint64_t part) {
        const std::uint64_t first_block = blocks * part / parts;
        const std::uint64_t last_block = blocks * (part + 1) / parts;
        const std::uint64_t first = first_block * kTrialsPerBlock;
        const std::uint64_t last = std::min(n, last_block * kTrialsPerBlock);
        partials[part] =
            partial_result(p, plan, last - first, count_successes(p, plan.seed, first, last - first));
    };
    if (parts == 1) {
        run(0);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(parts);
        for (std::uint64_t part = 0; part < parts; ++part) {
            workers.emplace_back(run, part);
        }
    }
    return merge(partials);
}

SamplingResult estimate_permanent_thermal(const UnitaryMatrix& u, const ThermalBank& bank,
                                          const SamplingPlan& plan) {
    const double p = click_probability_interfering(u, bank);
    double survival = 1.0;
    for (double mu : bank.effective_mus()) {
        survival *= 1.0 - mu;
    }
    SamplingResult result = bernoulli_estimate(p, plan);
    attach_permanent_scale(result, 1.0 / survival);
    return result;
}

SamplingResult estimate_permanent_hpsm(const Hpsm& a, double factor, const SamplingPlan& plan) {
    const ScaledHpsm scaled = scale_hpsm(a, factor);
    const auto& mus = scaled.scaled.spectrum();
    double survival = 1.0;
    for (double mu : mus) {
        if (!(mu < 1.0)) {
            throw InputError("estimate_permanent_hpsm: rescaled spectrum reaches 1");
        }
        survival *= 1.0 - mu;
    }
    const double perm = permanent(scaled.scaled.matrix()).real();
    const double p = std::clamp(perm * survival, 0.0, 1.0);
    SamplingResult result = bernoulli_estimate(p, plan);
    attach_permanent_scale(result, std::pow(factor, static_cast<double>(a.dim())) / survival);
    return result;
}

double optimal_brightness_factor(std::span<const double> spectrum) {
    if (spectrum.empty()) {
        throw InputError("optimal_brightness_factor: empty spectrum");
    }
    const double mu_max = *std::max_element(spectrum.begin(), spectrum.end());
    if (!(mu_max > 0.0)) {
        throw InputError("optimal_brightness_factor: spectrum must have a positive entry");
    }
    const double m = static_cast<double>(spectrum.size());
    // g(s) = M/s - sum mu_i / (1 - s mu_i) falls from +inf to -inf on (0, 1/mu_max).
    auto g = [&](double s) {
        double sum = 0.0;
        for (double mu : spectrum) {
            sum += mu / (1.0 - s * mu);
        }
        return m / s - sum;
    };
    double lo = 0.0;
    double hi = 1.0 / mu_max;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 1.0 / (0.5 * (lo + hi));
}

SamplingResult estimate_permanent_unitary(const UnitaryMatrix& u, const SamplingPlan& plan) {
    SamplingResult result = bernoulli_estimate(single_photon_click_probability(u), plan);
    attach_permanent_scale(result, 1.0);
    return result;
}

SamplingResult merge(std::span<const SamplingResult> results) {
    if (results.empty()) {
        throw InputError("merge: nothing to merge");
    }
    SamplingResult out = results.front();
    out.n = 0;
    out.k = 0;
    for (const auto& r : results) {
        if (r.p_true != out.p_true || r.confidence != out.confidence ||
            r.perm_scale != out.perm_scale || r.generator != out.generator) {
            throw InputError("merge: results come from different sampling contexts");
        }
        out.n += r.n;
        out.k += r.k;
    }
    summarize(out);
    return out;
}

std::vector<ErrorSweepRow> empirical_error_sweep(double p, std::span<const std::uint64_t> n_grid,
                                                 std::size_t repeats,
                                                 std::span<const double> deltas,
                                                 std::uint64_t seed) {
    if (n_grid.empty() || deltas.empty()) {
        throw InputError("empirical_error_sweep: empty N grid or delta list");
    }
    if (repeats < 1) {
        throw InputError("empirical_error_sweep: at least one repeat is required");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("empirical_error_sweep: p must lie in (0, 1)");
    }
    std::vector<ErrorSweepRow> rows;
    std::vector<double> rel(repeats);
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const std::uint64_t n = n_grid[gi];
        for (std::size_t r = 0; r < repeats; ++r) {
            const std::uint64_t k = count_successes(p, derive_seed(seed, gi, r), 0, n);
            rel[r] = std::abs(static_cast<double>(k) / static_cast<double>(n) - p) / p;
        }
        std::vector<double> sorted = rel;
        std::sort(sorted.begin(), sorted.end());
        for (double delta : deltas) {
            const auto rank = static_cast<std::size_t>(std::ceil(delta * static_cast<double>(repeats)));
            const double empirical = sorted[std::clamp<std::size_t>(rank, 1, repeats) - 1];
            const double theory = margin_of_error(p, static_cast<double>(n), delta);
            rows.push_back(ErrorSweepRow{n, delta, empirical, theory, empirical / theory});
        }
    }
    return rows;
}

std::vector<ErrorSweepRow> empirical_error_sweep(const UnitaryMatrix& u, const ThermalBank& bank,
                                                 std::span<const std::uint64_t> n_grid,
                                                 std::size_t repeats,
                                                 std::span<const double> deltas,
                                                 std::uint64_t seed) {
    return empirical_error_sweep(click_probability_interfering(u, bank), n_grid, repeats, deltas,
                                 seed);
}

double loglog_slope(std::span<const ErrorSweepRow> rows, double delta) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& row : rows) {
        if (row.delta == delta && row.eps_empirical > 0.0) {
            xs.push_back(std::log(static_cast<double>(row.n)));
            ys.push_back(std::log(row.eps_empirical));
        }
    }
    if (xs.size() < 2) {
        throw InputError("loglog_slope: need at least two positive points");
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace permoptics
