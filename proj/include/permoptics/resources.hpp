#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace permoptics {

// erf and erfc to ~1e-15: power series for |x| <= 2, Lentz continued
// fraction for erfc beyond.
double erf_precise(double x);
double erfc_precise(double x);

// erf^{-1}(x) for |x| < 1. A rational initial guess is polished by Halley
// steps against erf_precise; erf(inverse_erf(x)) matches x within 1e-12.
// Throws InputError for |x| >= 1.
double inverse_erf(double x);

// Two-sided standard-normal critical value z_c = sqrt(2) erf^{-1}(delta).
double critical_value(double delta);

enum class ErrorFlavor {
    multiplicative_thermal,
    multiplicative_unitary,
    almost_multiplicative_thermal,
    almost_multiplicative_unitary,
};

std::string_view to_string(ErrorFlavor flavor);
std::optional<ErrorFlavor> parse_error_flavor(std::string_view name);

struct ResourceQuery {
    double p = 0.0;  // p^th(1,...,1), or |Perm U|^2 for the unitary flavors
    double epsilon = 0.1;
    double delta = 0.95;
    ErrorFlavor flavor = ErrorFlavor::multiplicative_thermal;
    std::vector<double> mus;  // almost_multiplicative_thermal only
};

struct ResourceEstimate {
    std::optional<std::uint64_t> n_required;  // nullopt: infinitely many samples
    double n_real;                            // unrounded value (inf when unbounded)
    double z_c;
    std::string formula_id;  // the closed form that produced n_real
    std::string diagnostic;

    bool infinite() const { return !n_required.has_value(); }
};

// N = 2 (erf^{-1} delta)^2 (1 - p) / (eps^2 p)
ResourceEstimate samples_multiplicative_thermal(double p, double epsilon, double delta);

// Same with p = |Perm U|^2.
ResourceEstimate samples_multiplicative_unitary(double perm_u2, double epsilon, double delta);

// N = 2 (erf^{-1} delta)^2 (1 - p) mu_max^M / (eps^2 prod_{i != i_max} (1 - mu_i / mu_max))
//
// The factor of the largest parameter itself is excluded (it would be
// identically zero). M = 1, or a tie for the maximum, leaves a vanishing
// denominator and is reported as infinite with a diagnostic.
ResourceEstimate samples_almost_multiplicative_thermal(std::span<const double> mus, double p,
                                                       double epsilon, double delta);

// N = 2 (erf^{-1} delta)^2 (1 - |Perm U|^2) / eps^2, never above
// 2 (erf^{-1} delta / eps)^2.
ResourceEstimate samples_almost_multiplicative_unitary(double perm_u2, double epsilon, double delta);

ResourceEstimate estimate_resources(const ResourceQuery& query);

// eps = erf^{-1}(delta) sqrt(2 (1 - p) / (N p)); inverse of the
// multiplicative-thermal sample count.
double margin_of_error(double p, double n_samples, double delta);

// <|Perm U|^2> over Haar unitaries: (M-1)! M! / (2M-1)!.
double haar_average_permanent(std::size_t m);
// Large-M form sqrt(4 pi M) / 4^M.
double haar_average_asymptote(std::size_t m);

// Largest p^th(1,...,1) under uniform mixing with a single bright input:
// (1 / (1 + M))^{1+M} M!, attained at mu_1 = M / (M + 1).
double max_click_probability(std::size_t m);

struct CostReport {
    std::size_t m;
    double eta;
    double loc_scaling;        // 4^M / sqrt(M) * eta^-M
    double classical_scaling;  // M^2 2^M
    double ratio;              // loc / classical
};

CostReport cost_comparison(std::size_t m, double eta);

// Smallest M0 <= max_m such that the optical cost exceeds the classical cost
// for every M in [M0, max_m]; nullopt if it does not at max_m.
std::optional<std::size_t> optical_cost_dominance_onset(double eta, std::size_t max_m = 64);

}  // namespace permoptics
