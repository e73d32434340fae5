#include "permoptics/resources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "permoptics/error.hpp"

namespace permoptics {
namespace {

constexpr const char* kFormulaThermal = "2 erfinv(delta)^2 (1 - p) / (eps^2 p)";
constexpr const char* kFormulaUnitary = "2 erfinv(delta)^2 (1 - q) / (eps^2 q)";
constexpr const char* kFormulaAlmostThermal =
    "2 erfinv(delta)^2 (1 - p) mu_max^M / (eps^2 prod_{i != argmax} (1 - mu_i / mu_max))";
constexpr const char* kFormulaAlmostUnitary = "2 erfinv(delta)^2 (1 - q) / eps^2";

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^{2n+1} / (1*3*...*(2n+1)); all
// terms positive, so no cancellation.
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return kTwoOverSqrtPi * std::exp(-x2) * sum;
}

// erfc(x) for x > 0 by modified Lentz on
// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
double erfc_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 500; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        d = std::abs(d) < tiny ? tiny : d;
        c = x + a / c;
        c = std::abs(c) < tiny ? tiny : c;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return std::exp(-x * x) * std::numbers::inv_sqrtpi / f;
}

ResourceEstimate finish(double n_real, double delta, std::string formula_id,
                        std::string diagnostic = {}) {
    ResourceEstimate out;
    out.n_real = n_real;
    out.z_c = critical_value(delta);
    out.formula_id = std::move(formula_id);
    out.diagnostic = std::move(diagnostic);
    if (std::isfinite(n_real)) {
        out.n_required = static_cast<std::uint64_t>(std::ceil(std::max(n_real, 0.0)));
    }
    return out;
}

void check_common(double epsilon, double delta) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InputError("margin of error must be positive");
    }
    if (!(delta >= 0.0 && delta < 1.0)) {
        throw InputError("confidence level must lie in [0, 1)");
    }
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError(std::string(what) + " must lie in [0, 1]");
    }
}

double two_erfinv_squared(double delta) {
    const double e = inverse_erf(delta);
    return 2.0 * e * e;
}

}  // namespace

double erf_precise(double x) {
    if (std::isnan(x)) {
        return x;
    }
    const double ax = std::abs(x);
    if (ax <= 2.0) {
        return erf_series(x);
    }
    const double value = 1.0 - erfc_continued_fraction(ax);
    return x < 0 ? -value : value;
}

double erfc_precise(double x) {
    if (x > 2.0) {
        return erfc_continued_fraction(x);
    }
    if (x < -2.0) {
        return 2.0 - erfc_continued_fraction(-x);
    }
    return 1.0 - erf_series(x);
}

double inverse_erf(double x) {
    if (!(std::abs(x) < 1.0)) {
        throw InputError("inverse_erf: argument must satisfy |x| < 1");
    }
    if (x == 0.0) {
        return 0.0;
    }
    // Giles' single-precision rational approximation as a starting point.
    double w = -std::log((1.0 - x) * (1.0 + x));
    double y;
    if (w < 5.0) {
        w -= 2.5;
        double p = 2.81022636e-08;
        p = 3.43273939e-07 + p * w;
        p = -3.5233877e-06 + p * w;
        p = -4.39150654e-06 + p * w;
        p = 0.00021858087 + p * w;
        p = -0.00125372503 + p * w;
        p = -0.00417768164 + p * w;
        p = 0.246640727 + p * w;
        p = 1.50140941 + p * w;
        y = p * x;
    } else {
        w = std::sqrt(w) - 3.0;
        double p = -0.000200214257;
        p = 0.000100950558 + p * w;
        p = 0.00134934322 + p * w;
        p = -0.00367342844 + p * w;
        p = 0.00573950773 + p * w;
        p = -0.0076224613 + p * w;
        p = 0.00943887047 + p * w;
        p = 1.00167406 + p * w;
        p = 2.83297682 + p * w;
        y = p * x;
    }
    // Halley: y <- y - f / (f' - f f'' / (2 f')), f = erf(y) - x,
    // f' = 2/sqrt(pi) e^{-y^2}, f''/f' = -2y.
    for (int step = 0; step < 3; ++step) {
        const double ay = std::abs(y);
        const double residual = ay > 2.0
                                    ? (y > 0 ? (1.0 - x) - erfc_precise(ay)
                                             : erfc_precise(ay) - (1.0 + x))
                                    : erf_precise(y) - x;
        const double slope = kTwoOverSqrtPi * std::exp(-y * y);
        if (slope == 0.0) {
            break;
        }
        const double ratio = residual / slope;
        y -= ratio / (1.0 + y * ratio);
    }
    return y;
}

double critical_value(double delta) { return std::numbers::sqrt2 * inverse_erf(delta); }

std::string_view to_string(ErrorFlavor flavor) {
    switch (flavor) {
    case ErrorFlavor::multiplicative_thermal:
        return "multiplicative_thermal";
    case ErrorFlavor::multiplicative_unitary:
        return "multiplicative_unitary";
    case ErrorFlavor::almost_multiplicative_thermal:
        return "almost_multiplicative_thermal";
    case ErrorFlavor::almost_multiplicative_unitary:
        return "almost_multiplicative_unitary";
    }
    return "unknown";
}

std::optional<ErrorFlavor> parse_error_flavor(std::string_view name) {
    for (auto flavor : {ErrorFlavor::multiplicative_thermal, ErrorFlavor::multiplicative_unitary,
                        ErrorFlavor::almost_multiplicative_thermal,
                        ErrorFlavor::almost_multiplicative_unitary}) {
        if (to_string(flavor) == name) {
            return flavor;
        }
    }
    return std::nullopt;
}

ResourceEstimate samples_multiplicative_thermal(double p, double epsilon, double delta) {
    check_common(epsilon, delta);
    check_probability(p, "p");
    if (p == 0.0) {
        return finish(kInfinity, delta, kFormulaThermal, "p = 0: no coincidences are ever observed");
    }
    return finish(two_erfinv_squared(delta) * (1.0 - p) / (epsilon * epsilon * p), delta, kFormulaThermal);
}

ResourceEstimate samples_multiplicative_unitary(double perm_u2, double epsilon, double delta) {
    check_common(epsilon, delta);
    check_probability(perm_u2, "|Perm U|^2");
    if (perm_u2 == 0.0) {
        return finish(kInfinity, delta, kFormulaUnitary, "|Perm U|^2 = 0: no coincidences are ever observed");
    }
    return finish(two_erfinv_squared(delta) * (1.0 - perm_u2) / (epsilon * epsilon * perm_u2),
                  delta, kFormulaUnitary);
}

ResourceEstimate samples_almost_multiplicative_thermal(std::span<const double> mus, double p,
                                                       double epsilon, double delta) {
    check_common(epsilon, delta);
    check_probability(p, "p");
    if (mus.empty()) {
        throw InputError("almost-multiplicative thermal estimate needs the mus");
    }
    for (double mu : mus) {
        if (!(mu >= 0.0) || !std::isfinite(mu)) {
            throw InputError("mus must be finite and nonnegative");
        }
    }
    const auto max_it = std::max_element(mus.begin(), mus.end());
    const double mu_max = *max_it;
    if (!(mu_max > 0.0)) {
        throw InputError("almost-multiplicative thermal estimate needs mu_max > 0");
    }
    const std::size_t m = mus.size();
    if (m == 1) {
        return finish(kInfinity, delta, kFormulaAlmostThermal,
                      "M = 1: the scaling denominator (1 - mu_1/mu_max) vanishes");
    }
    double denom = 1.0;
    for (auto it = mus.begin(); it != mus.end(); ++it) {
        if (it != max_it) {
            denom *= 1.0 - *it / mu_max;
        }
    }
    if (denom == 0.0) {
        return finish(kInfinity, delta, kFormulaAlmostThermal,
                      "a second mode attains mu_max: the scaling denominator vanishes");
    }
    const double n = two_erfinv_squared(delta) * (1.0 - p) * std::pow(mu_max, static_cast<double>(m)) /
                     (epsilon * epsilon * denom);
    return finish(n, delta, kFormulaAlmostThermal);
}

ResourceEstimate samples_almost_multiplicative_unitary(double perm_u2, double epsilon, double delta) {
    check_common(epsilon, delta);
    check_probability(perm_u2, "|Perm U|^2");
    return finish(two_erfinv_squared(delta) * (1.0 - perm_u2) / (epsilon * epsilon), delta, kFormulaAlmostUnitary);
}

ResourceEstimate estimate_resources(const ResourceQuery& q) {
    switch (q.flavor) {
    case ErrorFlavor::multiplicative_thermal:
        return samples_multiplicative_thermal(q.p, q.epsilon, q.delta);
    case ErrorFlavor::multiplicative_unitary:
        return samples_multiplicative_unitary(q.p, q.epsilon, q.delta);
    case ErrorFlavor::almost_multiplicative_thermal:
        return samples_almost_multiplicative_thermal(q.mus, q.p, q.epsilon, q.delta);
    case ErrorFlavor::almost_multiplicative_unitary:
        return samples_almost_multiplicative_unitary(q.p, q.epsilon, q.delta);
    }
    throw InputError("unknown error flavor");
}

double margin_of_error(double p, double n_samples, double delta) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw InputError("margin_of_error: p must lie in (0, 1]");
    }
    if (!(n_samples >= 1.0)) {
        throw InputError("margin_of_error: N must be at least 1");
    }
    if (!(delta >= 0.0 && delta < 1.0)) {
        throw InputError("margin_of_error: delta must lie in [0, 1)");
    }
    return inverse_erf(delta) * std::sqrt(2.0 * (1.0 - p) / (n_samples * p));
}

double haar_average_permanent(std::size_t m) {
    if (m < 1) {
        throw InputError("haar_average_permanent: M must be at least 1");
    }
    // h(1) = 1, h(k+1) / h(k) = (k+1) / (2 (2k+1)).
    double h = 1.0;
    for (std::size_t k = 1; k < m; ++k) {
        h *= static_cast<double>(k + 1) / (2.0 * static_cast<double>(2 * k + 1));
    }
    return h;
}

double haar_average_asymptote(std::size_t m) {
    const double md = static_cast<double>(m);
    return std::sqrt(4.0 * std::numbers::pi * md) / std::pow(4.0, md);
}

double max_click_probability(std::size_t m) {
    if (m < 1) {
        throw InputError("max_click_probability: M must be at least 1");
    }
    const double base = static_cast<double>(m + 1);
    double value = 1.0 / base;
    for (std::size_t k = 1; k <= m; ++k) {
        value *= static_cast<double>(k) / base;
    }
    return value;
}

CostReport cost_comparison(std::size_t m, double eta) {
    if (m < 1) {
        throw InputError("cost_comparison: M must be at least 1");
    }
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw InputError("cost_comparison: eta must lie in (0, 1]");
    }
    const double md = static_cast<double>(m);
    const double loc = std::pow(4.0, md) / std::sqrt(md) * std::pow(eta, -md);
    const double classical = md * md * std::pow(2.0, md);
    return CostReport{m, eta, loc, classical, loc / classical};
}

std::optional<std::size_t> optical_cost_dominance_onset(double eta, std::size_t max_m) {
    std::optional<std::size_t> onset;
    for (std::size_t m = 1; m <= max_m; ++m) {
        if (cost_comparison(m, eta).ratio > 1.0) {
            if (!onset) {
                onset = m;
            }
        } else {
            onset.reset();
        }
    }
    return onset;
}

}  // namespace permoptics
