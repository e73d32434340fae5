#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "permoptics/error.hpp"
#include "permoptics/haar.hpp"
#include "permoptics/photonic.hpp"
#include "permoptics/philox.hpp"
#include "permoptics/resources.hpp"

using namespace permoptics;

namespace {

// Factorials via lgamma; independent of the iterative forms in the library.
double haar_average_closed_form(std::size_t m) {
    const double md = static_cast<double>(m);
    return std::exp(std::lgamma(md) + std::lgamma(md + 1.0) - std::lgamma(2.0 * md));
}

double max_click_closed_form(std::size_t m) {
    const double md = static_cast<double>(m);
    return std::exp(std::lgamma(md + 1.0) - (md + 1.0) * std::log(md + 1.0));
}

}  // namespace

TEST(Erf, AgreesWithStandardLibrary) {
    for (double x = -6.0; x <= 6.0; x += 0.001) {
        ASSERT_NEAR(erf_precise(x), std::erf(x), 2e-15) << x;
        ASSERT_NEAR(erfc_precise(x), std::erfc(x), 4e-15 * std::max(1.0, std::erfc(x))) << x;
    }
    EXPECT_NEAR(erfc_precise(5.0) / std::erfc(5.0), 1.0, 1e-13);
    EXPECT_NEAR(erfc_precise(10.0) / std::erfc(10.0), 1.0, 1e-13);
}

TEST(InverseErf, Examples) {
    EXPECT_EQ(inverse_erf(0.0), 0.0);
    EXPECT_NEAR(inverse_erf(0.8427007929), 1.0, 1e-9);
    EXPECT_NEAR(inverse_erf(0.95), 1.3859038, 1e-7);
    EXPECT_NEAR(critical_value(0.95), 1.95996, 1e-5);
    EXPECT_NEAR(inverse_erf(-0.5), -inverse_erf(0.5), 0.0);
    EXPECT_THROW(inverse_erf(1.0), InputError);
    EXPECT_THROW(inverse_erf(-1.0), InputError);
    EXPECT_THROW(inverse_erf(std::nan("")), InputError);
}

TEST(InverseErf, RoundTripOnFineGrid) {
    double worst = 0.0;
    for (long i = -999999; i <= 999999; ++i) {
        const double x = static_cast<double>(i) * 1e-6;
        worst = std::max(worst, std::abs(std::erf(inverse_erf(x)) - x));
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(Samples, MultiplicativeThermal) {
    EXPECT_EQ(samples_multiplicative_thermal(0.01, 0.1, 0.95).n_required, 38031u);
    EXPECT_EQ(samples_multiplicative_thermal(1.0, 0.1, 0.95).n_required, 0u);
    EXPECT_EQ(samples_multiplicative_thermal(0.01, 0.1, 0.0).n_required, 0u);
    const auto inf = samples_multiplicative_thermal(0.0, 0.1, 0.95);
    EXPECT_TRUE(inf.infinite());
    EXPECT_TRUE(std::isinf(inf.n_real));
    EXPECT_FALSE(inf.diagnostic.empty());
    EXPECT_THROW(samples_multiplicative_thermal(0.1, 0.0, 0.95), InputError);
    EXPECT_THROW(samples_multiplicative_thermal(0.1, 0.1, 1.0), InputError);
    EXPECT_THROW(samples_multiplicative_thermal(1.5, 0.1, 0.95), InputError);
}

TEST(Samples, MultiplicativeUnitary) {
    EXPECT_EQ(samples_multiplicative_unitary(1.0, 0.1, 0.95).n_required, 0u);
    EXPECT_EQ(samples_multiplicative_unitary(1.0 / 3.0, 0.1, 0.95).n_required, 769u);
    // 3.841459 * (34/35) / (0.01 / 35) = 13060.96
    EXPECT_EQ(samples_multiplicative_unitary(1.0 / 35.0, 0.1, 0.95).n_required, 13061u);
}

TEST(Samples, AlmostMultiplicativeThermal) {
    const std::vector<double> one = {0.3};
    const auto single = samples_almost_multiplicative_thermal(one, 1e-3, 0.1, 0.95);
    EXPECT_TRUE(single.infinite());
    EXPECT_FALSE(single.diagnostic.empty());

    const std::vector<double> two = {2.0, 1.0};
    // 3.841459 * 0.999 * 4 / (0.01 * 0.5) = 3070.1
    EXPECT_EQ(samples_almost_multiplicative_thermal(two, 1e-3, 0.1, 0.95).n_required, 3071u);

    const std::vector<double> tied = {1.0, 1.0, 0.5};
    EXPECT_TRUE(samples_almost_multiplicative_thermal(tied, 1e-3, 0.1, 0.95).infinite());

    // Doubling every mu multiplies N by 2^M.
    const std::vector<double> base = {0.3, 0.2, 0.1};
    const std::vector<double> doubled = {0.6, 0.4, 0.2};
    const double a = samples_almost_multiplicative_thermal(base, 1e-3, 0.1, 0.95).n_real;
    const double b = samples_almost_multiplicative_thermal(doubled, 1e-3, 0.1, 0.95).n_real;
    EXPECT_NEAR(b / a, 8.0, 1e-12);
    const std::vector<double> zeros = {0.0, 0.0};
    EXPECT_THROW(samples_almost_multiplicative_thermal(zeros, 1e-3, 0.1, 0.95), InputError);
}

TEST(Samples, AlmostMultiplicativeUnitaryBound) {
    EXPECT_EQ(samples_almost_multiplicative_unitary(1.0, 0.1, 0.95).n_required, 0u);
    EXPECT_EQ(samples_almost_multiplicative_unitary(0.0, 0.1, 0.95).n_required, 385u);
    RandomStream rng(5, 0);
    for (int i = 0; i < 1000; ++i) {
        const double q = rng.uniform();
        const double eps = 0.01 + rng.uniform();
        const double delta = 0.999 * rng.uniform();
        const double bound = 2.0 * std::pow(inverse_erf(delta) / eps, 2);
        EXPECT_LE(samples_almost_multiplicative_unitary(q, eps, delta).n_real, bound * (1 + 1e-15));
    }
}

TEST(Samples, InversePairWithMarginOfError) {
    RandomStream rng(6, 0);
    for (int i = 0; i < 100; ++i) {
        const double p = 1e-6 + 0.9 * rng.uniform();
        const double eps = 0.01 + 0.5 * rng.uniform();
        const double delta = 0.5 + 0.49 * rng.uniform();
        const auto n = *samples_multiplicative_thermal(p, eps, delta).n_required;
        ASSERT_GE(n, 1u);
        EXPECT_LE(margin_of_error(p, static_cast<double>(n), delta), eps * (1 + 1e-12));
        if (n > 1) {
            EXPECT_GT(margin_of_error(p, static_cast<double>(n - 1), delta), eps * (1 - 1e-12));
        }
    }
}

TEST(Samples, Monotonicity) {
    double last = std::numeric_limits<double>::infinity();
    for (double p : {1e-6, 1e-4, 1e-2, 0.1, 0.5}) {
        const double n = samples_multiplicative_thermal(p, 0.1, 0.95).n_real;
        EXPECT_LT(n, last);
        last = n;
    }
    last = std::numeric_limits<double>::infinity();
    for (double eps : {0.01, 0.05, 0.1, 0.3}) {
        const double n = samples_multiplicative_unitary(0.2, eps, 0.95).n_real;
        EXPECT_LT(n, last);
        last = n;
    }
    last = 0.0;
    for (double delta : {0.5, 0.9, 0.95, 0.997}) {
        const double n = samples_multiplicative_thermal(0.01, 0.1, delta).n_real;
        EXPECT_GT(n, last);
        last = n;
    }
}

TEST(MarginOfError, Scaling) {
    EXPECT_NEAR(margin_of_error(0.01, 4e4, 0.95) / margin_of_error(0.01, 1e4, 0.95), 0.5, 1e-15);
    EXPECT_NEAR(margin_of_error(0.01, 2e4, 0.95) / margin_of_error(0.01, 1e4, 0.95),
                1.0 / std::numbers::sqrt2, 1e-15);
    EXPECT_EQ(margin_of_error(1.0, 100, 0.95), 0.0);
    EXPECT_THROW(margin_of_error(0.0, 100, 0.95), InputError);
}

TEST(EstimateResources, Dispatch) {
    ResourceQuery q;
    q.p = 0.01;
    EXPECT_EQ(estimate_resources(q).n_required, 38031u);
    q.flavor = ErrorFlavor::almost_multiplicative_unitary;
    q.p = 0.0;
    EXPECT_EQ(estimate_resources(q).n_required, 385u);
    for (auto f : {ErrorFlavor::multiplicative_thermal, ErrorFlavor::multiplicative_unitary,
                   ErrorFlavor::almost_multiplicative_thermal,
                   ErrorFlavor::almost_multiplicative_unitary}) {
        EXPECT_EQ(parse_error_flavor(to_string(f)), f);
    }
    EXPECT_FALSE(parse_error_flavor("additive").has_value());
}

TEST(HaarAverage, ClosedForm) {
    EXPECT_DOUBLE_EQ(haar_average_permanent(1), 1.0);
    EXPECT_NEAR(haar_average_permanent(2), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(haar_average_permanent(4), 1.0 / 35.0, 1e-15);
    for (std::size_t m = 1; m <= 60; ++m) {
        EXPECT_NEAR(haar_average_permanent(m) / haar_average_closed_form(m), 1.0, 1e-12) << m;
    }
    const double r = haar_average_permanent(20) / haar_average_asymptote(20);
    EXPECT_GT(r, 0.95);
    EXPECT_LT(r, 1.05);
}

TEST(HaarAverage, MonteCarlo) {
    for (std::size_t m : {2u, 3u, 4u}) {
        RandomStream stream(derive_seed(99, m), 0);
        constexpr int draws = 100000;
        double s = 0.0;
        double s2 = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double x = single_photon_click_probability(haar_random_unitary(m, stream));
            s += x;
            s2 += x * x;
        }
        const double mean = s / draws;
        const double se = std::sqrt((s2 / draws - mean * mean) / (draws - 1.0));
        EXPECT_NEAR(mean, haar_average_permanent(m), 3.0 * se) << m;
    }
}

TEST(MaxClickProbability, Values) {
    EXPECT_NEAR(max_click_probability(1), 0.25, 1e-15);
    EXPECT_NEAR(max_click_probability(2), 2.0 / 27.0, 1e-15);
    EXPECT_NEAR(max_click_probability(4), 24.0 / 3125.0, 1e-15);
    for (std::size_t m = 1; m <= 20; ++m) {
        EXPECT_NEAR(max_click_probability(m) / max_click_closed_form(m), 1.0, 1e-12);
        EXPECT_LE(max_click_probability(m), std::exp(-static_cast<double>(m)));
    }
}

TEST(MaxClickProbability, AttainedBySingleBrightInput) {
    // All light in one input with mu = M/(M+1), split evenly by a DFT-like
    // interferometer: p = M! |U|^{2M} mu^M (1 - mu) with |U|^2 = 1/M.
    for (std::size_t m = 1; m <= 4; ++m) {
        const double md = static_cast<double>(m);
        const double mu = md / (md + 1.0);
        const double p = std::tgamma(md + 1.0) * std::pow(1.0 / md, md) * std::pow(mu, md) * (1.0 - mu);
        EXPECT_NEAR(p, max_click_probability(m), 1e-15);
    }
}

TEST(MaxClickProbability, RandomSearchNeverExceeds) {
    for (std::size_t m = 1; m <= 4; ++m) {
        RandomStream stream(derive_seed(7, m), 0);
        const double bound = max_click_probability(m);
        for (int t = 0; t < 10000; ++t) {
            const UnitaryMatrix u = haar_random_unitary(m, stream);
            std::vector<double> mus(m);
            for (double& mu : mus) {
                mu = 0.999 * stream.uniform();
            }
            ASSERT_LE(click_probability_interfering(u, ThermalBank(mus)), bound);
        }
    }
}

TEST(CostComparison, Report) {
    const auto r = cost_comparison(2, 1.0);
    EXPECT_NEAR(r.loc_scaling, 16.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(r.classical_scaling, 16.0, 1e-12);
    EXPECT_NEAR(r.ratio, r.loc_scaling / r.classical_scaling, 1e-15);
    EXPECT_NEAR(cost_comparison(6, 0.5).loc_scaling / cost_comparison(6, 1.0).loc_scaling, 64.0,
                1e-9);
    for (std::size_t m = 1; m <= 40; ++m) {
        EXPECT_NEAR(cost_comparison(m, 1.0).ratio,
                    std::pow(2.0, static_cast<double>(m)) / std::pow(static_cast<double>(m), 2.5),
                    1e-9 * cost_comparison(m, 1.0).ratio);
    }
    for (std::size_t m = 15; m <= 40; ++m) {
        EXPECT_GT(cost_comparison(m, 1.0).ratio, 1.0);
    }
    // 2^M / M^2.5 dips below 1 for M = 2..7 and stays above from M = 8.
    EXPECT_EQ(optical_cost_dominance_onset(1.0), 8u);
    EXPECT_THROW(cost_comparison(0, 1.0), InputError);
    EXPECT_THROW(cost_comparison(3, 0.0), InputError);
}
