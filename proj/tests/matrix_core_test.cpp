#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "permoptics/error.hpp"
#include "permoptics/haar.hpp"
#include "permoptics/hpsm.hpp"
#include "permoptics/matrix.hpp"
#include "permoptics/matrix_json.hpp"
#include "permoptics/network.hpp"
#include "permoptics/permanent.hpp"
#include "permoptics/philox.hpp"
#include "permoptics/reference_rows.hpp"
#include "test_support.hpp"

using namespace permoptics;
using permoptics::testing::expansion_permanent;
using permoptics::testing::random_matrix;
using permoptics::testing::rel_diff;

namespace {

constexpr PermanentMethod kAllMethods[] = {PermanentMethod::naive, PermanentMethod::ryser,
                                           PermanentMethod::glynn};

ComplexMatrix all_ones(std::size_t n) {
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = 1.0;
        }
    }
    return m;
}

}  // namespace

// Philox4x32-10 known-answer vectors from the Random123 distribution.
TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    EXPECT_EQ(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}),
              (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(Philox4x32::block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                K{0xffffffffu, 0xffffffffu}),
              (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(Philox4x32::block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                K{0xa4093822u, 0x299f31d0u}),
              (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamsAreReproducibleAndSeekable) {
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    std::vector<std::uint64_t> xs;
    for (int i = 0; i < 10; ++i) {
        xs.push_back(a.next_u64());
        EXPECT_EQ(xs.back(), b.next_u64());
    }
    RandomStream c(42, 7);
    c.seek(3);
    EXPECT_EQ(c.next_u64(), xs[6]);
    RandomStream other(42, 8);
    EXPECT_NE(other.next_u64(), xs[0]);
}

TEST(Philox, UniformRanges) {
    RandomStream r(1, 2);
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        const double v = r.uniform_open_zero();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_GT(v, 0.0);
        ASSERT_LE(v, 1.0);
        mean += u;
    }
    EXPECT_NEAR(mean / 100000.0, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / 100000.0) * 1.5);
}

TEST(ComplexMatrix, RejectsBadShapes) {
    EXPECT_THROW(ComplexMatrix(0), InputError);
    EXPECT_THROW(ComplexMatrix(2, std::vector<Complex>(3)), InputError);
}

TEST(ComplexMatrix, ProductAndAdjoint) {
    const ComplexMatrix a{{Complex(1, 2), 3.0}, {0.0, Complex(0, -1)}};
    const ComplexMatrix b{{2.0, 0.0}, {Complex(1, 1), 1.0}};
    const ComplexMatrix ab = a * b;
    EXPECT_EQ(ab(0, 0), Complex(2, 4) + 3.0 * Complex(1, 1));
    EXPECT_EQ(ab(1, 0), Complex(0, -1) * Complex(1, 1));
    EXPECT_EQ(a.adjoint()(0, 1), 0.0);
    EXPECT_EQ(a.adjoint()(1, 0), 3.0);
    EXPECT_EQ(a.adjoint()(0, 0), Complex(1, -2));
}

TEST(UnitaryMatrix, ToleranceDependsOnLaxity) {
    const ComplexMatrix printed{{0.707, 0.709}, {-0.707, 0.705}};
    EXPECT_THROW(UnitaryMatrix{printed}, InputError);
    const UnitaryMatrix u(printed, UnitarityLaxity::experimental);
    EXPECT_GT(u.defect(), 1e-10);
    EXPECT_LT(u.defect(), 5e-3);
    const ComplexMatrix not_unitary{{1.0, 0.0}, {0.0, 0.9}};
    EXPECT_THROW(UnitaryMatrix(not_unitary, UnitarityLaxity::experimental), InputError);
}

TEST(UnitaryMatrix, PrintedFourModeRowsIngestVerbatim) {
    for (const auto& row : reference_rows()) {
        const UnitaryMatrix u(row.u, UnitarityLaxity::experimental);
        EXPECT_EQ(u.matrix(), row.u) << row.label;
        EXPECT_LE(column_norm_defect(row.u), UnitaryMatrix::kExperimentalTolerance) << row.label;
    }
}

TEST(Permanent, SmallClosedForms) {
    for (auto m : kAllMethods) {
        EXPECT_EQ(permanent(ComplexMatrix::identity(2), m), Complex(1.0));
        EXPECT_NEAR(permanent(all_ones(2), m).real(), 2.0, 1e-15);
        EXPECT_NEAR(permanent(all_ones(3), m).real(), 6.0, 1e-14);
        EXPECT_NEAR(permanent(all_ones(8), m).real(), 40320.0, 1e-8);
        const ComplexMatrix a{{Complex(1, 1), 2.0}, {3.0, Complex(0, 4)}};
        EXPECT_LT(std::abs(permanent(a, m) - (Complex(1, 1) * Complex(0, 4) + 6.0)), 1e-14);
        EXPECT_EQ(permanent(ComplexMatrix{{Complex(0.3, -0.2)}}, m), Complex(0.3, -0.2));
    }
}

TEST(Permanent, PrintedMatrixOfFirstRow) {
    const ComplexMatrix a = reference_rows()[0].printed_a;
    for (auto m : kAllMethods) {
        // 1.02^2 + 0.02^2 = 1.0408 (x 1e-6)
        EXPECT_NEAR(permanent(a, m).real(), 1.0408e-6, 1e-18);
        EXPECT_NEAR(permanent(a, m).real(), 1.04e-6, 0.02e-6);
    }
}

TEST(Permanent, MethodsAgreeWithExpansionOracle) {
    RandomStream rng(11, 0);
    for (std::size_t dim = 1; dim <= 7; ++dim) {
        for (int trial = 0; trial < 200; ++trial) {
            const ComplexMatrix a = random_matrix(dim, rng);
            const Complex ref = expansion_permanent(a);
            for (auto m : kAllMethods) {
                const Complex got = permanent(a, m);
                const bool ok = rel_diff(got, ref) <= 1e-9 || std::abs(got - ref) <= 1e-12;
                ASSERT_TRUE(ok) << "dim " << dim << " method " << to_string(m);
            }
        }
    }
}

TEST(Permanent, FastMethodsAgreeAtModerateSize) {
    RandomStream rng(12, 0);
    for (std::size_t dim : {12u, 16u}) {
        const ComplexMatrix a = random_matrix(dim, rng);
        const Complex ref = expansion_permanent(a);
        EXPECT_LE(rel_diff(permanent(a, PermanentMethod::ryser), ref), 1e-9);
        EXPECT_LE(rel_diff(permanent(a, PermanentMethod::glynn), ref), 1e-9);
    }
}

TEST(Permanent, RowMultilinearity) {
    RandomStream rng(13, 0);
    const Complex c(0.7, -1.3);
    for (int trial = 0; trial < 50; ++trial) {
        ComplexMatrix a = random_matrix(5, rng);
        const Complex before = permanent(a);
        for (std::size_t j = 0; j < 5; ++j) {
            a(2, j) *= c;
        }
        EXPECT_LE(rel_diff(permanent(a), c * before), 1e-12);
    }
}

TEST(Permanent, InvariantUnderRowAndColumnPermutation) {
    RandomStream rng(14, 0);
    const ComplexMatrix a = random_matrix(6, rng);
    ComplexMatrix b(6);
    const std::size_t rows[] = {3, 0, 5, 1, 4, 2};
    const std::size_t cols[] = {1, 2, 0, 5, 3, 4};
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            b(i, j) = a(rows[i], cols[j]);
        }
    }
    EXPECT_LE(rel_diff(permanent(a), permanent(b)), 1e-12);
    EXPECT_LE(rel_diff(permanent(a), permanent(a.transpose())), 1e-12);
}

TEST(Permanent, Guards) {
    EXPECT_THROW(permanent(all_ones(11), PermanentMethod::naive), GuardError);
    EXPECT_THROW(permanent(all_ones(26), PermanentMethod::glynn), GuardError);
    EXPECT_THROW(permanent(all_ones(26), PermanentMethod::ryser), GuardError);
    ComplexMatrix bad = all_ones(3);
    bad(1, 2) = Complex(std::nan(""), 0.0);
    for (auto m : kAllMethods) {
        EXPECT_THROW(permanent(bad, m), InputError);
    }
    bad(1, 2) = Complex(0.0, INFINITY);
    EXPECT_THROW(permanent(bad), InputError);
}

TEST(Permanent, MethodNames) {
    for (auto m : kAllMethods) {
        EXPECT_EQ(parse_permanent_method(to_string(m)), m);
    }
    EXPECT_FALSE(parse_permanent_method("gurvits").has_value());
}

TEST(Hpsm, IdentityBasis) {
    const std::vector<double> mus = {0.3, 0.7};
    const Hpsm h = hpsm_from(UnitaryMatrix::identity(2), mus);
    EXPECT_EQ(h.matrix()(0, 0), Complex(0.3));
    EXPECT_EQ(h.matrix()(1, 1), Complex(0.7));
    EXPECT_EQ(h.matrix()(0, 1), Complex(0.0));
    EXPECT_DOUBLE_EQ(h.mu_max(), 0.7);
}

TEST(Hpsm, RejectsBadSpectra) {
    const std::vector<double> negative = {0.3, -0.1};
    const std::vector<double> short_list = {0.3};
    EXPECT_THROW(hpsm_from(UnitaryMatrix::identity(2), negative), InputError);
    EXPECT_THROW(hpsm_from(UnitaryMatrix::identity(2), short_list), InputError);
}

TEST(Hpsm, PrintedRowsReconstructFromUAndD) {
    const auto& rows = reference_rows();
    // Tolerances: 0.01e-3 per entry for the 2x2 rows, 0.02e-3 for the 4x4 rows.
    const double tols[] = {0.01e-3, 0.01e-3, 0.02e-3, 0.02e-3};
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const ComplexMatrix a = sandwich(rows[r].u, rows[r].mus);
        EXPECT_LE(max_abs_diff(a, rows[r].printed_a), tols[r] + 1e-15) << rows[r].label;
    }
}

TEST(Hpsm, PermanentIsRealAndNonnegative) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const UnitaryMatrix u = haar_random_unitary(5, seed);
        RandomStream rng(seed, 99);
        std::vector<double> mus(5);
        for (double& mu : mus) {
            mu = rng.uniform();
        }
        const Complex p = permanent(hpsm_from(u, mus).matrix());
        EXPECT_LE(std::abs(p.imag()), 1e-12 * std::abs(p));
        EXPECT_GE(p.real(), -1e-15);
    }
}

TEST(SpectralDecompose, DiagonalInput) {
    const std::vector<double> d = {1.0, 2.0};
    const auto s = spectral_decompose(ComplexMatrix::diagonal(d));
    ASSERT_EQ(s.eigenvalues.size(), 2u);
    EXPECT_DOUBLE_EQ(s.eigenvalues[0], 2.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues[1], 1.0);
    EXPECT_NEAR(std::abs(s.basis(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(s.basis(0, 1)), 1.0, 1e-15);
    EXPECT_TRUE(s.positive_semidefinite);
}

TEST(SpectralDecompose, TiesKeepOriginalOrder) {
    const std::vector<double> d = {1.0, 3.0, 1.0};
    const auto s = spectral_decompose(ComplexMatrix::diagonal(d));
    EXPECT_EQ(s.eigenvalues, (std::vector<double>{3.0, 1.0, 1.0}));
    EXPECT_NEAR(std::abs(s.basis(0, 1)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(s.basis(2, 2)), 1.0, 1e-15);
}

TEST(SpectralDecompose, FirstPrintedMatrix) {
    const auto s = spectral_decompose(reference_rows()[0].printed_a);
    // Eigenvalues of [[1.02, 0.02], [0.02, 1.02]] are 1.04 and 1.00.
    EXPECT_NEAR(s.eigenvalues[0], 1.04e-3, 1e-15);
    EXPECT_NEAR(s.eigenvalues[1], 1.00e-3, 1e-15);
}

TEST(SpectralDecompose, MatchesEigenAndRoundTrips) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t dim = 2 + seed % 7;
        const UnitaryMatrix u = haar_random_unitary(dim, seed + 100);
        RandomStream rng(seed, 5);
        std::vector<double> mus(dim);
        for (double& mu : mus) {
            mu = rng.uniform();
        }
        const Hpsm h = hpsm_from(u, mus);
        const auto s = spectral_decompose(h.matrix());
        EXPECT_LE(s.reconstruction_error, 1e-12);
        EXPECT_LE(unitarity_defect(s.basis.matrix()), 1e-12);

        Eigen::MatrixXcd e(dim, dim);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h.matrix()(i, j);
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e);
        std::vector<double> ref(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
        std::sort(ref.rbegin(), ref.rend());
        std::vector<double> sorted_mus = mus;
        std::sort(sorted_mus.rbegin(), sorted_mus.rend());
        for (std::size_t i = 0; i < dim; ++i) {
            EXPECT_NEAR(s.eigenvalues[i], ref[i], 1e-12);
            EXPECT_NEAR(s.eigenvalues[i], sorted_mus[i], 1e-9);
        }
    }
}

TEST(SpectralDecompose, FlagsIndefiniteAndRejectsNonHermitian) {
    const ComplexMatrix indefinite{{0.0, 1.0}, {1.0, 0.0}};
    const auto s = spectral_decompose(indefinite);
    EXPECT_FALSE(s.positive_semidefinite);
    EXPECT_NEAR(s.eigenvalues[1], -1.0, 1e-14);
    const ComplexMatrix skew{{0.0, 1.0}, {0.0, 0.0}};
    EXPECT_THROW(spectral_decompose(skew), InputError);
}

TEST(ScaleHpsm, ClosedForms) {
    const std::vector<double> twos = {2.0, 2.0};
    const auto s = scale_hpsm(hpsm_from(UnitaryMatrix::identity(2), twos));
    EXPECT_DOUBLE_EQ(s.factor, 2.0);
    EXPECT_EQ(s.scaled.matrix(), ComplexMatrix::identity(2));

    const std::vector<double> d = {3.0, 1.0};
    const Hpsm a = hpsm_from(UnitaryMatrix::identity(2), d);
    const auto t = scale_hpsm(a);
    EXPECT_DOUBLE_EQ(t.factor, 3.0);
    EXPECT_NEAR(permanent(t.scaled.matrix()).real(), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(9.0 * permanent(t.scaled.matrix()).real(), 3.0, 1e-14);

    const std::vector<double> zeros = {0.0, 0.0};
    EXPECT_THROW(scale_hpsm(hpsm_from(UnitaryMatrix::identity(2), zeros)), InputError);
}

TEST(ScaleHpsm, ScalingIdentityOnRandomInputs) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const UnitaryMatrix u = haar_random_unitary(4, seed + 7);
        RandomStream rng(seed, 1);
        std::vector<double> mus(4);
        for (double& mu : mus) {
            mu = 3.0 * rng.uniform();
        }
        const Hpsm a = hpsm_from(u, mus);
        const auto s = scale_hpsm(a);
        EXPECT_LE(*std::max_element(s.scaled.spectrum().begin(), s.scaled.spectrum().end()),
                  1.0 + 1e-15);
        const Complex lhs = permanent(a.matrix());
        const Complex rhs = std::pow(s.factor, 4) * permanent(s.scaled.matrix());
        EXPECT_LE(rel_diff(lhs, rhs), 1e-10);
    }
}

TEST(Haar, UnitaryDeterministicAndPhase) {
    const UnitaryMatrix one = haar_random_unitary(1, 5);
    EXPECT_NEAR(std::abs(one(0, 0)), 1.0, 1e-15);
    for (std::size_t dim : {2u, 4u, 9u, 16u}) {
        const UnitaryMatrix a = haar_random_unitary(dim, 77);
        const UnitaryMatrix b = haar_random_unitary(dim, 77);
        EXPECT_LE(unitarity_defect(a.matrix()), 1e-12);
        EXPECT_EQ(a.matrix(), b.matrix());
        EXPECT_NE(a.matrix(), haar_random_unitary(dim, 78).matrix());
    }
    EXPECT_THROW(haar_random_unitary(0, 1), InputError);
}

TEST(Haar, FirstAndSecondMoments) {
    // E|U_11|^2 = 1/M and E|U_11|^4 = 2/(M(M+1)) for Haar unitaries.
    constexpr std::size_t m = 4;
    constexpr int draws = 100000;
    RandomStream stream(2024, 0);
    double s1 = 0.0;
    double s2 = 0.0;
    double phase_re = 0.0;
    for (int i = 0; i < draws; ++i) {
        const UnitaryMatrix u = haar_random_unitary(m, stream);
        const double x = std::norm(u(0, 0));
        s1 += x;
        s2 += x * x;
        phase_re += (u(0, 0) / std::abs(u(0, 0))).real();
    }
    const double mean = s1 / draws;
    const double se = std::sqrt((s2 / draws - mean * mean) / draws);
    EXPECT_NEAR(mean, 0.25, 3.0 * se);
    EXPECT_NEAR(s2 / draws, 2.0 / (m * (m + 1.0)), 0.002);
    // The phase of an entry is uniform; an uncorrected QR would bias it.
    EXPECT_NEAR(phase_re / draws, 0.0, 3.0 * std::sqrt(0.5 / draws));
}

TEST(Network, SingleStage) {
    BeamSplitterChain chain;
    chain.add(BeamSplitterStage::make(1, 2, 1.0 / std::numbers::sqrt2));
    const UnitaryMatrix u = network_to_unitary(chain, 2);
    const double h = 1.0 / std::numbers::sqrt2;
    EXPECT_NEAR(std::abs(u(0, 0) - Complex(-h, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(0, 1) - Complex(h, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 0) - Complex(h, 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(1, 1) - Complex(h, 0.0)), 0.0, 1e-15);
}

TEST(Network, StageValidation) {
    BeamSplitterChain chain;
    EXPECT_THROW(chain.add(BeamSplitterStage{1, 2, 0.6, 0.7, std::numbers::pi}), InputError);
    EXPECT_THROW(chain.add(BeamSplitterStage::make(2, 2, 0.5)), InputError);
    EXPECT_THROW(chain.add(BeamSplitterStage::make(0, 1, 0.5)), InputError);
    EXPECT_THROW(chain.add(BeamSplitterStage::make(1, 2, 1.5)), InputError);
    chain.add(BeamSplitterStage::make(1, 3, 0.5));
    EXPECT_THROW(network_to_unitary(chain, 2), InputError);
}

// The four-mode interferometer written out entry by entry.
ComplexMatrix printed_four_mode(const std::array<double, 3>& t, const std::array<double, 3>& phi) {
    const double pi = std::numbers::pi;
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i) {
        r[i] = std::sqrt(1.0 - t[i] * t[i]);
    }
    auto e = [](double x) { return std::polar(1.0, x); };
    const auto [t1, t2, t3] = t;
    const auto [r1, r2, r3] = r;
    const auto [p1, p2, p3] = phi;
    return ComplexMatrix{
        {r1 * e(p1), t1, 0.0, 0.0},
        {t1 * r2 * e(p2), r1 * r2 * e(pi - p1 + p2), r3 * t2 * e(p3), t3 * t2},
        {t1 * t2, r1 * t2 * e(pi - p1), r3 * r2 * e(pi - p2 + p3), t3 * r2 * e(pi - p2)},
        {0.0, 0.0, t3, r3 * e(pi - p3)},
    };
}

TEST(Network, FourModeChainMatchesWrittenForm) {
    RandomStream rng(31, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::array<double, 3> t = {rng.uniform(), rng.uniform(), rng.uniform()};
        const std::array<double, 3> phi = {2 * std::numbers::pi * rng.uniform(),
                                           2 * std::numbers::pi * rng.uniform(),
                                           2 * std::numbers::pi * rng.uniform()};
        const UnitaryMatrix u = network_to_unitary(four_mode_chain(t, phi), 4);
        EXPECT_LE(max_abs_diff(u.matrix(), printed_four_mode(t, phi)), 1e-12);
        EXPECT_LE(unitarity_defect(u.matrix()), 1e-12);
    }
    const std::array<double, 3> t = {0.3, 0.8, 0.5};
    const std::array<double, 3> pis = {std::numbers::pi, std::numbers::pi, std::numbers::pi};
    EXPECT_LE(max_abs_diff(network_to_unitary(four_mode_chain(t), 4).matrix(),
                           printed_four_mode(t, pis)),
              1e-12);
}

TEST(Network, FullyTransmissiveFirstSplitter) {
    const std::array<double, 3> t = {1.0, 0.6, 0.4};
    const UnitaryMatrix u = network_to_unitary(four_mode_chain(t), 4);
    EXPECT_EQ(u(0, 0), Complex(0.0));
    EXPECT_EQ(u(0, 1), Complex(1.0));
    EXPECT_NEAR(std::abs(u(1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(u(2, 1)), 0.0, 1e-15);
    EXPECT_LE(max_abs_diff(u.matrix(), printed_four_mode(t, {std::numbers::pi, std::numbers::pi,
                                                              std::numbers::pi})),
              1e-12);
}

TEST(PhaseGauge, IdentityAndInvariance) {
    const UnitaryMatrix u = haar_random_unitary(4, 3);
    const std::vector<double> zero(4, 0.0);
    EXPECT_EQ(apply_phase_gauge(u, zero, zero).matrix(), u.matrix());

    const std::vector<double> mus = {0.1, 0.4, 0.2, 0.7};
    const Complex ref = permanent(hpsm_from(u, mus).matrix());
    RandomStream rng(8, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> alpha(4);
        std::vector<double> beta(4);
        for (std::size_t i = 0; i < 4; ++i) {
            alpha[i] = 2 * std::numbers::pi * rng.uniform();
            beta[i] = 2 * std::numbers::pi * rng.uniform();
        }
        const UnitaryMatrix g = apply_phase_gauge(u, alpha, beta);
        EXPECT_LE(unitarity_defect(g.matrix()), 1e-12);
        EXPECT_LE(rel_diff(permanent(hpsm_from(g, mus).matrix()), ref), 1e-12);
    }

    const std::vector<double> pis(4, std::numbers::pi);
    const UnitaryMatrix neg = apply_phase_gauge(u, pis, zero);
    EXPECT_LE(max_abs_diff(neg.matrix(), u.matrix() * Complex(-1.0)), 1e-15);
    EXPECT_LE(rel_diff(permanent(hpsm_from(neg, mus).matrix()), ref), 1e-12);
    EXPECT_THROW(apply_phase_gauge(u, std::vector<double>(3, 0.0), zero), InputError);
}

TEST(MatrixJson, RoundTripAndErrors) {
    const UnitaryMatrix u = haar_random_unitary(3, 9);
    EXPECT_EQ(matrix_from_json(matrix_to_json(u.matrix())), u.matrix());
    const auto real_only = nlohmann::json::parse(R"({"re": [[1, 2], [3, 4]]})");
    EXPECT_EQ(matrix_from_json(real_only), (ComplexMatrix{{1.0, 2.0}, {3.0, 4.0}}));
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"re": [[1, 2], [3]]})")), InputError);
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"dim": 3, "re": [[1, 2], [3, 4]]})")),
                 InputError);
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"({"re": [[1, "x"], [3, 4]]})")),
                 InputError);
    EXPECT_THROW(matrix_from_json(nlohmann::json::parse(R"([1, 2])")), InputError);
}
