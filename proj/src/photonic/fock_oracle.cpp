#include <algorithm>
#include <cmath>
#include <span>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "permoptics/error.hpp"
#include "permoptics/photonic.hpp"

namespace permoptics {
namespace {

// Output occupation numbers packed 8 bits per mode (at most 4 modes and
// 32 photons under the oracle guards).
using MonomialKey = std::uint32_t;

unsigned exponent(MonomialKey key, std::size_t mode) { return (key >> (8 * mode)) & 0xffu; }

using Polynomial = std::vector<std::pair<MonomialKey, Complex>>;

// p(x) * sum_j column[j] x_j
Polynomial multiply_linear(const Polynomial& p, std::span<const Complex> column) {
    std::unordered_map<MonomialKey, Complex> acc;
    acc.reserve(p.size() * column.size());
    for (const auto& [key, coef] : p) {
        for (std::size_t j = 0; j < column.size(); ++j) {
            if (column[j] != Complex{}) {
                acc[key + (MonomialKey{1} << (8 * j))] += coef * column[j];
            }
        }
    }
    return Polynomial(acc.begin(), acc.end());
}

double log_factorial(unsigned n) { return std::lgamma(n + 1.0); }

struct ThresholdSearch {
    std::size_t modes;
    unsigned cutoff;
    std::vector<std::vector<Complex>> columns;  // columns[i][j] = U_ji
    std::vector<double> mus;
    std::vector<unsigned> occupation;
    double probability = 0.0;
    std::size_t leaves = 0;

    void visit(std::size_t mode, const Polynomial& poly, double weight, double log_input_fact) {
        if (mode == modes) {
            ++leaves;
            for (const auto& [key, coef] : poly) {
                double log_output_fact = 0.0;
                bool all_clicked = true;
                for (std::size_t j = 0; j < modes; ++j) {
                    const unsigned mj = exponent(key, j);
                    all_clicked = all_clicked && mj > 0;
                    log_output_fact += log_factorial(mj);
                }
                if (all_clicked) {
                    probability +=
                        weight * std::norm(coef) * std::exp(log_output_fact - log_input_fact);
                }
            }
            return;
        }
        Polynomial current = poly;
        for (unsigned n = 0; n <= cutoff; ++n) {
            if (n > 0) {
                current = multiply_linear(current, columns[mode]);
            }
            occupation[mode] = n;
            visit(mode + 1, current, weight * thermal_pmf(mus[mode], n),
                  log_input_fact + log_factorial(n));
        }
    }
};

}  // namespace

OracleResult fock_oracle_probability(const UnitaryMatrix& u, const ThermalBank& bank,
                                     const DetectionModel& model) {
    const std::size_t m = u.dim();
    if (bank.dim() != m) {
        throw InputError("fock_oracle_probability: interferometer and bank sizes differ");
    }
    if (m > kOracleMaxModes) {
        throw GuardError("fock_oracle_probability: at most 4 modes are supported");
    }
    if (model.cutoff < 1 || model.cutoff > kOracleMaxCutoff) {
        throw GuardError("fock_oracle_probability: cutoff must lie in [1, 8]");
    }
    const auto mus = bank.effective_mus();
    const unsigned cutoff = model.cutoff;

    double log_kept = 0.0;
    for (double mu : mus) {
        log_kept += std::log1p(-std::pow(mu, cutoff + 1.0));
    }
    const double truncation_bound = -std::expm1(log_kept);

    if (model.kind == DetectionKind::exact_single_photon) {
        // Only inputs carrying exactly M photons can leave one photon in each
        // of the M outputs.
        std::vector<unsigned> n(m, 0);
        double probability = 0.0;
        std::size_t configurations = 0;
        while (true) {
            ++configurations;
            unsigned total = 0;
            for (unsigned k : n) total += k;
            if (total == m) {
                ComplexMatrix sub(m);
                std::size_t col = 0;
                double weight = 1.0;
                double input_fact = 1.0;
                for (std::size_t i = 0; i < m; ++i) {
                    weight *= thermal_pmf(mus[i], n[i]);
                    input_fact *= std::tgamma(n[i] + 1.0);
                    for (unsigned rep = 0; rep < n[i]; ++rep, ++col) {
                        for (std::size_t j = 0; j < m; ++j) {
                            sub(j, col) = u(j, i);
                        }
                    }
                }
                const Complex amplitude = permanent(sub, PermanentMethod::naive);
                probability += weight * std::norm(amplitude) / input_fact;
            }
            std::size_t pos = 0;
            while (pos < m && ++n[pos] > cutoff) {
                n[pos++] = 0;
            }
            if (pos == m) {
                break;
            }
        }
        return OracleResult{probability, truncation_bound, configurations};
    }

    ThresholdSearch search{m, cutoff, {}, mus, std::vector<unsigned>(m, 0)};
    search.columns.assign(m, std::vector<Complex>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            search.columns[i][j] = u(j, i);
        }
    }
    search.visit(0, Polynomial{{MonomialKey{0}, Complex{1.0}}}, 1.0, 0.0);
    return OracleResult{std::min(search.probability, 1.0), truncation_bound, search.leaves};
}

}  // namespace permoptics
