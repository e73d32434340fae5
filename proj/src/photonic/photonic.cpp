#include "permoptics/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "permoptics/error.hpp"
#include "permoptics/hpsm.hpp"

namespace permoptics {
namespace {

void require_same_dim(const UnitaryMatrix& u, const ThermalBank& bank, const char* where) {
    if (u.dim() != bank.dim()) {
        std::ostringstream os;
        os << where << ": " << u.dim() << "-mode interferometer with " << bank.dim()
           << " thermal inputs";
        throw InputError(os.str());
    }
}

double product_one_minus(std::span<const double> mus) {
    double prod = 1.0;
    for (double mu : mus) {
        prod *= 1.0 - mu;
    }
    return prod;
}

}  // namespace

ThermalBank::ThermalBank(std::vector<double> mus, std::vector<double> etas)
    : mus_(std::move(mus)), etas_(std::move(etas)) {
    if (mus_.empty()) {
        throw InputError("ThermalBank: at least one mode is required");
    }
    if (etas_.empty()) {
        etas_.assign(mus_.size(), 1.0);
    }
    if (etas_.size() != mus_.size()) {
        throw InputError("ThermalBank: mus and etas differ in length");
    }
    for (double mu : mus_) {
        if (!(mu >= 0.0 && mu < 1.0)) {
            throw InputError("ThermalBank: every mu must satisfy 0 <= mu < 1");
        }
    }
    for (double eta : etas_) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw InputError("ThermalBank: every eta must satisfy 0 < eta <= 1");
        }
    }
}

std::vector<double> ThermalBank::effective_mus() const {
    std::vector<double> out(mus_.size());
    for (std::size_t i = 0; i < mus_.size(); ++i) {
        out[i] = apply_loss(mus_[i], etas_[i]);
    }
    return out;
}

double thermal_pmf(double mu, unsigned n) {
    if (!(mu >= 0.0 && mu < 1.0)) {
        throw InputError("thermal_pmf: mu must satisfy 0 <= mu < 1");
    }
    if (n == 0) {
        return 1.0 - mu;
    }
    return (1.0 - mu) * std::pow(mu, static_cast<double>(n));
}

double mean_photon_number(double mu) { return mu / (1.0 - mu); }

double mu_from_mean_photon_number(double mean) { return mean / (1.0 + mean); }

double apply_loss(double mu, double eta) {
    if (eta == 1.0) {
        return mu;
    }
    return eta * mu / (1.0 - mu + eta * mu);
}

double click_probability_interfering(const UnitaryMatrix& u, const ThermalBank& bank,
                                     PermanentMethod method) {
    require_same_dim(u, bank, "click_probability_interfering");
    const auto mus = bank.effective_mus();
    const Hpsm a = hpsm_from(u, mus);
    const double perm = permanent(a.matrix(), method).real();
    return std::clamp(perm * product_one_minus(mus), 0.0, 1.0);
}

double single_photon_click_probability(const UnitaryMatrix& u, PermanentMethod method) {
    return std::clamp(std::norm(permanent(u.matrix(), method)), 0.0, 1.0);
}

double no_interference_sum(const UnitaryMatrix& u, std::span<const double> mus,
                           EnhancementConvention convention) {
    const std::size_t m = u.dim();
    if (mus.size() != m) {
        throw InputError("no_interference_sum: mus length does not match the interferometer");
    }
    if (convention == EnhancementConvention::paper_literal && m != 2 && m != 4) {
        throw InputError("no_interference_sum: the printed enhancement factors cover M = 2 and 4 only");
    }
    if (m > 8) {
        throw GuardError("no_interference_sum: M^M enumeration limited to M <= 8");
    }
    const ComplexMatrix weights = u.matrix().abs2();

    // Literal four-mode factors keyed by the sorted multiplicity pattern.
    auto literal_factor = [](std::vector<int> pattern) -> double {
        std::sort(pattern.begin(), pattern.end(), std::greater<>());
        if (pattern == std::vector<int>{4}) return 24.0;
        if (pattern == std::vector<int>{3, 1}) return 6.0;
        if (pattern == std::vector<int>{2, 1, 1}) return 4.0;
        if (pattern == std::vector<int>{2, 2}) return 2.0;
        if (pattern == std::vector<int>{2}) return 2.0;
        return 1.0;
    };

    std::vector<std::size_t> source(m, 0);
    std::vector<int> multiplicity(m);
    double total = 0.0;
    while (true) {
        double term = 1.0;
        std::fill(multiplicity.begin(), multiplicity.end(), 0);
        for (std::size_t d = 0; d < m; ++d) {
            term *= weights(d, source[d]).real() * mus[source[d]];
            ++multiplicity[source[d]];
        }
        if (term != 0.0) {
            double factor = 1.0;
            if (convention == EnhancementConvention::factorial_rule) {
                for (int k : multiplicity) {
                    factor *= std::tgamma(k + 1.0);
                }
            } else {
                std::vector<int> pattern;
                for (int k : multiplicity) {
                    if (k > 0) pattern.push_back(k);
                }
                factor = literal_factor(std::move(pattern));
            }
            total += factor * term;
        }
        std::size_t pos = 0;
        while (pos < m && ++source[pos] == m) {
            source[pos++] = 0;
        }
        if (pos == m) {
            break;
        }
    }
    return total;
}

double click_probability_no_interference(const UnitaryMatrix& u, const ThermalBank& bank,
                                         EnhancementConvention convention) {
    require_same_dim(u, bank, "click_probability_no_interference");
    const auto mus = bank.effective_mus();
    return std::clamp(product_one_minus(mus) * no_interference_sum(u, mus, convention), 0.0, 1.0);
}

double no_interference_permanent(const UnitaryMatrix& u, const ThermalBank& bank,
                                 EnhancementConvention convention) {
    require_same_dim(u, bank, "no_interference_permanent");
    const auto mus = bank.effective_mus();
    return no_interference_sum(u, mus, convention) / product_one_minus(mus);
}

double thermal_visibility(const UnitaryMatrix& u, const ThermalBank& bank) {
    const double p_no = click_probability_no_interference(u, bank);
    if (p_no == 0.0) {
        throw InputError("thermal_visibility: no coincidences without interference");
    }
    const double p_int = click_probability_interfering(u, bank);
    return (p_no - p_int) / p_no;
}

std::vector<double> precompensate_loss(const ThermalBank& bank, std::span<const double> target_mus) {
    if (target_mus.size() != bank.dim()) {
        throw InputError("precompensate_loss: target length does not match the bank");
    }
    std::vector<double> source(bank.dim());
    for (std::size_t i = 0; i < bank.dim(); ++i) {
        const double target = target_mus[i];
        if (!(target >= 0.0 && target < 1.0)) {
            throw InputError("precompensate_loss: target mu must satisfy 0 <= mu < 1");
        }
        const double mean = mean_photon_number(target) / bank.etas()[i];
        source[i] = mu_from_mean_photon_number(mean);
        if (!(source[i] < 1.0)) {
            throw InputError("precompensate_loss: target is unreachable through this loss");
        }
    }
    return source;
}

double CountRates::input_total(std::size_t input) const {
    double total = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        total += single(input, j);
    }
    return total;
}

CountRates simulate_count_rates(const UnitaryMatrix& u, const ThermalBank& bank, double rep_rate_hz,
                                double accum_s) {
    require_same_dim(u, bank, "simulate_count_rates");
    if (!(rep_rate_hz > 0.0) || !(accum_s > 0.0)) {
        throw InputError("simulate_count_rates: repetition rate and accumulation time must be positive");
    }
    const std::size_t m = u.dim();
    const auto mus = bank.effective_mus();
    const double pulses = rep_rate_hz * accum_s;

    CountRates out{rep_rate_hz, accum_s, m, std::vector<double>(m * m), 0.0, false};
    for (std::size_t i = 0; i < m; ++i) {
        out.small_mu_violation = out.small_mu_violation || mus[i] > kSmallMuLimit;
        const double mean = mean_photon_number(mus[i]);
        for (std::size_t j = 0; j < m; ++j) {
            const double mu_ij = mu_from_mean_photon_number(std::norm(u(j, i)) * mean);
            out.singles[i * m + j] = pulses * mu_ij;
        }
    }
    out.coincidences = pulses * click_probability_interfering(u, bank);
    return out;
}

ComplexMatrix reconstruct_unitary_moduli(const CountRates& counts, ModulusInversion inversion) {
    const std::size_t m = counts.dim;
    const double pulses = counts.rep_rate_hz * counts.accum_s;
    ComplexMatrix moduli(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> weight(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double c = counts.single(i, j);
            if (c < 0.0) {
                throw InputError("reconstruct_unitary_moduli: negative counts");
            }
            if (inversion == ModulusInversion::count_ratio) {
                weight[j] = c;
            } else {
                const double mu_ij = c / pulses;
                if (!(mu_ij < 1.0)) {
                    throw InputError("reconstruct_unitary_moduli: counts exceed the pulse number");
                }
                weight[j] = mean_photon_number(mu_ij);
            }
        }
        double total = 0.0;
        for (double w : weight) {
            total += w;
        }
        if (!(total > 0.0)) {
            throw InputError("reconstruct_unitary_moduli: input " + std::to_string(i + 1) +
                             " has zero total counts");
        }
        for (std::size_t j = 0; j < m; ++j) {
            moduli(j, i) = std::sqrt(weight[j] / total);
        }
    }
    return moduli;
}

double permanent_from_counts(const CountRates& counts) {
    const double pulses = counts.rep_rate_hz * counts.accum_s;
    double denom = 1.0;
    for (std::size_t i = 0; i < counts.dim; ++i) {
        denom *= 1.0 - counts.input_total(i) / pulses;
    }
    return (counts.coincidences / pulses) / denom;
}

std::string to_string(DetectionKind kind) {
    return kind == DetectionKind::exact_single_photon ? "exact_single_photon" : "threshold";
}

std::string to_string(EnhancementConvention convention) {
    return convention == EnhancementConvention::factorial_rule ? "factorial_rule" : "paper_literal";
}

}  // namespace permoptics
