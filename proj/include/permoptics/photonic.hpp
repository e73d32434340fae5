#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "permoptics/matrix.hpp"
#include "permoptics/permanent.hpp"

namespace permoptics {

// Thermal source parameters per input mode. mus[i] is the geometric
// parameter of the photon-number distribution, p(n) = (1 - mu) mu^n, so the
// mean photon number is mu / (1 - mu). etas[i] is the survival probability
// of a photon between source and detection; it defaults to 1.
class ThermalBank {
  public:
    // Throws InputError unless 0 <= mu < 1 and 0 < eta <= 1 everywhere.
    explicit ThermalBank(std::vector<double> mus, std::vector<double> etas = {});

    std::size_t dim() const { return mus_.size(); }
    const std::vector<double>& mus() const { return mus_; }
    const std::vector<double>& etas() const { return etas_; }

    // Parameters seen at the interferometer after the loss map. Equal to
    // mus() when every eta is 1.
    std::vector<double> effective_mus() const;

  private:
    std::vector<double> mus_;
    std::vector<double> etas_;
};

double thermal_pmf(double mu, unsigned n);
double mean_photon_number(double mu);
double mu_from_mean_photon_number(double mean);

// Loss keeps a thermal state thermal and scales its mean photon number by
// eta: mu -> eta mu / (1 - mu + eta mu).
double apply_loss(double mu, double eta);

// Coincidence probability Perm[U D U^dagger] prod_i (1 - mu_i), using the
// effective (post-loss) mus.
double click_probability_interfering(const UnitaryMatrix& u, const ThermalBank& bank,
                                     PermanentMethod method = PermanentMethod::glynn);

// |Perm U|^2: probability of one photon per output with one photon per input.
double single_photon_click_probability(const UnitaryMatrix& u,
                                       PermanentMethod method = PermanentMethod::glynn);

enum class DetectionKind { exact_single_photon, threshold };

struct DetectionModel {
    DetectionKind kind = DetectionKind::exact_single_photon;
    unsigned cutoff = 4;  // per-input photon-number cutoff for enumeration
};

struct OracleResult {
    double probability;
    double truncation_bound;  // probability mass of the input configurations not enumerated
    std::size_t configurations;
};

inline constexpr std::size_t kOracleMaxModes = 4;
inline constexpr unsigned kOracleMaxCutoff = 8;

// Brute-force Fock-space evaluation, independent of the permanent form. Every input
// configuration n with n_i <= cutoff is weighted by prod_i thermal_pmf and
// propagated through U as a bosonic transformation.
//
//  exact_single_photon: probability that every output holds exactly one
//                       photon. Transition amplitudes are
//                       Perm(U[:, n]) / sqrt(prod n_i!), with column i of U
//                       repeated n_i times.
//  threshold:           probability that every output holds at least one
//                       photon. The full output distribution of each input
//                       configuration is expanded as a polynomial in the
//                       output creation operators.
//
// Throws GuardError for more than 4 modes or a cutoff above 8.
OracleResult fock_oracle_probability(const UnitaryMatrix& u, const ThermalBank& bank,
                                     const DetectionModel& model);

enum class EnhancementConvention {
    // e = prod_s (n_s)!, n_s = photons detected from source s. Gives 24, 6,
    // 2, 4, 1 for the five four-mode cases.
    factorial_rule,
    // The four-mode case factors 24, 6, 4, 2, 1 applied as printed.
    paper_literal,
};

// Weighted sum over ordered source assignments (detector d <- source s_d):
//
//   S = sum_{s_1..s_M} e(s) prod_d |U_{d, s_d}|^2 mu_{s_d}
//
// This is the small-mu coincidence probability for fully distinguishable
// thermal pulses. Throws InputError for paper_literal outside M in {2, 4}
// and GuardError for M > 8.
double no_interference_sum(const UnitaryMatrix& u, std::span<const double> mus,
                           EnhancementConvention convention);

// Coincidence probability with fully distinguishable pulses,
// prod_i (1 - mu_i) * S. For the factorial rule this is exact at any mu:
// source s emits n_s photons with probability (1 - mu) mu^{n_s}, and the
// multinomial split of those photons over distinct detectors contributes
// n_s! prod |U|^2.
double click_probability_no_interference(
    const UnitaryMatrix& u, const ThermalBank& bank,
    EnhancementConvention convention = EnhancementConvention::factorial_rule);

// The permanent a distinguishable-pulse run would report: S taken as the
// coincidence probability (small-mu form) and divided by prod (1 - mu_i), the
// same inversion applied to interfering data.
double no_interference_permanent(
    const UnitaryMatrix& u, const ThermalBank& bank,
    EnhancementConvention convention = EnhancementConvention::factorial_rule);

// (p_no - p_int) / p_no with both probabilities exact.
double thermal_visibility(const UnitaryMatrix& u, const ThermalBank& bank);

// Source parameters that, after the loss map, give target_mus at the
// interferometer. Throws InputError when a target is outside [0, 1) or the
// required source parameter rounds to 1.
std::vector<double> precompensate_loss(const ThermalBank& bank, std::span<const double> target_mus);

// Detector count statistics for the count-rate calibration experiment.
struct CountRates {
    double rep_rate_hz;
    double accum_s;
    std::size_t dim;
    std::vector<double> singles;  // C_ij, row-major: counts at detector j from input i alone
    double coincidences;          // C_c
    bool small_mu_violation;      // some mu_i > 0.05

    double single(std::size_t input, std::size_t detector) const {
        return singles[input * dim + detector];
    }
    // C_i = sum_j C_ij
    double input_total(std::size_t input) const;
};

inline constexpr double kSmallMuLimit = 0.05;

// C_ij = f t mu_ij, where mu_ij is the thermal parameter at detector j with
// mean photon number |U_ji|^2 <n_i>; C_c = f t p^th(1, ..., 1).
// Throws InputError for nonpositive f or t.
CountRates simulate_count_rates(const UnitaryMatrix& u, const ThermalBank& bank, double rep_rate_hz,
                                double accum_s);

enum class ModulusInversion {
    // |U_ji| = sqrt(C_ij / C_i); relies on sum_j mu_ij ~ mu_i (small mu).
    count_ratio,
    // Undo the click map first: <n_ij> = mu_ij / (1 - mu_ij) with
    // mu_ij = C_ij / (f t), then |U_ji| = sqrt(<n_ij> / sum_j <n_ij>).
    thermal_exact,
};

// Moduli |U_ji| as a real matrix (row = detector j, column = input i).
// Phases are not observable from singles and are left at zero. Throws
// InputError when some input has no counts.
ComplexMatrix reconstruct_unitary_moduli(const CountRates& counts,
                                         ModulusInversion inversion = ModulusInversion::count_ratio);

// Perm[A] = (C_c / f t) / prod_i (1 - C_i / f t), with C_i the summed singles of input i.
double permanent_from_counts(const CountRates& counts);

std::string to_string(DetectionKind kind);
std::string to_string(EnhancementConvention convention);

}  // namespace permoptics
