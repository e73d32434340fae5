#include "permoptics/network.hpp"

#include <cmath>
#include <sstream>

#include "permoptics/error.hpp"

namespace permoptics {

BeamSplitterStage BeamSplitterStage::make(std::size_t mode_a, std::size_t mode_b,
                                          double transmissivity, double reflection_phase) {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw InputError("beam splitter transmissivity must lie in [0, 1]");
    }
    return BeamSplitterStage{mode_a, mode_b, transmissivity,
                             std::sqrt(1.0 - transmissivity * transmissivity), reflection_phase};
}

BeamSplitterChain::BeamSplitterChain(std::vector<BeamSplitterStage> stages) {
    for (const auto& stage : stages) {
        add(stage);
    }
}

void BeamSplitterChain::add(const BeamSplitterStage& stage) {
    const double t = stage.transmissivity;
    const double r = stage.reflectivity;
    if (!(t >= 0.0 && t <= 1.0) || !(r >= 0.0 && r <= 1.0)) {
        throw InputError("beam splitter t and r must lie in [0, 1]");
    }
    if (std::abs(t * t + r * r - 1.0) > 1e-12) {
        throw InputError("beam splitter is lossy: t^2 + r^2 != 1");
    }
    if (stage.mode_a == 0 || stage.mode_b == 0 || stage.mode_a == stage.mode_b) {
        throw InputError("beam splitter needs two distinct 1-based modes");
    }
    if (!std::isfinite(stage.reflection_phase)) {
        throw InputError("beam splitter phase must be finite");
    }
    stages_.push_back(stage);
}

UnitaryMatrix network_to_unitary(const BeamSplitterChain& chain, std::size_t dim) {
    ComplexMatrix u = ComplexMatrix::identity(dim);
    for (const auto& stage : chain.stages()) {
        if (stage.mode_a > dim || stage.mode_b > dim) {
            std::ostringstream os;
            os << "beam splitter on modes (" << stage.mode_a << ", " << stage.mode_b
               << ") does not fit " << dim << " modes";
            throw InputError(os.str());
        }
        const std::size_t a = stage.mode_a - 1;
        const std::size_t b = stage.mode_b - 1;
        const double t = stage.transmissivity;
        const double r = stage.reflectivity;
        const Complex raa = r * std::polar(1.0, stage.reflection_phase);
        const Complex rbb = r * std::polar(1.0, std::numbers::pi - stage.reflection_phase);
        // Left-multiply by the 2-mode embedding: only rows a and b change.
        for (std::size_t col = 0; col < dim; ++col) {
            const Complex ua = u(a, col);
            const Complex ub = u(b, col);
            u(a, col) = raa * ua + t * ub;
            u(b, col) = t * ua + rbb * ub;
        }
    }
    return UnitaryMatrix(std::move(u));
}

BeamSplitterChain four_mode_chain(std::array<double, 3> transmissivities,
                                  std::array<double, 3> phases) {
    BeamSplitterChain chain;
    chain.add(BeamSplitterStage::make(1, 2, transmissivities[0], phases[0]));
    chain.add(BeamSplitterStage::make(3, 4, transmissivities[2], phases[2]));
    chain.add(BeamSplitterStage::make(2, 3, transmissivities[1], phases[1]));
    return chain;
}

UnitaryMatrix apply_phase_gauge(const UnitaryMatrix& u, std::span<const double> alpha,
                                std::span<const double> beta) {
    const std::size_t n = u.dim();
    if (alpha.size() != n || beta.size() != n) {
        throw InputError("apply_phase_gauge: phase vectors must have length " + std::to_string(n));
    }
    ComplexMatrix out = u.matrix();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) *= std::polar(1.0, alpha[i] + beta[j]);
        }
    }
    return UnitaryMatrix(std::move(out), u.laxity());
}

}  // namespace permoptics
