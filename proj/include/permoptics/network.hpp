#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "permoptics/matrix.hpp"

namespace permoptics {

// One lossless beam splitter acting on a pair of modes (1-based). The
// reflection phase is phi from the first port and pi - phi from the
// second:
//
//   out_a = r e^{i phi} in_a + t in_b
//   out_b = t in_a + r e^{i(pi - phi)} in_b
struct BeamSplitterStage {
    std::size_t mode_a;
    std::size_t mode_b;
    double transmissivity;
    double reflectivity;
    double reflection_phase = std::numbers::pi;

    // r = sqrt(1 - t^2).
    static BeamSplitterStage make(std::size_t mode_a, std::size_t mode_b, double transmissivity,
                                  double reflection_phase = std::numbers::pi);
};

// Stages in the order light traverses them.
class BeamSplitterChain {
  public:
    BeamSplitterChain() = default;
    explicit BeamSplitterChain(std::vector<BeamSplitterStage> stages);

    // Throws InputError if t^2 + r^2 deviates from 1 by more than 1e-12,
    // t is outside [0, 1], or the modes are equal or zero.
    void add(const BeamSplitterStage& stage);

    std::span<const BeamSplitterStage> stages() const { return stages_; }

  private:
    std::vector<BeamSplitterStage> stages_;
};

// Product S_n ... S_2 S_1 of the 2-mode embeddings. Throws InputError if a
// stage addresses a mode above `dim`.
UnitaryMatrix network_to_unitary(const BeamSplitterChain& chain, std::size_t dim);

// The three-splitter, four-mode interferometer: BS1 on modes 1-2 and BS3 on
// modes 3-4 feed BS2 on modes 2-3. Stages are returned in traversal order
// (BS1, BS3, BS2).
BeamSplitterChain four_mode_chain(std::array<double, 3> transmissivities,
                                  std::array<double, 3> phases = {std::numbers::pi, std::numbers::pi,
                                                                  std::numbers::pi});

// U -> V U W with V = diag(e^{i alpha}), W = diag(e^{i beta}). The
// permanent of U D U^dagger is unchanged by this map.
UnitaryMatrix apply_phase_gauge(const UnitaryMatrix& u, std::span<const double> alpha,
                                std::span<const double> beta);

}  // namespace permoptics
