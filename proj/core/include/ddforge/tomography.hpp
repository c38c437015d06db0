#ifndef DDFORGE_TOMOGRAPHY_HPP
#define DDFORGE_TOMOGRAPHY_HPP

#include <Eigen/Dense>
#include <array>
#include <utility>
#include <vector>

#include "ddforge/evolution.hpp"

namespace ddforge {

/// Affine map v -> linear*v + offset on Bloch vectors. Physical processes
/// with zero offset are contractions (operator norm <= 1).
struct ProcessMatrix {
  Eigen::Matrix3d linear = Eigen::Matrix3d::Identity();
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& v) const {
    return linear * v + offset;
  }
};

/// Largest singular value, estimated by power iteration on L^T L.
double operator_norm(const Eigen::Matrix3d& m);

/// diag(lambda_x, lambda_y, lambda_z) from the closed-form prediction;
/// zero offset (the noises have zero mean).
ProcessMatrix predict_process(const ProcessPrediction& prediction);
ProcessMatrix predict_process(const PulseSequence& seq,
                              const SpectralDensity& env,
                              const SpectralDensity& ctrl,
                              const OverlapOptions& opts = {});

/// Reconstructs (linear, offset) from the four-initial-state protocol
/// (+z, -z, x, y in any order): offset = (v_{+z}+v_{-z})/2,
/// L z = (v_{+z}-v_{-z})/2, L x = v_x - offset, L y = v_y - offset.
ProcessMatrix fit_process(
    const std::array<std::pair<BlochState, BlochState>, 4>& state_pairs);

/// Latitude-longitude grid of unit vectors mapped through the process;
/// data for downstream sphere plots.
std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> sphere_samples(
    const ProcessMatrix& process, int resolution);

}  // namespace ddforge

#endif
