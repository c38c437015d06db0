#include "ddforge/tomography.hpp"

#include <cmath>

#include "ddforge/errors.hpp"

namespace ddforge {

double operator_norm(const Eigen::Matrix3d& m) {
  const Eigen::Matrix3d a = m.transpose() * m;
  Eigen::Vector3d v = Eigen::Vector3d::Ones().normalized();
  double lambda = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Eigen::Vector3d w = a * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    lambda = n;
  }
  return std::sqrt(lambda);
}

ProcessMatrix predict_process(const ProcessPrediction& prediction) {
  ProcessMatrix p;
  p.linear = Eigen::Vector3d(prediction.lambda_x, prediction.lambda_y,
                             prediction.lambda_z)
                 .asDiagonal();
  p.offset.setZero();
  return p;
}

ProcessMatrix predict_process(const PulseSequence& seq,
                              const SpectralDensity& env,
                              const SpectralDensity& ctrl,
                              const OverlapOptions& opts) {
  return predict_process(process_prediction(seq, env, ctrl, opts));
}

namespace {

Eigen::Vector3d to_vec(const BlochState& s) { return {s.x, s.y, s.z}; }

}  // namespace

ProcessMatrix fit_process(
    const std::array<std::pair<BlochState, BlochState>, 4>& state_pairs) {
  constexpr double tol = 1e-9;
  const Eigen::Vector3d plus_z(0, 0, 1), minus_z(0, 0, -1), plus_x(1, 0, 0),
      plus_y(0, 1, 0);
  const Eigen::Vector3d* canonical[4] = {&plus_z, &minus_z, &plus_x, &plus_y};
  Eigen::Vector3d out[4];
  bool seen[4] = {false, false, false, false};
  for (const auto& [initial, final_state] : state_pairs) {
    const Eigen::Vector3d in = to_vec(initial);
    bool matched = false;
    for (int i = 0; i < 4; ++i) {
      if ((in - *canonical[i]).norm() < tol) {
        if (seen[i])
          throw validation_error("duplicate initial state in tomography set");
        seen[i] = true;
        out[i] = to_vec(final_state);
        matched = true;
        break;
      }
    }
    if (!matched)
      throw validation_error(
          "tomography initial states must be +z, -z, x, y");
  }

  ProcessMatrix p;
  p.offset = 0.5 * (out[0] + out[1]);
  p.linear.col(2) = 0.5 * (out[0] - out[1]);
  p.linear.col(0) = out[2] - p.offset;
  p.linear.col(1) = out[3] - p.offset;
  return p;
}

std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> sphere_samples(
    const ProcessMatrix& process, int resolution) {
  if (resolution < 2) throw validation_error("resolution must be >= 2");
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> samples;
  const int n_lat = resolution;
  const int n_lon = 2 * (resolution - 1);  // equal polar/azimuthal spacing
  samples.reserve(static_cast<std::size_t>(n_lat) * n_lon);
  for (int i = 0; i < n_lat; ++i) {
    const double theta = std::numbers::pi * i / (n_lat - 1);
    for (int j = 0; j < n_lon; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_lon;
      const Eigen::Vector3d u(std::sin(theta) * std::cos(phi),
                              std::sin(theta) * std::sin(phi),
                              std::cos(theta));
      samples.emplace_back(u, process.apply(u));
    }
  }
  return samples;
}

}  // namespace ddforge
