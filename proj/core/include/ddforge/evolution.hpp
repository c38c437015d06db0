#ifndef DDFORGE_EVOLUTION_HPP
#define DDFORGE_EVOLUTION_HPP

#include <cstdint>
#include <vector>

#include "ddforge/spectra.hpp"

namespace ddforge {

/// Bloch-vector coefficients of the reduced density matrix
/// rho = (rho_x sx + rho_y sy + rho_z sz + I)/2; norm <= 1.
struct BlochState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double norm(const BlochState& s);
void validate_state(const BlochState& s);

/// The spectral overlap integrals driving the short-time evolution.
struct OverlapReport {
  double env = 0.0;    // ∫ G_delta F_delta df
  double ctrl = 0.0;   // ∫ G_c F_c df
  double cross = 0.0;  // cross-correlation pathway, 0 unless supplied
  double duration = 0.0;  // sequence duration T, s
};

OverlapReport overlap_report(const PulseSequence& seq,
                             const SpectralDensity& env,
                             const SpectralDensity& ctrl,
                             const OverlapOptions& opts = {});

/// Second-order Bloch increment over one sequence:
///   d rho_x = -(rho_x/2) O_env (+ cross terms when supplied)
///   d rho_y = -(rho_y/2) (O_env + O_ctrl)
///   d rho_z = -(rho_z/2) O_ctrl
BlochState delta_rho(const BlochState& state, const OverlapReport& overlaps);
BlochState delta_rho(const BlochState& state, const PulseSequence& seq,
                     const SpectralDensity& env, const SpectralDensity& ctrl,
                     const OverlapOptions& opts = {});

/// <rho_y^2(T)> = ∫ G_c F_c df for a pi-pulse sequence started in a pole
/// state; the matching pole increment is d rho_z = <rho_y^2>/2.
double rho_y_variance(const PulseSequence& seq, const SpectralDensity& ctrl,
                      const OverlapOptions& opts = {});

/// Short-time fidelity Tr{rho(T) rho(0)} for a pure initial state:
/// 1 - (rho_x^2+rho_y^2)/4 * O_env - (rho_y^2+rho_z^2)/4 * O_ctrl.
double fidelity(const BlochState& state, const OverlapReport& overlaps);
double fidelity(const BlochState& state, const PulseSequence& seq,
                const SpectralDensity& env, const SpectralDensity& ctrl,
                const OverlapOptions& opts = {});

/// Per-axis contraction factors and the worst-case (rho_y = 1) figures.
struct ProcessPrediction {
  double lambda_x = 1.0;
  double lambda_y = 1.0;
  double lambda_z = 1.0;
  double fidelity_worst = 1.0;
  double decay_rate_worst = 0.0;  // (1 - F_worst)/T, 1/s
  bool within_first_order = true; // max axis decay <= 0.2
};

ProcessPrediction process_prediction(const OverlapReport& overlaps);
ProcessPrediction process_prediction(const PulseSequence& seq,
                                     const SpectralDensity& env,
                                     const SpectralDensity& ctrl,
                                     const OverlapOptions& opts = {});

/// log10 of the worst-case fidelity decay rate over a (phase cycle n,
/// pulse rate) grid at fixed total duration.
struct FidelityMap {
  std::vector<int> n_values;
  std::vector<double> rate_values;            // Hz
  std::vector<double> log10_decay_rate;       // row-major |n| x |rates|
  std::vector<std::uint8_t> flagged;          // outside first-order validity

  double at(std::size_t i, std::size_t j) const {
    return log10_decay_rate[i * rate_values.size() + j];
  }
  bool flagged_at(std::size_t i, std::size_t j) const {
    return flagged[i * rate_values.size() + j] != 0;
  }
};

struct FidelityMapOptions {
  double log_floor = -6.0;          // cells with no decay
  double validity_bound = 0.5;      // clamp+flag when 1-F exceeds this
  int threads = 0;                  // 0 = hardware
  OverlapOptions overlap;
};

/// For each (n, f_DD): num_pulses = round(f_DD*total_time) floored to a
/// multiple of n (minimum n; n = 0 keeps the rounded count, minimum 1).
FidelityMap fidelity_map(const std::vector<int>& n_values,
                         const std::vector<double>& rate_values,
                         double total_time, const SpectralDensity& env,
                         const SpectralDensity& ctrl, double pulse_duration,
                         const FidelityMapOptions& opts = {});

}  // namespace ddforge

#endif
