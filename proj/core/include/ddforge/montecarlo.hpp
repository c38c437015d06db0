#ifndef DDFORGE_MONTECARLO_HPP
#define DDFORGE_MONTECARLO_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "ddforge/evolution.hpp"
#include "ddforge/spectra.hpp"

namespace ddforge {

/// Stochastic-integrator settings. dt must divide the sequence duration and
/// satisfy dt <= pulse_duration/20 and dt <= 1/(20*f_max) where f_max is the
/// highest spectral line or white-band edge. The integrator cannot handle
/// delta pulses, so pulse_duration must be positive.
struct SimulationConfig {
  double dt = 0.0;               // s
  int realizations = 1;
  std::uint64_t seed = 0;
  double pulse_duration = 0.0;   // s, > 0
  double synth_duration = 0.0;   // s, 0 = auto (resolves Lorentzian widths)
  int threads = 0;               // 0 = hardware
};

struct SimulationResult {
  BlochState mean;
  std::array<double, 3> std_err{0.0, 0.0, 0.0};
  int realizations_used = 0;
};

/// One noise realization of the two-level dynamics
///   H = (delta(t)/2) sz + (Omega_0(t)(1 + n_c(t))/2) sx
/// integrated as exact axis-angle Bloch rotations per step, with the drive
/// evaluated at the step midpoint and the noise series midpoint-interpolated.
/// Series hold values at t = n*dt and must cover [0, T].
BlochState evolve_realization(const PulseSequence& seq,
                              std::span<const double> delta_series,
                              std::span<const double> nc_series,
                              const BlochState& initial, double dt);

/// Ensemble average over independent noise realizations with per-realization
/// seeds derived from cfg.seed by counter; the reduction order is fixed, so
/// results are identical for any thread count.
SimulationResult monte_carlo(const PulseSequence& seq,
                             const SpectralDensity& env,
                             const SpectralDensity& ctrl,
                             const BlochState& initial,
                             const SimulationConfig& cfg);

/// Side-by-side closed-form vs Monte Carlo report. Deltas are interaction-
/// picture increments (the ideal pulse rotation is unwound before
/// differencing). Agreement means |sim - pred| <= max(10% |pred|, 3 se)
/// per axis; outside the first-order validity bound no verdict is asserted.
struct ComparisonReport {
  BlochState predicted_delta;
  BlochState simulated_delta;
  std::array<double, 3> std_err{0.0, 0.0, 0.0};
  std::array<double, 3> z_scores{0.0, 0.0, 0.0};
  std::array<double, 3> rel_errors{0.0, 0.0, 0.0};
  double predicted_infidelity = 0.0;
  bool within_validity = true;
  bool agrees = true;        // meaningful only when within_validity
  int realizations_used = 0;
};

ComparisonReport compare_to_perturbative(const PulseSequence& seq,
                                         const SpectralDensity& env,
                                         const SpectralDensity& ctrl,
                                         const BlochState& initial,
                                         const SimulationConfig& cfg,
                                         const OverlapOptions& opts = {});

}  // namespace ddforge

#endif
