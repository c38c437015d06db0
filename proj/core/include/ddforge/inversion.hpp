#ifndef DDFORGE_INVERSION_HPP
#define DDFORGE_INVERSION_HPP

#include <string>
#include <vector>

#include "ddforge/filters.hpp"
#include "ddforge/sequence.hpp"

namespace ddforge {

/// One measured overlap value (e.g. <rho_y^2>) together with the sequence
/// and filter kind that produced it.
struct MeasurementRecord {
  PulseSequence sequence;
  FilterKind kind = FilterKind::control;
  double value = 0.0;        // >= 0
  double uncertainty = 0.0;  // >= 0; 0 = unweighted
  std::string label;
};

struct SpectrumEstimate {
  std::vector<double> frequencies;   // Hz, one-sided grid
  std::vector<double> densities;     // >= 0
  double residual_norm = 0.0;        // ||M g - y||
  bool tolerance_reached = false;    // relative-objective stop hit
  int iterations = 0;
  std::vector<int> undetermined;     // grid indices invisible to every filter
};

struct SinglePeakOptions {
  double f_band = 0.0;               // Hz; 0 = auto from the sequence
  double dominance_threshold = 10.0; // first/second peak band-integral ratio
  int grid_points = 0;               // 0 = auto (resolves 1/T features)
};

/// G(peak_freq) ~= value / ∫F df for a filter dominated by a single peak
/// near peak_freq; the band integral spans the full (two-sided) band.
/// Throws when the dominance ratio check fails.
double invert_single_peak(const MeasurementRecord& record, double peak_freq_hz,
                          const SinglePeakOptions& opts = {});

struct InversionOptions {
  int max_iterations = 10000;
  double tolerance = 1e-10;  // relative objective change
};

/// Discretizes ∫G F df as M g with trapezoid weights on the one-sided grid
/// (doubled for f > 0) and solves min ||M g - y||^2 s.t. g >= 0 by projected
/// gradient descent with step 1/||M^T M|| (power-iteration bound).
/// Uncertainties, when all positive, enter as inverse row weights.
SpectrumEstimate invert_linear(const std::vector<MeasurementRecord>& records,
                               const std::vector<double>& freq_grid,
                               const InversionOptions& opts = {});

}  // namespace ddforge

#endif
