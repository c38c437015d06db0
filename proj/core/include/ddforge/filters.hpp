#ifndef DDFORGE_FILTERS_HPP
#define DDFORGE_FILTERS_HPP

#include <string>
#include <vector>

#include "ddforge/sequence.hpp"

namespace ddforge {

enum class FilterKind { dephasing, control };

std::string to_string(FilterKind kind);
FilterKind filter_kind_from_string(const std::string& s);

/// Filter function samples on a frequency grid. Units: s^2 for dephasing,
/// rad^2 for control.
struct FilterSamples {
  FilterKind kind = FilterKind::dephasing;
  std::vector<double> frequencies;  // Hz, strictly increasing
  std::vector<double> values;       // >= 0
  std::string sequence_label;
};

/// |∫_0^T e^{-2πift} cos(∫_0^t Omega_0)|^2 in s^2. Closed form over the
/// constant-cosine segments; finite-width pulses contribute their cosine
/// chirp by adaptive quadrature. f = 0 is an analytic limit.
double filter_dephasing(const PulseSequence& seq, double f_hz);

/// |∫_0^T e^{-2πift} Omega_0(t)|^2 in rad^2. Each pulse contributes
/// sign*area*e^{-2πifc}*sinc(πf*duration) (delta pulses: sinc factor 1).
double filter_control(const PulseSequence& seq, double f_hz);

double filter_value(const PulseSequence& seq, FilterKind kind, double f_hz);

/// Uniform-grid evaluation over [fmin, fmax] with `points` samples.
FilterSamples filter_grid(const PulseSequence& seq, FilterKind kind,
                          double fmin_hz, double fmax_hz, int points);

/// Peak frequencies of the filter for CPMG-family sequences:
/// dephasing (2m-1)*f_DD/2; control (2m-1)*f_DD/n for n >= 2;
/// control n = 0: DC plus harmonics of f_DD. Throws for non-CPMG input.
std::vector<double> predicted_peaks(const PulseSequence& seq, FilterKind kind,
                                    int max_order);

}  // namespace ddforge

#endif
