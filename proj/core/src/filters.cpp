#include "ddforge/filters.hpp"

#include <cmath>
#include <complex>

#include "ddforge/errors.hpp"
#include "ddforge/numerics.hpp"

namespace ddforge {

std::string to_string(FilterKind kind) {
  return kind == FilterKind::dephasing ? "dephasing" : "control";
}

FilterKind filter_kind_from_string(const std::string& s) {
  if (s == "dephasing") return FilterKind::dephasing;
  if (s == "control") return FilterKind::control;
  throw validation_error("unknown filter kind: " + s);
}

namespace {

// ∫ e^{-2πift} cos(phase0 + slope (t - start)) dt over one rectangular
// pulse, by Gauss-Kronrod panels sized so each spans about one radian of
// combined oscillation. Deterministic cost, machine-level accuracy.
std::complex<double> chirp_segment(double start, double duration, double phase0,
                                   double slope, double f_hz) {
  const double two_pi_f = 2.0 * std::numbers::pi * f_hz;
  const double total_phase =
      (std::abs(two_pi_f) + std::abs(slope)) * duration;
  const int panels = std::max(1, static_cast<int>(std::ceil(total_phase)));
  auto re = [&](double t) {
    return std::cos(phase0 + slope * (t - start)) * std::cos(two_pi_f * t);
  };
  auto im = [&](double t) {
    return -std::cos(phase0 + slope * (t - start)) * std::sin(two_pi_f * t);
  };
  double vr = 0.0, vi = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = start + duration * k / panels;
    const double b = start + duration * (k + 1) / panels;
    double value, err;
    detail::gk15(re, a, b, value, err);
    vr += value;
    detail::gk15(im, a, b, value, err);
    vi += value;
  }
  return {vr, vi};
}

}  // namespace

double filter_dephasing(const PulseSequence& seq, double f_hz) {
  std::complex<double> acc = 0.0;
  double phase = 0.0;  // accumulated signed pulse area
  double t_prev = 0.0;
  for (const Pulse& p : seq.pulses()) {
    const double start = p.start();
    if (start > t_prev)
      acc += std::cos(phase) * segment_fourier(t_prev, start, f_hz);
    if (p.duration == 0.0) {
      phase += p.sign * p.area;
      t_prev = start;
      continue;
    }
    const double slope = p.sign * p.area / p.duration;
    acc += chirp_segment(start, p.duration, phase, slope, f_hz);
    phase += p.sign * p.area;
    t_prev = p.end();
  }
  if (seq.total_duration() > t_prev)
    acc += std::cos(phase) * segment_fourier(t_prev, seq.total_duration(), f_hz);
  return std::norm(acc);
}

double filter_control(const PulseSequence& seq, double f_hz) {
  std::complex<double> acc = 0.0;
  for (const Pulse& p : seq.pulses()) {
    const double ph = -2.0 * std::numbers::pi * f_hz * p.center_time;
    acc += p.sign * p.area * sinc(std::numbers::pi * f_hz * p.duration) *
           std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return std::norm(acc);
}

double filter_value(const PulseSequence& seq, FilterKind kind, double f_hz) {
  return kind == FilterKind::dephasing ? filter_dephasing(seq, f_hz)
                                       : filter_control(seq, f_hz);
}

FilterSamples filter_grid(const PulseSequence& seq, FilterKind kind,
                          double fmin_hz, double fmax_hz, int points) {
  if (!(fmin_hz < fmax_hz)) throw validation_error("fmin must be < fmax");
  if (points < 2) throw validation_error("grid needs at least 2 points");
  FilterSamples out;
  out.kind = kind;
  out.sequence_label = seq.label();
  out.frequencies.resize(points);
  out.values.resize(points);
  const double step = (fmax_hz - fmin_hz) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double f = fmin_hz + i * step;
    out.frequencies[i] = f;
    out.values[i] = filter_value(seq, kind, f);
  }
  return out;
}

std::vector<double> predicted_peaks(const PulseSequence& seq, FilterKind kind,
                                    int max_order) {
  if (!seq.cpmg())
    throw validation_error("predicted_peaks requires a CPMG-family sequence");
  if (max_order < 1) throw validation_error("max_order must be >= 1");
  const auto [n, rate] = *seq.cpmg();
  std::vector<double> peaks;
  peaks.reserve(max_order);
  if (kind == FilterKind::dephasing) {
    for (int m = 1; m <= max_order; ++m) peaks.push_back((2 * m - 1) * rate / 2.0);
  } else if (n == 0) {
    for (int m = 0; m < max_order; ++m) peaks.push_back(m * rate);
  } else {
    for (int m = 1; m <= max_order; ++m) peaks.push_back((2 * m - 1) * rate / n);
  }
  return peaks;
}

}  // namespace ddforge
