#include "ddforge/sequence.hpp"

#include <algorithm>
#include <cmath>

#include "ddforge/errors.hpp"

namespace ddforge {

PulseSequence::PulseSequence(std::vector<Pulse> pulses, double total_duration,
                             std::string label, std::optional<CpmgParams> cpmg)
    : pulses_(std::move(pulses)),
      total_duration_(total_duration),
      label_(std::move(label)),
      cpmg_(cpmg) {
  if (!(total_duration_ > 0.0))
    throw validation_error("sequence duration must be positive");
  double prev_end = 0.0;
  double prev_center = -1.0;
  for (const Pulse& p : pulses_) {
    if (p.duration < 0.0) throw validation_error("pulse duration must be >= 0");
    if (!(p.area > 0.0)) throw validation_error("pulse area must be positive");
    if (p.sign != 1 && p.sign != -1)
      throw validation_error("pulse sign must be +1 or -1");
    if (p.center_time <= prev_center)
      throw validation_error("pulse centers must be strictly increasing");
    if (p.start() < prev_end - 1e-15)
      throw validation_error("pulses overlap");
    if (p.start() < 0.0 || p.end() > total_duration_ + 1e-15)
      throw validation_error("pulse outside [0, T]");
    prev_end = p.end();
    prev_center = p.center_time;
  }
}

bool PulseSequence::ideal() const {
  return std::all_of(pulses_.begin(), pulses_.end(),
                     [](const Pulse& p) { return p.duration == 0.0; });
}

double PulseSequence::signed_area() const {
  double a = 0.0;
  for (const Pulse& p : pulses_) a += p.sign * p.area;
  return a;
}

PulseSequence build_cpmg(int n, double pulse_rate_hz, int num_pulses,
                         double pulse_duration_s) {
  if (num_pulses < 1) throw validation_error("num_pulses must be >= 1");
  if (!(pulse_rate_hz > 0.0)) throw validation_error("pulse rate must be positive");
  if (n < 0 || (n != 0 && n % 2 != 0))
    throw validation_error("CPMG phase cycle n must be even (or 0 for plain CPMG)");
  if (pulse_duration_s < 0.0)
    throw validation_error("pulse duration must be >= 0");
  const double period = 1.0 / pulse_rate_hz;
  if (pulse_duration_s >= period)
    throw validation_error("pulses overlap: duration too long for the pulse rate");

  std::vector<Pulse> pulses;
  pulses.reserve(num_pulses);
  for (int k = 0; k < num_pulses; ++k) {
    Pulse p;
    p.center_time = (k + 0.5) * period;
    p.duration = pulse_duration_s;
    p.area = std::numbers::pi;
    p.sign = (n == 0) ? +1 : (((k / (n / 2)) % 2 == 0) ? +1 : -1);
    pulses.push_back(p);
  }
  const double total = num_pulses * period;
  std::string label = "cpmg" + std::to_string(n) + "_r" +
                      std::to_string(pulse_rate_hz) + "_N" +
                      std::to_string(num_pulses);
  return PulseSequence(std::move(pulses), total, std::move(label),
                       CpmgParams{n, pulse_rate_hz});
}

double control_amplitude(const PulseSequence& seq, double t) {
  if (t < 0.0 || t > seq.total_duration())
    throw validation_error("t outside [0, T]");
  for (const Pulse& p : seq.pulses()) {
    if (p.duration == 0.0)
      throw validation_error(
          "delta-pulse sequence has no pointwise control amplitude");
    if (t >= p.start() && t <= p.end()) return p.sign * p.area / p.duration;
    if (p.start() > t) break;
  }
  return 0.0;
}

double accumulated_area(const PulseSequence& seq, double t) {
  if (t < 0.0 || t > seq.total_duration() + 1e-15)
    throw validation_error("t outside [0, T]");
  double area = 0.0;
  for (const Pulse& p : seq.pulses()) {
    if (p.duration == 0.0) {
      if (p.center_time < t) area += p.sign * p.area;
    } else if (t >= p.end()) {
      area += p.sign * p.area;
    } else if (t > p.start()) {
      area += p.sign * p.area * (t - p.start()) / p.duration;
      break;
    } else {
      break;
    }
  }
  return area;
}

double toggling_function(const PulseSequence& seq, double t) {
  return std::cos(accumulated_area(seq, t));
}

}  // namespace ddforge
