#ifndef DDFORGE_SEQUENCE_HPP
#define DDFORGE_SEQUENCE_HPP

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace ddforge {

/// One pi pulse of the drive. duration == 0 denotes an ideal delta pulse;
/// rectangular pulses have amplitude area/duration (rad/s). sign encodes
/// the drive phase (pi_x vs pi_{-x}).
struct Pulse {
  double center_time = 0.0;            // s
  double duration = 0.0;               // s, 0 => delta
  int sign = +1;                       // +1 or -1
  double area = std::numbers::pi;      // rad

  double start() const { return center_time - 0.5 * duration; }
  double end() const { return center_time + 0.5 * duration; }
};

/// CPMG-n family tag: pulse rate f_DD and phase cycle n (0 = no alternation).
struct CpmgParams {
  int n = 0;
  double rate_hz = 0.0;
};

/// An immutable timed pi-pulse train over [0, T]. Pulses are validated to be
/// non-overlapping, strictly ordered, and contained in [0, T].
class PulseSequence {
 public:
  PulseSequence(std::vector<Pulse> pulses, double total_duration,
                std::string label,
                std::optional<CpmgParams> cpmg = std::nullopt);

  const std::vector<Pulse>& pulses() const { return pulses_; }
  double total_duration() const { return total_duration_; }
  const std::string& label() const { return label_; }
  const std::optional<CpmgParams>& cpmg() const { return cpmg_; }

  std::size_t num_pulses() const { return pulses_.size(); }
  bool ideal() const;           // all pulses are delta pulses
  double signed_area() const;   // sum of sign*area, rad

 private:
  std::vector<Pulse> pulses_;
  double total_duration_ = 0.0;
  std::string label_;
  std::optional<CpmgParams> cpmg_;
};

/// CPMG-n with num_pulses equally spaced pi pulses at rate pulse_rate_hz:
/// pulse k centered at (k+1/2)/f_DD, T = N/f_DD, sign flipping after every
/// n/2 pulses. n must be even; n = 0 means plain CPMG (all signs +).
PulseSequence build_cpmg(int n, double pulse_rate_hz, int num_pulses,
                         double pulse_duration_s);

/// Pointwise drive amplitude Omega_0(t) in rad/s. Rejects sequences with
/// delta pulses (no pointwise value exists) and t outside [0, T].
double control_amplitude(const PulseSequence& seq, double t);

/// Signed pulse area accumulated over [0, t], rad.
double accumulated_area(const PulseSequence& seq, double t);

/// cos of the accumulated pulse area: the +-1 toggling square wave for
/// ideal pi pulses, chirping smoothly through finite-width pulses.
double toggling_function(const PulseSequence& seq, double t);

}  // namespace ddforge

#endif
