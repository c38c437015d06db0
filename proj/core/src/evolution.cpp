#include "ddforge/evolution.hpp"

#include <cmath>

#include "ddforge/errors.hpp"
#include "ddforge/numerics.hpp"

namespace ddforge {

double norm(const BlochState& s) {
  return std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z);
}

void validate_state(const BlochState& s) {
  if (!(std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z)))
    throw validation_error("Bloch state components must be finite");
  if (norm(s) > 1.0 + 1e-9)
    throw validation_error("Bloch vector norm exceeds 1");
}

OverlapReport overlap_report(const PulseSequence& seq,
                             const SpectralDensity& env,
                             const SpectralDensity& ctrl,
                             const OverlapOptions& opts) {
  OverlapReport r;
  r.env = overlap(env, seq, FilterKind::dephasing, opts);
  r.ctrl = overlap(ctrl, seq, FilterKind::control, opts);
  r.cross = 0.0;  // cross spectra default to zero; see delta_rho overload
  r.duration = seq.total_duration();
  return r;
}

BlochState delta_rho(const BlochState& state, const OverlapReport& o) {
  validate_state(state);
  BlochState d;
  d.x = -(state.x / 2.0) * o.env + (state.z / 2.0) * o.cross;
  d.y = -(state.y / 2.0) * (o.env + o.ctrl);
  d.z = -(state.z / 2.0) * o.ctrl + (state.x / 2.0) * o.cross;
  return d;
}

BlochState delta_rho(const BlochState& state, const PulseSequence& seq,
                     const SpectralDensity& env, const SpectralDensity& ctrl,
                     const OverlapOptions& opts) {
  return delta_rho(state, overlap_report(seq, env, ctrl, opts));
}

double rho_y_variance(const PulseSequence& seq, const SpectralDensity& ctrl,
                      const OverlapOptions& opts) {
  return overlap(ctrl, seq, FilterKind::control, opts);
}

double fidelity(const BlochState& state, const OverlapReport& o) {
  validate_state(state);
  return 1.0 - (state.x * state.x + state.y * state.y) / 4.0 * o.env -
         (state.y * state.y + state.z * state.z) / 4.0 * o.ctrl;
}

double fidelity(const BlochState& state, const PulseSequence& seq,
                const SpectralDensity& env, const SpectralDensity& ctrl,
                const OverlapOptions& opts) {
  return fidelity(state, overlap_report(seq, env, ctrl, opts));
}

ProcessPrediction process_prediction(const OverlapReport& o) {
  ProcessPrediction p;
  p.lambda_x = 1.0 - o.env / 2.0;
  p.lambda_y = 1.0 - (o.env + o.ctrl) / 2.0;
  p.lambda_z = 1.0 - o.ctrl / 2.0;
  p.fidelity_worst = 1.0 - (o.env + o.ctrl) / 4.0;
  p.decay_rate_worst =
      o.duration > 0.0 ? (1.0 - p.fidelity_worst) / o.duration : 0.0;
  const double max_decay =
      std::max({1.0 - p.lambda_x, 1.0 - p.lambda_y, 1.0 - p.lambda_z});
  p.within_first_order = max_decay <= 0.2;
  return p;
}

ProcessPrediction process_prediction(const PulseSequence& seq,
                                     const SpectralDensity& env,
                                     const SpectralDensity& ctrl,
                                     const OverlapOptions& opts) {
  return process_prediction(overlap_report(seq, env, ctrl, opts));
}

FidelityMap fidelity_map(const std::vector<int>& n_values,
                         const std::vector<double>& rate_values,
                         double total_time, const SpectralDensity& env,
                         const SpectralDensity& ctrl, double pulse_duration,
                         const FidelityMapOptions& opts) {
  if (n_values.empty() || rate_values.empty())
    throw validation_error("fidelity map grid is empty");
  if (!(total_time > 0.0))
    throw validation_error("total_time must be positive");
  for (int n : n_values)
    if (n < 0 || (n != 0 && n % 2 != 0))
      throw validation_error("phase cycle values must be even (or 0)");

  FidelityMap map;
  map.n_values = n_values;
  map.rate_values = rate_values;
  const std::size_t cols = rate_values.size();
  map.log10_decay_rate.assign(n_values.size() * cols, opts.log_floor);
  map.flagged.assign(n_values.size() * cols, 0);

  parallel_for(
      static_cast<long>(map.log10_decay_rate.size()), opts.threads,
      [&](long idx) {
        const int n = n_values[idx / cols];
        const double rate = rate_values[idx % cols];
        long pulses = std::lround(rate * total_time);
        if (n >= 2)
          pulses = std::max<long>(n, (pulses / n) * n);
        else
          pulses = std::max<long>(1, pulses);
        const auto seq =
            build_cpmg(n, rate, static_cast<int>(pulses), pulse_duration);
        const auto report = overlap_report(seq, env, ctrl, opts.overlap);
        double infidelity = (report.env + report.ctrl) / 4.0;
        if (infidelity > opts.validity_bound) {
          infidelity = opts.validity_bound;
          map.flagged[idx] = 1;
        }
        const double decay_rate = infidelity / seq.total_duration();
        map.log10_decay_rate[idx] =
            decay_rate > 0.0 ? std::max(opts.log_floor, std::log10(decay_rate))
                             : opts.log_floor;
      });
  return map;
}

}  // namespace ddforge
