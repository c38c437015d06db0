#include "ddforge/montecarlo.hpp"

#include <cmath>
#include <vector>

#include "ddforge/errors.hpp"
#include "ddforge/numerics.hpp"

namespace ddforge {

namespace {

// Right-handed rotation of v about unit axis k by angle theta (Rodrigues).
BlochState rotate(const BlochState& v, double kx, double ky, double kz,
                  double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double dot = kx * v.x + ky * v.y + kz * v.z;
  const double cx = ky * v.z - kz * v.y;
  const double cy = kz * v.x - kx * v.z;
  const double cz = kx * v.y - ky * v.x;
  BlochState out;
  out.x = v.x * c + cx * s + kx * dot * (1.0 - c);
  out.y = v.y * c + cy * s + ky * dot * (1.0 - c);
  out.z = v.z * c + cz * s + kz * dot * (1.0 - c);
  return out;
}

double min_pulse_duration(const PulseSequence& seq) {
  double d = std::numeric_limits<double>::infinity();
  for (const Pulse& p : seq.pulses()) d = std::min(d, p.duration);
  return d;
}

// Synthesis resolution: fine enough for the sequence and for the narrowest
// Lorentzian in either spectrum (8 bins per half-width).
double auto_synth_duration(const PulseSequence& seq, const SpectralDensity& env,
                           const SpectralDensity& ctrl) {
  double dur = seq.total_duration();
  for (const SpectralDensity* spec : {&env, &ctrl}) {
    for (const auto& comp : spec->components) {
      if (const auto* lo = std::get_if<Lorentzian>(&comp)) {
        if (lo->variance > 0.0)
          dur = std::max(dur, 16.0 * std::numbers::pi * lo->correlation_time);
      }
    }
  }
  return dur;
}

}  // namespace

BlochState evolve_realization(const PulseSequence& seq,
                              std::span<const double> delta_series,
                              std::span<const double> nc_series,
                              const BlochState& initial, double dt) {
  validate_state(initial);
  if (!(dt > 0.0)) throw validation_error("dt must be positive");
  const double t_total = seq.total_duration();
  const auto steps = static_cast<std::size_t>(std::llround(t_total / dt));
  if (std::abs(steps * dt - t_total) > 1e-6 * t_total)
    throw validation_error("dt must divide the sequence duration");
  if (delta_series.size() < steps + 1 || nc_series.size() < steps + 1)
    throw validation_error("noise series too short for the sequence");

  const auto& pulses = seq.pulses();
  for (const Pulse& p : pulses)
    if (p.duration == 0.0)
      throw validation_error("the integrator requires finite-width pulses");

  BlochState v = initial;
  std::size_t cursor = 0;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t_mid = (n + 0.5) * dt;
    while (cursor < pulses.size() && pulses[cursor].end() < t_mid) ++cursor;
    double omega = 0.0;
    if (cursor < pulses.size() && t_mid >= pulses[cursor].start() &&
        t_mid <= pulses[cursor].end())
      omega = pulses[cursor].sign * pulses[cursor].area /
              pulses[cursor].duration;

    const double nc_mid = 0.5 * (nc_series[n] + nc_series[n + 1]);
    const double delta_mid = 0.5 * (delta_series[n] + delta_series[n + 1]);
    const double ux = omega * (1.0 + nc_mid);
    const double uz = delta_mid;
    const double w = std::sqrt(ux * ux + uz * uz);
    if (w == 0.0) continue;
    v = rotate(v, ux / w, 0.0, uz / w, w * dt);
  }
  return v;
}

SimulationResult monte_carlo(const PulseSequence& seq,
                             const SpectralDensity& env,
                             const SpectralDensity& ctrl,
                             const BlochState& initial,
                             const SimulationConfig& cfg) {
  validate_state(initial);
  if (cfg.realizations < 1)
    throw validation_error("realizations must be >= 1");
  if (!(cfg.dt > 0.0)) throw validation_error("dt must be positive");
  if (!(cfg.pulse_duration > 0.0))
    throw validation_error("pulse_duration must be positive");
  if (cfg.dt > cfg.pulse_duration / 20.0)
    throw validation_error("dt must be <= pulse_duration/20");
  const double min_dur = min_pulse_duration(seq);
  if (cfg.dt > min_dur / 20.0)
    throw validation_error("dt must be <= the narrowest pulse /20");
  const double f_sharp =
      std::max(env.max_sharp_frequency(), ctrl.max_sharp_frequency());
  if (f_sharp > 0.0 && cfg.dt > 1.0 / (20.0 * f_sharp))
    throw validation_error("dt must be <= 1/(20 f_max)");

  const double t_total = seq.total_duration();
  const auto steps = static_cast<std::size_t>(std::llround(t_total / cfg.dt));
  if (std::abs(steps * cfg.dt - t_total) > 1e-6 * t_total)
    throw validation_error("dt must divide the sequence duration");

  const double synth =
      cfg.synth_duration > 0.0
          ? std::max(cfg.synth_duration, t_total)
          : auto_synth_duration(seq, env, ctrl);
  const double delta_f = 1.0 / synth;

  std::vector<BlochState> finals(cfg.realizations);
  parallel_for(cfg.realizations, cfg.threads, [&](long i) {
    const auto delta = sample_noise_series(
        env, cfg.dt, steps + 1, delta_f, derive_seed(cfg.seed, 2 * i));
    const auto nc = sample_noise_series(
        ctrl, cfg.dt, steps + 1, delta_f, derive_seed(cfg.seed, 2 * i + 1));
    finals[i] = evolve_realization(seq, delta, nc, initial, cfg.dt);
  });

  SimulationResult result;
  result.realizations_used = cfg.realizations;
  const double r = cfg.realizations;
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (const BlochState& v : finals) {
    sx += v.x;
    sy += v.y;
    sz += v.z;
  }
  result.mean = {sx / r, sy / r, sz / r};
  if (cfg.realizations > 1) {
    double vx = 0.0, vy = 0.0, vz = 0.0;
    for (const BlochState& v : finals) {
      vx += (v.x - result.mean.x) * (v.x - result.mean.x);
      vy += (v.y - result.mean.y) * (v.y - result.mean.y);
      vz += (v.z - result.mean.z) * (v.z - result.mean.z);
    }
    const double denom = r * (r - 1.0);
    result.std_err = {std::sqrt(vx / denom), std::sqrt(vy / denom),
                      std::sqrt(vz / denom)};
  }
  return result;
}

ComparisonReport compare_to_perturbative(const PulseSequence& seq,
                                         const SpectralDensity& env,
                                         const SpectralDensity& ctrl,
                                         const BlochState& initial,
                                         const SimulationConfig& cfg,
                                         const OverlapOptions& opts) {
  const auto report = overlap_report(seq, env, ctrl, opts);
  const BlochState pred = delta_rho(initial, report);
  const auto sim = monte_carlo(seq, env, ctrl, initial, cfg);

  // unwind the ideal pulse rotation (about x by the total signed area) to
  // get the interaction-picture increment
  const double alpha = seq.signed_area();
  const BlochState unwound = rotate(sim.mean, 1.0, 0.0, 0.0, -alpha);

  ComparisonReport out;
  out.predicted_delta = pred;
  out.simulated_delta = {unwound.x - initial.x, unwound.y - initial.y,
                         unwound.z - initial.z};
  out.std_err = sim.std_err;
  out.realizations_used = sim.realizations_used;
  out.predicted_infidelity = 1.0 - fidelity(initial, report);
  out.within_validity = out.predicted_infidelity <= 0.5;

  const double pred_arr[3] = {pred.x, pred.y, pred.z};
  const double sim_arr[3] = {out.simulated_delta.x, out.simulated_delta.y,
                             out.simulated_delta.z};
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    const double diff = std::abs(sim_arr[i] - pred_arr[i]);
    out.z_scores[i] = out.std_err[i] > 0.0
                          ? diff / out.std_err[i]
                          : (diff == 0.0 ? 0.0
                                         : std::numeric_limits<double>::infinity());
    out.rel_errors[i] =
        pred_arr[i] != 0.0 ? diff / std::abs(pred_arr[i])
                           : (diff == 0.0 ? 0.0
                                          : std::numeric_limits<double>::infinity());
    if (diff > std::max(0.1 * std::abs(pred_arr[i]), 3.0 * out.std_err[i]))
      ok = false;
  }
  out.agrees = ok;
  return out;
}

}  // namespace ddforge
