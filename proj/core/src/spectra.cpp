#include "ddforge/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ddforge/errors.hpp"
#include "ddforge/numerics.hpp"

namespace ddforge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double lorentzian_halfwidth_hz(const Lorentzian& lo) {
  return 1.0 / (kTwoPi * lo.correlation_time);
}

// Unit-variance Lorentzian shape 2*tau/(1+(2*pi*f*tau)^2).
double lorentzian_shape(double f, double tau) {
  const double x = kTwoPi * f * tau;
  return 2.0 * tau / (1.0 + x * x);
}

void validate_component(const SpectralComponent& comp) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, Lorentzian>) {
          if (c.variance < 0.0) throw validation_error("Lorentzian variance < 0");
          if (!(c.correlation_time > 0.0))
            throw validation_error("Lorentzian correlation time must be > 0");
        } else if constexpr (std::is_same_v<T, SpectralLine>) {
          if (!(c.frequency > 0.0))
            throw validation_error("line frequency must be > 0");
          if (c.power < 0.0) throw validation_error("line power < 0");
        } else if constexpr (std::is_same_v<T, WhiteBand>) {
          if (c.level < 0.0) throw validation_error("white level < 0");
          if (!(c.fmax > 0.0)) throw validation_error("white band edge must be > 0");
        } else {
          if (c.power < 0.0) throw validation_error("DC power < 0");
        }
      },
      comp);
}

}  // namespace

std::string to_string(SpectrumKind kind) {
  return kind == SpectrumKind::environment ? "environment" : "control";
}

SpectrumKind spectrum_kind_from_string(const std::string& s) {
  if (s == "environment") return SpectrumKind::environment;
  if (s == "control") return SpectrumKind::control;
  throw validation_error("unknown spectrum kind: " + s);
}

double SpectralDensity::psd(double f_hz) const {
  double g = 0.0;
  for (const auto& comp : components) {
    if (const auto* lo = std::get_if<Lorentzian>(&comp)) {
      g += lo->variance * lorentzian_shape(f_hz, lo->correlation_time);
    } else if (const auto* w = std::get_if<WhiteBand>(&comp)) {
      if (std::abs(f_hz) <= w->fmax) g += w->level;
    }
  }
  return g;
}

double SpectralDensity::total_variance() const {
  double v = 0.0;
  for (const auto& comp : components) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Lorentzian>)
            v += c.variance;
          else if constexpr (std::is_same_v<T, SpectralLine>)
            v += c.power;
          else if constexpr (std::is_same_v<T, WhiteBand>)
            v += 2.0 * c.level * c.fmax;
          else
            v += c.power;
        },
        comp);
  }
  return v;
}

double SpectralDensity::max_sharp_frequency() const {
  double f = 0.0;
  for (const auto& comp : components) {
    if (const auto* l = std::get_if<SpectralLine>(&comp))
      f = std::max(f, l->frequency);
    else if (const auto* w = std::get_if<WhiteBand>(&comp))
      f = std::max(f, w->fmax);
  }
  return f;
}

double psd(const SpectralDensity& spec, double f_hz) { return spec.psd(f_hz); }

namespace {

// Forced initial subdivision for the continuous x filter quadrature:
// predicted filter peaks, a geometric ladder resolving the component knee,
// and a uniform grid no coarser than two filter oscillation periods.
std::vector<double> quad_breakpoints(const PulseSequence& seq, FilterKind kind,
                                     double upper, double knee,
                                     const OverlapOptions& opts) {
  std::vector<double> pts;
  if (seq.cpmg()) {
    for (double p : predicted_peaks(seq, kind, opts.max_peak_order))
      if (p < upper) pts.push_back(p);
  }
  if (knee > 0.0) {
    for (double x = knee; x < upper; x *= 2.0) pts.push_back(x);
  }
  const double t_total = seq.total_duration();
  const double spacing = std::max(2.0 / t_total, upper / 8192.0);
  for (double x = spacing; x < upper; x += spacing) pts.push_back(x);
  return pts;
}

double integrate_against_filter(const PulseSequence& seq, FilterKind kind,
                                const std::function<double(double)>& shape,
                                double upper, double knee,
                                const OverlapOptions& opts) {
  auto integrand = [&](double f) {
    return shape(f) * filter_value(seq, kind, f);
  };
  const auto pts = quad_breakpoints(seq, kind, upper, knee, opts);
  // two-sided integral of an even integrand
  return 2.0 * adaptive_quadrature(integrand, 0.0, upper, opts.abs_tol,
                                   opts.rel_tol, pts);
}

}  // namespace

double overlap(const SpectralDensity& spec, const PulseSequence& seq,
               FilterKind kind, const OverlapOptions& opts) {
  const bool kind_ok =
      (spec.kind == SpectrumKind::environment && kind == FilterKind::dephasing) ||
      (spec.kind == SpectrumKind::control && kind == FilterKind::control);
  if (!kind_ok)
    throw validation_error("spectrum kind does not match filter kind");

  const double t_total = seq.total_duration();
  double total = 0.0;
  for (const auto& comp : spec.components) {
    validate_component(comp);
    if (const auto* l = std::get_if<SpectralLine>(&comp)) {
      total += l->power * filter_value(seq, kind, l->frequency);
    } else if (const auto* d = std::get_if<DcComponent>(&comp)) {
      total += d->power * filter_value(seq, kind, 0.0);
    } else if (const auto* w = std::get_if<WhiteBand>(&comp)) {
      const double upper =
          opts.f_max_override > 0.0 ? std::min(opts.f_max_override, w->fmax)
                                    : w->fmax;
      total += w->level * integrate_against_filter(
                              seq, kind, [](double) { return 1.0; }, upper,
                              0.0, opts);
    } else if (const auto* lo = std::get_if<Lorentzian>(&comp)) {
      const double width = lorentzian_halfwidth_hz(*lo);
      // control filters do not decay with f, so they need a wider tail
      const double factor = (kind == FilterKind::control) ? 256.0 : 128.0;
      double upper = std::max(factor * width, 8.0 / t_total);
      if (opts.f_max_override > 0.0) upper = opts.f_max_override;
      const double tau = lo->correlation_time;
      total += lo->variance *
               integrate_against_filter(
                   seq, kind,
                   [tau](double f) { return lorentzian_shape(f, tau); }, upper,
                   width, opts);
    }
  }
  return total;
}

SpectralDensity control_comb_from_magnetic(const std::vector<MagneticLine>& lines,
                                           double sensitivity_hz_per_gauss,
                                           double detuning_hz) {
  if (detuning_hz == 0.0) throw validation_error("detuning must be nonzero");
  SpectralDensity spec;
  spec.kind = SpectrumKind::control;
  for (const MagneticLine& l : lines) {
    if (l.b_rms_gauss < 0.0) throw validation_error("B_rms must be >= 0");
    const double amp = sensitivity_hz_per_gauss * l.b_rms_gauss /
                       std::abs(detuning_hz);
    spec.components.push_back(SpectralLine{l.frequency, amp * amp});
  }
  return spec;
}

namespace {

// Highest frequency carrying continuous spectral mass worth synthesizing.
double continuous_band_limit(const SpectralDensity& spec) {
  double band = 0.0;
  for (const auto& comp : spec.components) {
    if (const auto* lo = std::get_if<Lorentzian>(&comp)) {
      if (lo->variance > 0.0)
        band = std::max(band, 64.0 * lorentzian_halfwidth_hz(*lo));
    } else if (const auto* w = std::get_if<WhiteBand>(&comp)) {
      if (w->level > 0.0) band = std::max(band, w->fmax);
    }
  }
  return band;
}

struct Oscillator {
  double freq = 0.0;
  double amp = 0.0;
  double phase = 0.0;
};

}  // namespace

std::vector<double> sample_noise_series(const SpectralDensity& spec, double dt,
                                        std::size_t n_samples, double delta_f,
                                        std::uint64_t seed) {
  if (!(dt > 0.0)) throw validation_error("dt must be positive");
  if (!(delta_f > 0.0)) throw validation_error("delta_f must be positive");
  for (const auto& comp : spec.components) validate_component(comp);

  const double f_nyq = 0.5 / dt;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uphase(0.0, kTwoPi);

  std::vector<Oscillator> osc;
  // continuous bins first, ascending frequency; bin j carries the full
  // two-sided variance 2 G(f_j) delta_f
  const double band = std::min(continuous_band_limit(spec), f_nyq);
  const auto bins = static_cast<std::size_t>(std::floor(band / delta_f));
  for (std::size_t j = 1; j <= bins; ++j) {
    const double f = static_cast<double>(j) * delta_f;
    const double g = spec.psd(f);
    const double phase = uphase(rng);
    if (g > 0.0) osc.push_back({f, 2.0 * std::sqrt(g * delta_f), phase});
  }
  // then discrete components in declaration order; truncated at Nyquist
  for (const auto& comp : spec.components) {
    if (const auto* l = std::get_if<SpectralLine>(&comp)) {
      const double phase = uphase(rng);
      if (l->power > 0.0 && l->frequency <= f_nyq)
        osc.push_back({l->frequency, std::sqrt(2.0 * l->power), phase});
    } else if (const auto* d = std::get_if<DcComponent>(&comp)) {
      const double phase = uphase(rng);
      if (d->power > 0.0) osc.push_back({0.0, std::sqrt(2.0 * d->power), phase});
    }
  }

  std::vector<double> out(n_samples, 0.0);
  if (osc.empty()) return out;

  const std::size_t m = osc.size();
  std::vector<double> c(m), s(m), cd(m), sd(m);
  for (std::size_t j = 0; j < m; ++j) {
    c[j] = osc[j].amp * std::cos(osc[j].phase);
    s[j] = osc[j].amp * std::sin(osc[j].phase);
    cd[j] = std::cos(kTwoPi * osc[j].freq * dt);
    sd[j] = std::sin(kTwoPi * osc[j].freq * dt);
  }
  for (std::size_t n = 0; n < n_samples; ++n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += c[j];
      const double t = c[j] * cd[j] - s[j] * sd[j];
      s[j] = s[j] * cd[j] + c[j] * sd[j];
      c[j] = t;
    }
    out[n] = acc;
  }
  return out;
}

std::vector<double> sample_noise(const SpectralDensity& spec, double dt,
                                 double duration, std::uint64_t seed) {
  if (!(dt > 0.0)) throw validation_error("dt must be positive");
  if (duration < dt) throw validation_error("duration must be >= dt");
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  return sample_noise_series(spec, dt, steps + 1, 1.0 / duration, seed);
}

}  // namespace ddforge
