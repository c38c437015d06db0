#ifndef DDFORGE_SPECTRA_HPP
#define DDFORGE_SPECTRA_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ddforge/filters.hpp"
#include "ddforge/sequence.hpp"

namespace ddforge {

// All spectra are two-sided: G(f) = G(-f), variances are recovered as
// ∫ G df over the full axis plus line powers. Environment spectra carry
// (rad/s)^2/Hz (detuning), control spectra 1/Hz (relative amplitude noise),
// so overlap integrals with the matching filters are dimensionless.

/// sigma^2 * 2*tau_c / (1 + (2*pi*f*tau_c)^2); integrates to sigma^2.
struct Lorentzian {
  double variance = 0.0;          // sigma^2
  double correlation_time = 0.0;  // tau_c, s
};

/// Discrete line at +-frequency. `power` is the total two-sided variance
/// (split equally between +f and -f).
struct SpectralLine {
  double frequency = 0.0;  // Hz, > 0
  double power = 0.0;
};

/// Flat density `level` on [0, fmax], mirrored to negative frequencies.
struct WhiteBand {
  double level = 0.0;  // density per Hz
  double fmax = 0.0;   // Hz
};

/// Variance concentrated at f = 0 (a line at DC, no +- splitting).
struct DcComponent {
  double power = 0.0;
};

using SpectralComponent =
    std::variant<Lorentzian, SpectralLine, WhiteBand, DcComponent>;

enum class SpectrumKind { environment, control };

std::string to_string(SpectrumKind kind);
SpectrumKind spectrum_kind_from_string(const std::string& s);

struct SpectralDensity {
  SpectrumKind kind = SpectrumKind::environment;
  std::vector<SpectralComponent> components;

  /// Continuous part of the density at f (lines and DC are distributions
  /// and do not contribute pointwise).
  double psd(double f_hz) const;

  /// Sum of the variances declared by all components.
  double total_variance() const;

  /// Highest line frequency or white-band edge (0 if neither present);
  /// bounds the time step of the stochastic integrator.
  double max_sharp_frequency() const;

  bool empty() const { return components.empty(); }
};

/// Free-function evaluation of the continuous density.
double psd(const SpectralDensity& spec, double f_hz);

struct OverlapOptions {
  int max_peak_order = 50;    // forced-subdivision peak count
  double abs_tol = 1e-12;
  double rel_tol = 1e-6;
  double f_max_override = 0;  // > 0: integrate continuous parts to this limit
};

/// ∫_{-inf}^{inf} G(f) F(f) df for the matching (spectrum kind, filter kind)
/// pair: line/DC components exactly, continuous components by adaptive
/// quadrature with forced subdivision at the filter's predicted peaks.
double overlap(const SpectralDensity& spec, const PulseSequence& seq,
               FilterKind kind, const OverlapOptions& opts = {});

struct MagneticLine {
  double frequency = 0.0;    // Hz
  double b_rms_gauss = 0.0;  // rms field, G
};

/// Maps magnetic field lines into relative control-noise lines through the
/// two-photon Rabi relation Omega = Omega_1*Omega_2 / (2*Delta(t)): to first
/// order n_c = -dDelta/Delta, so each line gets power
/// (sensitivity*B_rms/|detuning|)^2 at the same frequency.
SpectralDensity control_comb_from_magnetic(const std::vector<MagneticLine>& lines,
                                           double sensitivity_hz_per_gauss,
                                           double detuning_hz);

/// Random-phase sum-of-cosines realization of the spectrum, sampled at
/// t = n*dt for n = 0..round(duration/dt). Continuous parts are discretized
/// with bin spacing 1/duration; each bin carries its full two-sided variance.
/// Deterministic given the seed.
std::vector<double> sample_noise(const SpectralDensity& spec, double dt,
                                 double duration, std::uint64_t seed);

/// Synthesis core with the frequency resolution decoupled from the output
/// length: n_samples values at spacing dt, bins at spacing delta_f. Used by
/// the stochastic integrator to resolve narrow spectra on short sequences.
std::vector<double> sample_noise_series(const SpectralDensity& spec, double dt,
                                        std::size_t n_samples, double delta_f,
                                        std::uint64_t seed);

}  // namespace ddforge

#endif
