#ifndef DDFORGE_IO_HPP
#define DDFORGE_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "ddforge/evolution.hpp"
#include "ddforge/filters.hpp"
#include "ddforge/inversion.hpp"
#include "ddforge/montecarlo.hpp"
#include "ddforge/spectra.hpp"
#include "ddforge/tomography.hpp"

namespace ddforge {

// File formats. Spectra and sequence descriptors are JSON; sampled data are
// CSV. Line powers are the total two-sided variance of the component, and
// continuous densities are two-sided, as everywhere in the library.

/// JSON sequence descriptor:
/// {"kind":"cpmg","n":4,"rate_hz":67,"pulses":40,"pulse_duration_s":0}
struct SequenceDescriptor {
  std::string kind = "cpmg";
  int n = 0;
  double rate_hz = 0.0;
  int pulses = 0;
  double pulse_duration_s = 0.0;
};

SequenceDescriptor parse_sequence_descriptor(const std::string& json_text);
std::string sequence_descriptor_to_json(const SequenceDescriptor& d);
PulseSequence build_sequence(const SequenceDescriptor& d);

/// Spectrum file:
/// {"kind":"environment"|"control","components":[
///   {"type":"lorentzian","variance":..,"correlation_time_s":..} |
///   {"type":"line","freq_hz":..,"power":..} |
///   {"type":"white","level":..,"fmax_hz":..} |
///   {"type":"dc","power":..}]}
SpectralDensity parse_spectrum(const std::string& json_text);
std::string spectrum_to_json(const SpectralDensity& spec);
SpectralDensity load_spectrum(const std::string& path);
void save_spectrum(const std::string& path, const SpectralDensity& spec);

/// CSV: "# kind=<kind> sequence=<label>" comment, then f_hz,value rows.
void write_filter_csv(const std::string& path, const FilterSamples& samples);

/// CSV map: corner cell, first row = rates, first column = n values; cells
/// are log10 decay rates, suffixed '*' where outside first-order validity.
void write_map_csv(const std::string& path, const FidelityMap& map);

/// Generic two-column CSV with one comment line.
void write_xy_csv(const std::string& path, const std::string& comment,
                  const std::string& xname, const std::string& yname,
                  const std::vector<double>& x, const std::vector<double>& y);

std::string process_matrix_to_json(const ProcessMatrix& m);
ProcessMatrix parse_process_matrix(const std::string& json_text);
void write_process_matrix(const std::string& path, const ProcessMatrix& m);

/// Prediction report for one sequence: overlaps, contraction factors,
/// worst-case fidelity and decay rate.
std::string prediction_to_json(const ProcessPrediction& p,
                               const OverlapReport& overlaps);

std::string comparison_report_to_json(const ComparisonReport& r);

/// CSV ux,uy,uz,vx,vy,vz.
void write_sphere_csv(
    const std::string& path,
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& samples);

/// CSV f_hz,density plus a comment carrying residual/iteration info.
void write_estimate_csv(const std::string& path, const SpectrumEstimate& est);

/// Measurement records: CSV label,kind,value,uncertainty plus a JSON sidecar
/// {label: sequence descriptor}.
std::vector<MeasurementRecord> load_records(const std::string& csv_path,
                                            const std::string& sidecar_path);
void write_records(const std::string& csv_path, const std::string& sidecar_path,
                   const std::vector<MeasurementRecord>& records,
                   const std::vector<SequenceDescriptor>& descriptors);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ddforge

#endif
