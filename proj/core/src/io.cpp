#include "ddforge/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "ddforge/errors.hpp"

namespace ddforge {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw validation_error("invalid JSON in " + what);
  return j;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

SequenceDescriptor parse_sequence_descriptor(const std::string& json_text) {
  const json j = parse_json(json_text, "sequence descriptor");
  SequenceDescriptor d;
  d.kind = j.value("kind", "cpmg");
  if (d.kind != "cpmg")
    throw validation_error("unknown sequence kind: " + d.kind);
  if (!j.contains("rate_hz") || !j.contains("pulses"))
    throw validation_error("sequence descriptor needs rate_hz and pulses");
  d.n = j.value("n", 0);
  d.rate_hz = j.at("rate_hz").get<double>();
  d.pulses = j.at("pulses").get<int>();
  d.pulse_duration_s = j.value("pulse_duration_s", 0.0);
  return d;
}

std::string sequence_descriptor_to_json(const SequenceDescriptor& d) {
  json j;
  j["kind"] = d.kind;
  j["n"] = d.n;
  j["rate_hz"] = d.rate_hz;
  j["pulses"] = d.pulses;
  j["pulse_duration_s"] = d.pulse_duration_s;
  return j.dump();
}

PulseSequence build_sequence(const SequenceDescriptor& d) {
  return build_cpmg(d.n, d.rate_hz, d.pulses, d.pulse_duration_s);
}

SpectralDensity parse_spectrum(const std::string& json_text) {
  const json j = parse_json(json_text, "spectrum");
  SpectralDensity spec;
  spec.kind = spectrum_kind_from_string(j.value("kind", "environment"));
  if (!j.contains("components")) return spec;
  for (const auto& c : j.at("components")) {
    const std::string type = c.value("type", "");
    if (type == "lorentzian") {
      spec.components.push_back(Lorentzian{
          c.at("variance").get<double>(),
          c.at("correlation_time_s").get<double>()});
    } else if (type == "line") {
      spec.components.push_back(SpectralLine{c.at("freq_hz").get<double>(),
                                             c.at("power").get<double>()});
    } else if (type == "white") {
      spec.components.push_back(
          WhiteBand{c.at("level").get<double>(), c.at("fmax_hz").get<double>()});
    } else if (type == "dc") {
      spec.components.push_back(DcComponent{c.at("power").get<double>()});
    } else {
      throw validation_error("unknown spectral component type: " + type);
    }
  }
  return spec;
}

std::string spectrum_to_json(const SpectralDensity& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  j["components"] = json::array();
  for (const auto& comp : spec.components) {
    json c;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Lorentzian>) {
            c["type"] = "lorentzian";
            c["variance"] = x.variance;
            c["correlation_time_s"] = x.correlation_time;
          } else if constexpr (std::is_same_v<T, SpectralLine>) {
            c["type"] = "line";
            c["freq_hz"] = x.frequency;
            c["power"] = x.power;
          } else if constexpr (std::is_same_v<T, WhiteBand>) {
            c["type"] = "white";
            c["level"] = x.level;
            c["fmax_hz"] = x.fmax;
          } else {
            c["type"] = "dc";
            c["power"] = x.power;
          }
        },
        comp);
    j["components"].push_back(c);
  }
  return j.dump(2);
}

SpectralDensity load_spectrum(const std::string& path) {
  return parse_spectrum(read_text_file(path));
}

void save_spectrum(const std::string& path, const SpectralDensity& spec) {
  write_text_file(path, spectrum_to_json(spec) + "\n");
}

void write_filter_csv(const std::string& path, const FilterSamples& samples) {
  std::ostringstream out;
  out << "# kind=" << to_string(samples.kind)
      << " sequence=" << samples.sequence_label << "\n";
  out << "f_hz,value\n";
  for (std::size_t i = 0; i < samples.frequencies.size(); ++i)
    out << format_double(samples.frequencies[i]) << ","
        << format_double(samples.values[i]) << "\n";
  write_text_file(path, out.str());
}

void write_map_csv(const std::string& path, const FidelityMap& map) {
  std::ostringstream out;
  out << "n\\f_dd_hz";
  for (double r : map.rate_values) out << "," << format_double(r);
  out << "\n";
  for (std::size_t i = 0; i < map.n_values.size(); ++i) {
    out << map.n_values[i];
    for (std::size_t j = 0; j < map.rate_values.size(); ++j) {
      out << "," << format_double(map.at(i, j));
      if (map.flagged_at(i, j)) out << "*";
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_xy_csv(const std::string& path, const std::string& comment,
                  const std::string& xname, const std::string& yname,
                  const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw validation_error("xy CSV columns must have equal length");
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << "\n";
  out << xname << "," << yname << "\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_double(x[i]) << "," << format_double(y[i]) << "\n";
  write_text_file(path, out.str());
}

std::string process_matrix_to_json(const ProcessMatrix& m) {
  json j;
  j["linear"] = json::array();
  for (int r = 0; r < 3; ++r)
    j["linear"].push_back({m.linear(r, 0), m.linear(r, 1), m.linear(r, 2)});
  j["offset"] = {m.offset(0), m.offset(1), m.offset(2)};
  return j.dump(2);
}

ProcessMatrix parse_process_matrix(const std::string& json_text) {
  const json j = parse_json(json_text, "process matrix");
  ProcessMatrix m;
  const auto& lin = j.at("linear");
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m.linear(r, c) = lin.at(r).at(c).get<double>();
  const auto& off = j.at("offset");
  for (int r = 0; r < 3; ++r) m.offset(r) = off.at(r).get<double>();
  return m;
}

void write_process_matrix(const std::string& path, const ProcessMatrix& m) {
  write_text_file(path, process_matrix_to_json(m) + "\n");
}

std::string prediction_to_json(const ProcessPrediction& p,
                               const OverlapReport& overlaps) {
  json j;
  j["overlaps"] = {{"env", overlaps.env},
                   {"ctrl", overlaps.ctrl},
                   {"cross", overlaps.cross}};
  j["duration_s"] = overlaps.duration;
  j["lambda_x"] = p.lambda_x;
  j["lambda_y"] = p.lambda_y;
  j["lambda_z"] = p.lambda_z;
  j["fidelity_worst"] = p.fidelity_worst;
  j["decay_rate_worst"] = p.decay_rate_worst;
  j["within_first_order"] = p.within_first_order;
  return j.dump(2);
}

std::string comparison_report_to_json(const ComparisonReport& r) {
  json j;
  j["predicted_delta"] = {r.predicted_delta.x, r.predicted_delta.y,
                          r.predicted_delta.z};
  j["simulated_delta"] = {r.simulated_delta.x, r.simulated_delta.y,
                          r.simulated_delta.z};
  j["std_err"] = {r.std_err[0], r.std_err[1], r.std_err[2]};
  j["z_scores"] = {r.z_scores[0], r.z_scores[1], r.z_scores[2]};
  j["rel_errors"] = {r.rel_errors[0], r.rel_errors[1], r.rel_errors[2]};
  j["predicted_infidelity"] = r.predicted_infidelity;
  j["realizations"] = r.realizations_used;
  if (r.within_validity) {
    j["verdict"] = r.agrees ? "pass" : "fail";
  } else {
    j["verdict"] = "outside perturbative validity";
  }
  return j.dump(2);
}

void write_sphere_csv(
    const std::string& path,
    const std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>>& samples) {
  std::ostringstream out;
  out << "ux,uy,uz,vx,vy,vz\n";
  for (const auto& [u, v] : samples) {
    out << format_double(u(0)) << "," << format_double(u(1)) << ","
        << format_double(u(2)) << "," << format_double(v(0)) << ","
        << format_double(v(1)) << "," << format_double(v(2)) << "\n";
  }
  write_text_file(path, out.str());
}

void write_estimate_csv(const std::string& path, const SpectrumEstimate& est) {
  std::ostringstream out;
  out << "# residual_norm=" << format_double(est.residual_norm)
      << " iterations=" << est.iterations
      << " tolerance_reached=" << (est.tolerance_reached ? "true" : "false");
  if (!est.undetermined.empty()) {
    out << " undetermined=";
    for (std::size_t i = 0; i < est.undetermined.size(); ++i)
      out << (i ? ";" : "") << est.undetermined[i];
  }
  out << "\n";
  out << "f_hz,density\n";
  for (std::size_t i = 0; i < est.frequencies.size(); ++i)
    out << format_double(est.frequencies[i]) << ","
        << format_double(est.densities[i]) << "\n";
  write_text_file(path, out.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::vector<MeasurementRecord> load_records(const std::string& csv_path,
                                            const std::string& sidecar_path) {
  const json sidecar = parse_json(read_text_file(sidecar_path), "sidecar");
  std::istringstream in(read_text_file(csv_path));
  std::vector<MeasurementRecord> records;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {  // label,kind,value,uncertainty
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() < 4)
      throw validation_error("records CSV row needs 4 fields: " + line);
    const std::string& label = fields[0];
    if (!sidecar.contains(label))
      throw validation_error("no sequence descriptor for record " + label);
    const auto d = parse_sequence_descriptor(sidecar.at(label).dump());
    MeasurementRecord rec{build_sequence(d),
                          filter_kind_from_string(fields[1]),
                          std::stod(fields[2]), std::stod(fields[3]), label};
    if (rec.value < 0.0)
      throw validation_error("record value must be >= 0: " + label);
    if (rec.uncertainty < 0.0)
      throw validation_error("record uncertainty must be >= 0: " + label);
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw validation_error("no records in " + csv_path);
  return records;
}

void write_records(const std::string& csv_path, const std::string& sidecar_path,
                   const std::vector<MeasurementRecord>& records,
                   const std::vector<SequenceDescriptor>& descriptors) {
  if (records.size() != descriptors.size())
    throw validation_error("records/descriptors size mismatch");
  std::ostringstream csv;
  csv << "label,kind,value,uncertainty\n";
  json sidecar;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    csv << r.label << "," << to_string(r.kind) << "," << format_double(r.value)
        << "," << format_double(r.uncertainty) << "\n";
    sidecar[r.label] = json::parse(sequence_descriptor_to_json(descriptors[i]));
  }
  write_text_file(csv_path, csv.str());
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");
}

}  // namespace ddforge
