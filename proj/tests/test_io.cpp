#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ddforge/errors.hpp"
#include "ddforge/io.hpp"

using namespace ddforge;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("ddforge_test_" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("sequence descriptor json") {
  const auto d = parse_sequence_descriptor(
      R"({"kind":"cpmg","n":4,"rate_hz":67,"pulses":40,"pulse_duration_s":0})");
  CHECK(d.n == 4);
  CHECK(d.rate_hz == 67.0);
  CHECK(d.pulses == 40);
  const auto seq = build_sequence(d);
  CHECK(seq.num_pulses() == 40);
  CHECK(seq.cpmg()->n == 4);

  const auto round = parse_sequence_descriptor(sequence_descriptor_to_json(d));
  CHECK(round.n == d.n);
  CHECK(round.rate_hz == d.rate_hz);

  CHECK_THROWS_AS(parse_sequence_descriptor("{"), validation_error);
  CHECK_THROWS_AS(parse_sequence_descriptor(R"({"kind":"udd","rate_hz":1,"pulses":1})"),
                  validation_error);
  CHECK_THROWS_AS(parse_sequence_descriptor(R"({"kind":"cpmg"})"),
                  validation_error);
}

TEST_CASE("spectrum json round trip") {
  SpectralDensity spec;
  spec.kind = SpectrumKind::control;
  spec.components = {SpectralLine{50.0, 1e-6}, Lorentzian{2.0, 0.01},
                     WhiteBand{1e-4, 300.0}, DcComponent{3e-5}};
  const auto text = spectrum_to_json(spec);
  const auto back = parse_spectrum(text);
  CHECK(back.kind == SpectrumKind::control);
  REQUIRE(back.components.size() == 4);
  CHECK(std::get<SpectralLine>(back.components[0]).power == 1e-6);
  CHECK(std::get<Lorentzian>(back.components[1]).correlation_time == 0.01);
  CHECK(std::get<WhiteBand>(back.components[2]).fmax == 300.0);
  CHECK(std::get<DcComponent>(back.components[3]).power == 3e-5);

  CHECK_THROWS_AS(parse_spectrum(R"({"kind":"control","components":[{"type":"x"}]})"),
                  validation_error);

  TempDir tmp;
  save_spectrum(tmp.file("s.json"), spec);
  const auto loaded = load_spectrum(tmp.file("s.json"));
  CHECK(loaded.components.size() == 4);
  CHECK_THROWS_AS(load_spectrum(tmp.file("missing.json")), io_error);
}

TEST_CASE("filter csv") {
  TempDir tmp;
  FilterSamples s;
  s.kind = FilterKind::control;
  s.sequence_label = "cpmg4";
  s.frequencies = {0.0, 1.5};
  s.values = {1.0, 0.25};
  write_filter_csv(tmp.file("f.csv"), s);
  const auto text = read_text_file(tmp.file("f.csv"));
  CHECK(text.find("# kind=control sequence=cpmg4") == 0);
  CHECK(text.find("f_hz,value\n") != std::string::npos);
  CHECK(text.find("1.5,0.25") != std::string::npos);
}

TEST_CASE("map csv layout and flags") {
  TempDir tmp;
  FidelityMap map;
  map.n_values = {0, 4};
  map.rate_values = {50.0, 67.0};
  map.log10_decay_rate = {-6.0, -2.5, -3.25, -1.0};
  map.flagged = {0, 0, 0, 1};
  write_map_csv(tmp.file("m.csv"), map);
  const auto text = read_text_file(tmp.file("m.csv"));
  CHECK(text.find("n\\f_dd_hz,50,67\n") == 0);
  CHECK(text.find("\n0,-6,-2.5\n") != std::string::npos);
  CHECK(text.find("\n4,-3.25,-1*\n") != std::string::npos);
}

TEST_CASE("process matrix json round trip") {
  ProcessMatrix p;
  p.linear << 0.9, 0.01, 0.0, 0.0, 0.8, 0.02, 0.03, 0.0, 0.95;
  p.offset << 0.1, -0.2, 0.0;
  const auto back = parse_process_matrix(process_matrix_to_json(p));
  CHECK(back.linear.isApprox(p.linear, 1e-15));
  CHECK(back.offset.isApprox(p.offset, 1e-15));
}

TEST_CASE("records round trip") {
  TempDir tmp;
  std::vector<SequenceDescriptor> descs;
  std::vector<MeasurementRecord> records;
  for (double rate : {50.0, 67.0}) {
    SequenceDescriptor d;
    d.n = 4;
    d.rate_hz = rate;
    d.pulses = 8;
    descs.push_back(d);
    records.push_back({build_sequence(d), FilterKind::control, 1e-4, 2e-6,
                       "r" + std::to_string(static_cast<int>(rate))});
  }
  write_records(tmp.file("r.csv"), tmp.file("r.json"), records, descs);
  const auto loaded = load_records(tmp.file("r.csv"), tmp.file("r.json"));
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].label == "r50");
  CHECK(loaded[0].value == 1e-4);
  CHECK(loaded[0].uncertainty == 2e-6);
  CHECK(loaded[1].sequence.cpmg()->rate_hz == 67.0);
  CHECK(loaded[1].kind == FilterKind::control);
}

TEST_CASE("estimate csv carries solver metadata") {
  TempDir tmp;
  SpectrumEstimate est;
  est.frequencies = {25.0, 50.0};
  est.densities = {0.0, 4e-8};
  est.residual_norm = 1e-9;
  est.iterations = 321;
  est.tolerance_reached = true;
  est.undetermined = {0};
  write_estimate_csv(tmp.file("e.csv"), est);
  const auto text = read_text_file(tmp.file("e.csv"));
  CHECK(text.find("iterations=321") != std::string::npos);
  CHECK(text.find("tolerance_reached=true") != std::string::npos);
  CHECK(text.find("undetermined=0") != std::string::npos);
  CHECK(text.find("f_hz,density") != std::string::npos);
}
