// ddforge: filter functions, overlap integrals, fidelity predictions and a
// stochastic two-level simulator for pi-pulse dynamical decoupling sequences.
//
// All inputs come from a JSON config (plus flag overrides); all outputs are
// CSV or JSON. Exit codes: 0 success, 2 validation error, 3 I/O error,
// 4 numerical non-convergence.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddforge/errors.hpp"
#include "ddforge/evolution.hpp"
#include "ddforge/io.hpp"
#include "ddforge/inversion.hpp"
#include "ddforge/montecarlo.hpp"
#include "ddforge/tomography.hpp"

namespace {

using nlohmann::json;

struct GlobalArgs {
  std::string config_path;
  std::string output_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool validate_only = false;
};

json load_config(const GlobalArgs& args) {
  if (args.config_path.empty()) return json::object();
  json j = json::parse(ddforge::read_text_file(args.config_path), nullptr, false);
  if (j.is_discarded())
    throw ddforge::validation_error("config file is not valid JSON");
  return j;
}

ddforge::PulseSequence sequence_from_config(const json& cfg) {
  if (!cfg.contains("sequence"))
    throw ddforge::validation_error("config needs a \"sequence\" object");
  return ddforge::build_sequence(
      ddforge::parse_sequence_descriptor(cfg.at("sequence").dump()));
}

ddforge::SpectralDensity spectrum_from_config(const json& cfg,
                                              const std::string& key,
                                              ddforge::SpectrumKind kind) {
  ddforge::SpectralDensity spec;
  spec.kind = kind;
  if (!cfg.contains(key)) return spec;  // absent = zero spectrum
  spec = ddforge::load_spectrum(cfg.at(key).get<std::string>());
  if (spec.kind != kind)
    throw ddforge::validation_error(key + ": spectrum kind mismatch");
  return spec;
}

std::uint64_t resolve_seed(const GlobalArgs& args, const json& cfg) {
  if (args.seed) return *args.seed;
  if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
  if (const char* env = std::getenv("DDFORGE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ddforge::validation_error("DDFORGE_SEED is not an integer");
    }
  }
  return 0;
}

std::string resolve_output(const GlobalArgs& args, const json& cfg) {
  if (!args.output_path.empty()) return args.output_path;
  if (cfg.contains("output")) return cfg.at("output").get<std::string>();
  throw ddforge::validation_error("no output path (use --output or config)");
}

int resolve_threads(const GlobalArgs& args, const json& cfg) {
  if (args.threads > 0) return args.threads;
  return cfg.value("threads", 0);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<double> range_values(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo))
    throw ddforge::validation_error("invalid range (need min <= max, step > 0)");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = lo + i * step;
    if (v > hi + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_filter(const GlobalArgs& gargs, const json& cfg, std::string kind_name,
               double fmin, double fmax, int points) {
  const auto seq = sequence_from_config(cfg);
  const auto kind = ddforge::filter_kind_from_string(kind_name);
  if (!(fmin < fmax) || points < 2)
    throw ddforge::validation_error("filter band needs fmin < fmax, points >= 2");
  const std::string out = resolve_output(gargs, cfg);
  if (gargs.validate_only) return 0;
  ddforge::write_filter_csv(out, ddforge::filter_grid(seq, kind, fmin, fmax, points));
  return 0;
}

int cmd_map(const GlobalArgs& gargs, const json& cfg, std::string n_list,
            double rate_min, double rate_max, double rate_step,
            double total_time, double pulse_duration, std::string state) {
  if (state != "worst")
    throw ddforge::validation_error("only --state worst is supported");
  std::vector<int> n_values;
  for (double v : parse_double_list(n_list)) n_values.push_back(static_cast<int>(v));
  const auto rates = range_values(rate_min, rate_max, rate_step);
  const auto env = spectrum_from_config(cfg, "env_spectrum",
                                        ddforge::SpectrumKind::environment);
  const auto ctrl =
      spectrum_from_config(cfg, "ctrl_spectrum", ddforge::SpectrumKind::control);
  ddforge::FidelityMapOptions opts;
  opts.threads = resolve_threads(gargs, cfg);
  const std::string out = resolve_output(gargs, cfg);
  // surface grid validation before computing
  for (int n : n_values)
    if (n < 0 || (n != 0 && n % 2 != 0))
      throw ddforge::validation_error("phase cycle values must be even (or 0)");
  if (rates.empty() || n_values.empty())
    throw ddforge::validation_error("fidelity map grid is empty");
  if (gargs.validate_only) return 0;
  const auto map = ddforge::fidelity_map(n_values, rates, total_time, env, ctrl,
                                         pulse_duration, opts);
  ddforge::write_map_csv(out, map);
  return 0;
}

int cmd_predict(const GlobalArgs& gargs, const json& cfg) {
  const auto seq = sequence_from_config(cfg);
  const auto env = spectrum_from_config(cfg, "env_spectrum",
                                        ddforge::SpectrumKind::environment);
  const auto ctrl =
      spectrum_from_config(cfg, "ctrl_spectrum", ddforge::SpectrumKind::control);
  const std::string out = resolve_output(gargs, cfg);
  if (gargs.validate_only) return 0;
  const auto report = ddforge::overlap_report(seq, env, ctrl);
  const auto prediction = ddforge::process_prediction(report);
  json j = json::parse(ddforge::prediction_to_json(prediction, report));
  j["process_matrix"] =
      json::parse(ddforge::process_matrix_to_json(ddforge::predict_process(prediction)));
  ddforge::write_text_file(out, j.dump(2) + "\n");
  return 0;
}

int cmd_simulate(const GlobalArgs& gargs, const json& cfg, int realizations,
                 double dt, std::vector<double> initial_state) {
  const auto seq = sequence_from_config(cfg);
  const auto env = spectrum_from_config(cfg, "env_spectrum",
                                        ddforge::SpectrumKind::environment);
  const auto ctrl =
      spectrum_from_config(cfg, "ctrl_spectrum", ddforge::SpectrumKind::control);

  ddforge::SimulationConfig sim;
  const json scfg = cfg.value("simulate", json::object());
  sim.realizations = realizations > 0 ? realizations : scfg.value("realizations", 500);
  sim.seed = resolve_seed(gargs, cfg);
  sim.threads = resolve_threads(gargs, cfg);
  sim.synth_duration = scfg.value("synth_duration_s", 0.0);

  double min_dur = std::numeric_limits<double>::infinity();
  for (const auto& p : seq.pulses()) min_dur = std::min(min_dur, p.duration);
  if (!(min_dur > 0.0))
    throw ddforge::validation_error(
        "simulate needs finite-width pulses (pulse_duration_s > 0)");
  sim.pulse_duration = min_dur;

  if (dt > 0.0) {
    sim.dt = dt;
  } else if (scfg.contains("dt_s")) {
    sim.dt = scfg.at("dt_s").get<double>();
  } else {
    const double f_sharp = std::max(env.max_sharp_frequency(),
                                    ctrl.max_sharp_frequency());
    double bound = min_dur / 20.0;
    if (f_sharp > 0.0) bound = std::min(bound, 1.0 / (20.0 * f_sharp));
    const auto steps = static_cast<long>(
        std::ceil(seq.total_duration() / bound - 1e-12));
    sim.dt = seq.total_duration() / static_cast<double>(steps);
  }

  ddforge::BlochState initial{0.0, 0.0, -1.0};
  if (!initial_state.empty()) {
    if (initial_state.size() != 3)
      throw ddforge::validation_error("--initial needs three components");
    initial = {initial_state[0], initial_state[1], initial_state[2]};
  } else if (scfg.contains("initial")) {
    const auto& v = scfg.at("initial");
    initial = {v.at(0).get<double>(), v.at(1).get<double>(),
               v.at(2).get<double>()};
  }
  ddforge::validate_state(initial);

  const std::string out = resolve_output(gargs, cfg);
  if (gargs.validate_only) return 0;
  const auto report =
      ddforge::compare_to_perturbative(seq, env, ctrl, initial, sim);
  ddforge::write_text_file(out, ddforge::comparison_report_to_json(report) + "\n");
  return 0;
}

int cmd_invert(const GlobalArgs& gargs, const json& cfg, std::string records_path,
               std::string sidecar_path, std::string grid_list,
               double single_peak_freq) {
  if (records_path.empty())
    records_path = cfg.value("records", "");
  if (sidecar_path.empty())
    sidecar_path = cfg.value("sequences", "");
  if (records_path.empty() || sidecar_path.empty())
    throw ddforge::validation_error("invert needs --records and --sequences");
  const auto records = ddforge::load_records(records_path, sidecar_path);
  const std::string out = resolve_output(gargs, cfg);

  if (single_peak_freq > 0.0) {
    if (gargs.validate_only) return 0;
    const double density =
        ddforge::invert_single_peak(records.front(), single_peak_freq);
    ddforge::SpectrumEstimate est;
    est.frequencies = {single_peak_freq};
    est.densities = {density};
    est.tolerance_reached = true;
    ddforge::write_estimate_csv(out, est);
    return 0;
  }

  std::vector<double> grid;
  if (!grid_list.empty())
    grid = parse_double_list(grid_list);
  else if (cfg.contains("grid"))
    grid = cfg.at("grid").get<std::vector<double>>();
  if (grid.empty())
    throw ddforge::validation_error("invert needs a frequency grid");
  if (records.size() < grid.size())
    throw ddforge::validation_error(
        "underdetermined system: need >= |grid| records");
  if (gargs.validate_only) return 0;
  ddforge::write_estimate_csv(out, ddforge::invert_linear(records, grid));
  return 0;
}

int cmd_scan(const GlobalArgs& gargs, const json& cfg, double rate_min,
             double rate_max, double rate_step, int n, int pulses,
             double pulse_duration) {
  const auto ctrl =
      spectrum_from_config(cfg, "ctrl_spectrum", ddforge::SpectrumKind::control);
  const auto rates = range_values(rate_min, rate_max, rate_step);
  if (pulses < 1) throw ddforge::validation_error("scan needs pulses >= 1");
  const std::string out = resolve_output(gargs, cfg);
  if (gargs.validate_only) return 0;
  std::vector<double> values(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const auto seq = ddforge::build_cpmg(n, rates[i], pulses, pulse_duration);
    values[i] = ddforge::rho_y_variance(seq, ctrl);
  }
  ddforge::write_xy_csv(out, "rho_y variance scan, n=" + std::to_string(n) +
                        " pulses=" + std::to_string(pulses),
               "f_dd_hz", "rho_y_sq", rates, values);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamical-decoupling filter, overlap and noise toolkit"};
  app.require_subcommand(1);

  GlobalArgs gargs;
  app.add_option("--config", gargs.config_path, "JSON config file");
  app.add_option("--output", gargs.output_path, "output file (overrides config)");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "RNG seed (env: DDFORGE_SEED)");
  app.add_option("--threads", gargs.threads, "worker thread cap");
  app.add_flag("--validate-only", gargs.validate_only,
               "check inputs and exit without computing");

  auto* filter = app.add_subcommand("filter", "filter function on a frequency grid");
  std::string filter_kind = "dephasing";
  double fmin = 0.0, fmax = 0.0;
  int points = 0;
  filter->add_option("--kind", filter_kind, "dephasing|control");
  filter->add_option("--fmin", fmin, "band start, Hz");
  filter->add_option("--fmax", fmax, "band end, Hz")->required();
  filter->add_option("--points", points, "grid points")->required();

  auto* map = app.add_subcommand("map", "log10 fidelity decay-rate map over (n, f_DD)");
  std::string n_list = "0,2,4,6,8";
  double rate_min = 20.0, rate_max = 220.0, rate_step = 1.0;
  double total_time = 1.0, map_pulse_duration = 0.0;
  std::string state = "worst";
  map->add_option("--n-values", n_list, "comma-separated phase cycles");
  map->add_option("--rate-min", rate_min, "Hz");
  map->add_option("--rate-max", rate_max, "Hz");
  map->add_option("--rate-step", rate_step, "Hz");
  map->add_option("--time", total_time, "total sequence time, s");
  map->add_option("--pulse-duration", map_pulse_duration, "pulse duration, s");
  map->add_option("--state", state, "initial state (worst)");

  auto* predict = app.add_subcommand("predict", "overlaps, fidelity and process matrix");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo vs closed-form comparison");
  int realizations = 0;
  double sim_dt = 0.0;
  std::vector<double> initial_state;
  simulate->add_option("--realizations", realizations, "noise realizations");
  simulate->add_option("--dt", sim_dt, "integrator step, s");
  simulate->add_option("--initial", initial_state, "initial Bloch vector (3 values)")
      ->expected(3);

  auto* invert = app.add_subcommand("invert", "recover a spectrum from overlap records");
  std::string records_path, sidecar_path, grid_list;
  double single_peak = 0.0;
  invert->add_option("--records", records_path, "records CSV");
  invert->add_option("--sequences", sidecar_path, "sequence descriptor sidecar JSON");
  invert->add_option("--grid", grid_list, "comma-separated grid frequencies, Hz");
  invert->add_option("--single-peak", single_peak, "single-peak inversion at f0, Hz");

  auto* scan = app.add_subcommand("scan", "rho_y variance vs pulse rate");
  double scan_min = 20.0, scan_max = 220.0, scan_step = 0.5;
  int scan_n = 4, scan_pulses = 40;
  double scan_pulse_duration = 0.0;
  scan->add_option("--rate-min", scan_min, "Hz");
  scan->add_option("--rate-max", scan_max, "Hz");
  scan->add_option("--rate-step", scan_step, "Hz");
  scan->add_option("--n", scan_n, "phase cycle");
  scan->add_option("--pulses", scan_pulses, "pulse count");
  scan->add_option("--pulse-duration", scan_pulse_duration, "pulse duration, s");

  // global options may follow the subcommand
  for (auto* sub : {filter, map, predict, simulate, invert, scan})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // bad arguments are validation errors
  }
  if (!seed_opt->empty()) gargs.seed = seed_value;

  try {
    const json cfg = load_config(gargs);
    if (filter->parsed())
      return cmd_filter(gargs, cfg, filter_kind, fmin, fmax, points);
    if (map->parsed())
      return cmd_map(gargs, cfg, n_list, rate_min, rate_max, rate_step,
                     total_time, map_pulse_duration, state);
    if (predict->parsed()) return cmd_predict(gargs, cfg);
    if (simulate->parsed())
      return cmd_simulate(gargs, cfg, realizations, sim_dt, initial_state);
    if (invert->parsed())
      return cmd_invert(gargs, cfg, records_path, sidecar_path, grid_list,
                        single_peak);
    if (scan->parsed())
      return cmd_scan(gargs, cfg, scan_min, scan_max, scan_step, scan_n,
                      scan_pulses, scan_pulse_duration);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const ddforge::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const ddforge::io_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const ddforge::convergence_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
