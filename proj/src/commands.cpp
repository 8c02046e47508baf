#include "xysim/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "xysim/dtc.hpp"
#include "xysim/ensemble.hpp"
#include "xysim/errors.hpp"
#include "xysim/format.hpp"
#include "xysim/io.hpp"
#include "xysim/oracle_suite.hpp"

namespace xysim {

namespace {

namespace fs = std::filesystem;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string out_path(const CliOptions& o, const RunConfig& c, const std::string& suffix) {
  fs::create_directories(o.out_dir);
  return (fs::path(o.out_dir) / (c.output.prefix + suffix)).string();
}

bool fittable(const SequenceSpec& s) { return !std::holds_alternative<DtcFloquet>(s); }

TraceStats simulate_trace(const EnsembleSpec& spec, const SequenceSpec& seq, const RunConfig& c,
                          int workers) {
  TraceStats t = run_ensemble(spec, seq, c.grid, workers);
  if (c.analysis.rescale_polarization) t = rescale_by_polarization(t, spec.eta_pol);
  return t;
}

std::optional<FitResult> try_fit(const TraceStats& t, const RunConfig& c, const SequenceSpec& seq,
                                 std::string* failure = nullptr) {
  if (!c.analysis.fit || !fittable(seq)) return std::nullopt;
  try {
    return fit_decay(t, c.analysis.fit_model);
  } catch (const FitError& e) {
    if (failure) *failure = e.what();
    return std::nullopt;
  }
}

}  // namespace

RunConfig load_config(const CliOptions& o) {
  RunConfig c;
  if (!o.preset.empty() && !o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("--config", "cannot open '" + o.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    c = parse_config_layered(preset_text(o.preset), ss.str());
  } else if (!o.preset.empty()) {
    c = parse_config_string(preset_text(o.preset));
  } else if (!o.config_path.empty()) {
    c = parse_config(o.config_path);
  } else {
    throw ConfigError("--config", "a config file or --preset is required");
  }
  if (o.seed) c.ensemble.master_seed = *o.seed;
  return c;
}

// Whole lock periods only: at odd half periods the lock acts as a pi pulse
// about y and echoes the flip-angle error away.
std::vector<double> default_dtc_taus(double omega_y) {
  if (!(omega_y > 0.0)) throw InvalidArgument("default tau grid needs omega_y > 0");
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(2.0 * pi / omega_y * i);
  return t;
}

std::vector<double> default_dtc_epsilons() {
  std::vector<double> e;
  for (int j = 0; j < 10; ++j) e.push_back(pi * 0.01 * j);
  return e;
}

std::vector<std::string> cmd_simulate(const RunConfig& c, const CliOptions& o) {
  const TraceStats t = simulate_trace(c.ensemble, c.sequence, c, o.workers);
  std::vector<std::string> files{out_path(o, c, "_trace.csv")};
  write_trace_csv(files.back(), t);
  if (!c.output.overlay.empty()) {
    files.push_back(out_path(o, c, "_overlay.csv"));
    write_overlay_csv(files.back(), t, ingest_experiment(c.output.overlay));
  }
  if (c.output.json) {
    Json rec = make_record(c, "simulate");
    rec["trace"] = to_json(t);
    std::string why;
    const auto fit = try_fit(t, c, c.sequence, &why);
    rec["fit"] = fit ? to_json(*fit) : Json();
    if (!why.empty()) rec["fit_error"] = why;
    files.push_back(out_path(o, c, "_record.json"));
    write_json(files.back(), rec);
  }
  return files;
}

std::vector<std::string> cmd_sweep(const RunConfig& c, const CliOptions& o) {
  const auto& a = c.analysis;
  if (a.sweep_param.empty() || a.sweep_values.empty())
    throw ConfigError("analysis.sweep_param", "sweep needs sweep_param and sweep_values");
  const std::string& p = a.sweep_param;
  const SequenceSpec& s = c.sequence;
  const bool applies =
      p == "eta_pol" || p == "ppm" ||
      (p == "epsilon" && (std::holds_alternative<EpsCpmg>(s) || std::holds_alternative<DtcFloquet>(s))) ||
      (p == "tau" && (std::holds_alternative<EpsCpmg>(s) || std::holds_alternative<WahuhaEcho>(s) ||
                      std::holds_alternative<DtcFloquet>(s))) ||
      (p == "phi" && std::holds_alternative<DtcFloquet>(s));
  if (!applies)
    throw ConfigError("analysis.sweep_param", "'" + p + "' does not apply to " + sequence_name(s));

  std::string label = p;
  double scale = 1.0;
  if (p == "epsilon" || p == "phi") {
    label += "_over_pi";
    scale = 1.0 / pi;
  } else if (p == "tau") {
    label = "tau_ns";
    scale = 1e3;
  }

  std::vector<std::vector<double>> rows;
  Json points = Json::array();
  for (double v : a.sweep_values) {
    RunConfig point = c;
    EnsembleSpec& spec = point.ensemble;
    if (p == "eta_pol") spec.eta_pol = v;
    if (p == "ppm") spec.ppm = v;
    std::visit(
        [&](auto& q) {
          using T = std::decay_t<decltype(q)>;
          if constexpr (std::is_same_v<T, EpsCpmg> || std::is_same_v<T, DtcFloquet>) {
            if (p == "epsilon") q.epsilon = v;
          }
          if constexpr (std::is_same_v<T, EpsCpmg> || std::is_same_v<T, WahuhaEcho> ||
                        std::is_same_v<T, DtcFloquet>) {
            if (p == "tau") q.tau = v;
          }
          if constexpr (std::is_same_v<T, DtcFloquet>) {
            if (p == "phi") q.phi = v;
          }
        },
        point.sequence);
    validate(point);
    const TraceStats t = simulate_trace(spec, point.sequence, point, o.workers);
    const auto fit = try_fit(t, point, point.sequence);
    rows.push_back({v * scale, t.mean.back(), t.stderr_.back(), fit ? fit->T_1e : kNaN,
                    fit ? fit->beta : kNaN});
    Json pt;
    pt["value"] = v * scale;
    pt["trace"] = to_json(t);
    pt["fit"] = fit ? to_json(*fit) : Json();
    points.push_back(pt);
  }
  std::vector<std::string> files{out_path(o, c, "_sweep.csv")};
  write_table_csv(files.back(),
                  {label, "final_coherence_mean", "final_coherence_stderr", "T_1e_us", "beta"}, rows);
  if (c.output.json) {
    Json rec = make_record(c, "sweep");
    rec["param"] = label;
    rec["points"] = points;
    files.push_back(out_path(o, c, "_record.json"));
    write_json(files.back(), rec);
  }
  return files;
}

std::vector<std::string> cmd_dtc_phase(const RunConfig& c, const CliOptions& o) {
  const auto* dtc = std::get_if<DtcFloquet>(&c.sequence);
  if (!dtc) throw ConfigError("sequence.type", "dtc-phase needs a dtc-floquet sequence");
  PhaseDiagramOptions opt;
  opt.k_cycles = dtc->k;
  opt.phi = dtc->phi;
  opt.omega_y = dtc->omega_y;
  opt.threshold = c.analysis.threshold;
  opt.input = c.analysis.spectrum_input;
  const auto taus = c.analysis.dtc_taus.empty() ? default_dtc_taus(dtc->omega_y) : c.analysis.dtc_taus;
  const auto eps = c.analysis.dtc_epsilons.empty() ? default_dtc_epsilons() : c.analysis.dtc_epsilons;
  const PhaseDiagram d = build_phase_diagram(c.ensemble, taus, eps, opt, o.workers);

  std::vector<std::string> files{out_path(o, c, "_phase.csv"), out_path(o, c, "_boundary.csv")};
  write_phase_csv(files[0], d);
  write_boundary_csv(files[1], d);
  if (c.output.json) {
    Json rec = make_record(c, "dtc-phase");
    rec["phase_diagram"] = to_json(d);
    try {
      rec["boundary_slope_over_pi_per_us"] = boundary_slope(d) / pi;
    } catch (const InvalidArgument&) {
      rec["boundary_slope_over_pi_per_us"] = Json();
    }
    rec["subharmonic_area"] = subharmonic_area(d);
    files.push_back(out_path(o, c, "_record.json"));
    write_json(files.back(), rec);
  }
  return files;
}

std::vector<std::string> cmd_calibrate(const RunConfig& c, const CliOptions& o) {
  if (!(c.analysis.target_slope > 0.0))
    throw ConfigError("analysis.target_slope", "calibrate needs a positive target slope");
  const Calibration cal = calibrate_concentration(c.analysis.target_slope, c.analysis.calibrate_lo,
                                                  c.analysis.calibrate_hi, c.ensemble, o.workers);
  Json rec = make_record(c, "calibrate");
  rec["ppm"] = cal.ppm;
  rec["early_slope_rad2_per_us2"] = cal.slope;
  rec["iterations"] = cal.iterations;
  std::vector<std::string> files{out_path(o, c, "_calibration.json")};
  write_json(files.back(), rec);
  return files;
}

int cmd_oracle(const CliOptions& o, std::ostream& out) {
  OracleOptions opt;
  opt.realizations = o.oracle_realizations;
  opt.seed = o.seed.value_or(1);
  opt.workers = o.workers;
  const auto suites = o.oracle_check.empty() || o.oracle_check == "all"
                          ? oracle_suites()
                          : std::vector<std::string>{o.oracle_check};
  bool ok = true;
  for (const auto& s : suites) {
    const OracleReport r = run_oracle(s, opt);
    r.print(out);
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitOracle;
}

int run_command(const std::string& command, const CliOptions& o, std::ostream& out,
                std::ostream& err) {
  try {
    if (command == "oracle") return cmd_oracle(o, out);
    const RunConfig c = load_config(o);
    std::vector<std::string> files;
    if (command == "simulate") files = cmd_simulate(c, o);
    else if (command == "sweep") files = cmd_sweep(c, o);
    else if (command == "dtc-phase") files = cmd_dtc_phase(c, o);
    else if (command == "calibrate") files = cmd_calibrate(c, o);
    else throw ConfigError("command", "unknown subcommand '" + command + "'");
    for (const auto& f : files) out << "wrote " << f << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return command == "oracle" ? kExitConfig : kExitSimulation;
  } catch (const std::exception& e) {
    err << "simulation error: " << e.what() << "\n";
    return kExitSimulation;
  }
}

}  // namespace xysim
