#include "xysim/io.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "xysim/errors.hpp"
#include "xysim/format.hpp"

#ifndef XYSIM_VERSION
#define XYSIM_VERSION "0.0.0"
#endif

namespace xysim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_field(const std::string& s, std::size_t line, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ParseError(line, std::string("invalid ") + what + " '" + s + "'");
  return v;
}

}  // namespace

void write_trace_csv(const std::string& path, const TraceStats& t) {
  auto out = open_out(path);
  out << "time_us,coherence_mean,coherence_stderr\n";
  for (std::size_t i = 0; i < t.times.size(); ++i)
    out << format_double(t.times[i]) << ',' << format_double(t.mean[i]) << ','
        << cell(t.stderr_[i]) << '\n';
}

void write_phase_csv(const std::string& path, const PhaseDiagram& d) {
  auto out = open_out(path);
  out << "tau_ns,epsilon_over_pi,s_half_sq\n";
  for (std::size_t i = 0; i < d.taus.size(); ++i)
    for (std::size_t j = 0; j < d.epsilons.size(); ++j)
      out << format_double(to_ns(d.taus[i])) << ',' << format_double(d.epsilons[j] / pi) << ','
          << format_double(d.intensity[i][j]) << '\n';
}

void write_boundary_csv(const std::string& path, const PhaseDiagram& d) {
  auto out = open_out(path);
  out << "tau_ns,eps_star_over_pi\n";
  for (std::size_t i = 0; i < d.taus.size(); ++i)
    if (std::isfinite(d.boundary[i]))
      out << format_double(to_ns(d.taus[i])) << ',' << format_double(d.boundary[i] / pi) << '\n';
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw ShapeError("table row width differs from header");
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << cell(row[j]);
    out << '\n';
  }
}

ExperimentSeries parse_experiment(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++n;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw ParseError(n ? n : 1, "missing header");
  const bool with_err = header.size() == 3;
  if (!(header.size() == 2 || with_err) || header[0] != "time_us" || header[1] != "coherence" ||
      (with_err && header[2] != "err"))
    throw ParseError(n, "expected header 'time_us,coherence[,err]'");

  ExperimentSeries s;
  s.has_errors = with_err;
  std::set<double> seen;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size())
      throw ParseError(n, "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(f.size()));
    const double t = parse_field(f[0], n, "time");
    if (!seen.insert(t).second) throw ParseError(n, "duplicated time value " + f[0]);
    s.times.push_back(t);
    s.values.push_back(parse_field(f[1], n, "coherence"));
    s.errors.push_back(with_err && !f[2].empty() ? parse_field(f[2], n, "err")
                                                 : std::numeric_limits<double>::quiet_NaN());
  }
  return s;
}

ExperimentSeries ingest_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_experiment(in);
}

void write_overlay_csv(const std::string& path, const TraceStats& t, const ExperimentSeries& e) {
  auto out = open_out(path);
  out << "source,time_us,coherence,err\n";
  for (std::size_t i = 0; i < t.times.size(); ++i)
    out << "simulation," << format_double(t.times[i]) << ',' << format_double(t.mean[i]) << ','
        << cell(t.stderr_[i]) << '\n';
  for (std::size_t i = 0; i < e.times.size(); ++i)
    out << "experiment," << format_double(e.times[i]) << ',' << format_double(e.values[i]) << ','
        << cell(e.errors[i]) << '\n';
}

Json make_record(const RunConfig& config, const std::string& command) {
  std::int64_t created = 0;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    created = std::strtoll(sde, nullptr, 10);
  } else {
    created = static_cast<std::int64_t>(std::time(nullptr));
  }
  Json j;
  j["command"] = command;
  j["code_version"] = XYSIM_VERSION;
  j["created_unix"] = created;
  j["config_hash"] = config_hash(config);
  j["config"] = serialize(config);
  return j;
}

Json to_json(const TraceStats& t) {
  Json j;
  j["n_realizations"] = t.n_realizations;
  j["time_us"] = t.times;
  j["coherence_mean"] = t.mean;
  Json err = Json::array();
  for (double e : t.stderr_) err.push_back(std::isnan(e) ? Json(nullptr) : Json(e));
  j["coherence_stderr"] = std::move(err);
  return j;
}

Json to_json(const PhaseDiagram& d) {
  Json j;
  std::vector<double> taus_ns, eps_pi, boundary;
  for (double t : d.taus) taus_ns.push_back(to_ns(t));
  for (double e : d.epsilons) eps_pi.push_back(e / pi);
  for (double b : d.boundary) boundary.push_back(b / pi);
  j["tau_ns"] = taus_ns;
  j["epsilon_over_pi"] = eps_pi;
  j["s_half_sq"] = d.intensity;
  j["threshold"] = d.threshold;
  j["eps_star_over_pi"] = boundary;
  std::vector<bool> re(d.reentrant.begin(), d.reentrant.end());
  j["reentrant"] = re;
  return j;
}

Json to_json(const FitResult& f) {
  Json j;
  j["model"] = to_string(f.model);
  j["T_1e_us"] = f.T_1e;
  j["beta"] = f.beta;
  j["amplitude"] = f.amplitude;
  j["residual"] = f.residual;
  return j;
}

void write_json(const std::string& path, const Json& record) {
  auto out = open_out(path);
  out << record.dump(2) << '\n';
}

}  // namespace xysim
