#include "xysim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "xysim/errors.hpp"
#include "xysim/format.hpp"

namespace xysim {

namespace {

using boost::property_tree::ptree;

enum class Dim { frequency, time, angle, concentration, slope };

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  auto [end, ec] = std::from_chars(first, s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && end == s.data() + s.size();
}

double parse_number(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (!is_number(s)) throw ConfigError(key, "'" + s + "' is not a number");
  double v = 0.0;
  std::from_chars(s.data() + (s[0] == '+' ? 1 : 0), s.data() + s.size(), v);
  return v;
}

template <class Int>
Int parse_integer(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  Int v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size())
    throw ConfigError(key, "'" + s + "' is not a valid integer");
  return v;
}

bool parse_bool(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(key, "expected true or false, got '" + s + "'");
}

const char* expected_units(Dim d) {
  switch (d) {
    case Dim::frequency: return "MHz, kHz or rad/us";
    case Dim::time: return "ns, us or ms";
    case Dim::angle: return "rad, pi or deg";
    case Dim::concentration: return "ppm";
    case Dim::slope: return "rad2/us2";
  }
  return "";
}

// Canonical unit used by serialize(); conversion from it is the identity.
const char* internal_unit(Dim d) {
  switch (d) {
    case Dim::frequency: return "rad/us";
    case Dim::time: return "us";
    case Dim::angle: return "rad";
    case Dim::concentration: return "ppm";
    case Dim::slope: return "rad2/us2";
  }
  return "";
}

double convert(double v, const std::string& unit, Dim d, const std::string& key) {
  switch (d) {
    case Dim::frequency:
      if (unit == "MHz") return mhz(v);
      if (unit == "kHz") return khz(v);
      if (unit == "rad/us") return v;
      break;
    case Dim::time:
      if (unit == "ns") return ns(v);
      if (unit == "us") return v;
      if (unit == "ms") return v * 1e3;
      break;
    case Dim::angle:
      if (unit == "rad") return v;
      if (unit == "pi") return v * pi;
      if (unit == "deg") return v * pi / 180.0;
      break;
    case Dim::concentration:
      if (unit == "ppm") return v;
      break;
    case Dim::slope:
      if (unit == "rad2/us2") return v;
      break;
  }
  throw ConfigError(key, "unit '" + unit + "' not accepted here; expected " + expected_units(d));
}

// "body unit" -> (body, unit). A missing unit is an error, never a default.
std::pair<std::string, std::string> split_unit(const std::string& raw, Dim d,
                                               const std::string& key) {
  const std::string s = trim(raw);
  const auto sp = s.find_last_of(" \t");
  const std::string unit = sp == std::string::npos ? s : s.substr(sp + 1);
  if (sp == std::string::npos || is_number(unit) || unit.find_first_of("),") != std::string::npos)
    throw ConfigError(key, "missing unit in '" + s + "'; expected " + expected_units(d));
  return {trim(s.substr(0, sp)), unit};
}

double parse_quantity(const std::string& raw, Dim d, const std::string& key) {
  auto [body, unit] = split_unit(raw, d, key);
  return convert(parse_number(body, key), unit, d, key);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_list(const std::string& raw, Dim d, const std::string& key) {
  auto [body, unit] = split_unit(raw, d, key);
  std::vector<double> v;
  if (body.rfind("linspace(", 0) == 0 && body.back() == ')') {
    const auto args = split_commas(body.substr(9, body.size() - 10));
    if (args.size() != 3) throw ConfigError(key, "linspace takes (start, stop, count)");
    const double a = parse_number(args[0], key), b = parse_number(args[1], key);
    const auto n = parse_integer<std::size_t>(args[2], key);
    if (n < 1) throw ConfigError(key, "linspace count must be >= 1");
    for (std::size_t i = 0; i < n; ++i)
      v.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  } else {
    for (const auto& item : split_commas(body)) v.push_back(parse_number(item, key));
  }
  if (v.empty()) throw ConfigError(key, "empty list");
  for (auto& x : v) x = convert(x, unit, d, key);
  return v;
}

std::string quantity_text(double v, Dim d) { return format_double(v) + " " + internal_unit(d); }

std::string list_text(const std::vector<double>& v, Dim d) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_double(v[i]);
  }
  return s + " " + internal_unit(d);
}

// Strict view of one INI section: every key must be consumed.
class Section {
 public:
  Section(const ptree& root, std::string name) : name_(std::move(name)) {
    if (auto child = root.get_child_optional(name_)) pt_ = &*child;
  }

  bool present() const { return pt_ != nullptr; }
  bool empty() const { return !pt_ || pt_->empty(); }
  std::string key(const std::string& k) const { return name_ + "." + k; }

  std::optional<std::string> get(const std::string& k) {
    allowed_.insert(k);
    if (!pt_) return std::nullopt;
    auto v = pt_->get_optional<std::string>(k);
    if (v) return trim(*v);
    return std::nullopt;
  }

  std::string require(const std::string& k) {
    auto v = get(k);
    if (!v) throw ConfigError(key(k), "required key missing");
    return *v;
  }

  void finish() const {
    if (!pt_) return;
    for (const auto& [k, v] : *pt_) {
      if (!v.empty()) throw ConfigError(key(k), "nested keys are not supported");
      if (!allowed_.count(k)) throw ConfigError(key(k), "unknown key");
    }
  }

 private:
  std::string name_;
  const ptree* pt_ = nullptr;
  std::set<std::string> allowed_;
};

ptree read_tree(const std::string& text) {
  ptree pt;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  static const std::set<std::string> sections{"ensemble", "sequence", "analysis", "output"};
  for (const auto& [k, v] : pt) {
    if (!v.data().empty()) throw ConfigError(k, "key outside any section");
    if (!sections.count(k)) throw ConfigError(k, "unknown section");
  }
  return pt;
}

void parse_ensemble(Section s, EnsembleSpec& e) {
  if (auto v = s.get("n_realizations")) e.n_realizations = parse_integer<std::size_t>(*v, s.key("n_realizations"));
  if (auto v = s.get("master_seed")) e.master_seed = parse_integer<std::uint64_t>(*v, s.key("master_seed"));
  if (auto v = s.get("n_spins")) e.n_spins = parse_integer<std::size_t>(*v, s.key("n_spins"));
  if (auto v = s.get("concentration")) e.ppm = parse_quantity(*v, Dim::concentration, s.key("concentration"));
  if (auto v = s.get("W")) e.W = parse_quantity(*v, Dim::frequency, s.key("W"));
  if (auto v = s.get("eta_pol")) e.eta_pol = parse_number(*v, s.key("eta_pol"));
  if (auto v = s.get("pulse_mode")) {
    if (*v == "ideal") e.pulse_mode = PulseMode::ideal;
    else if (*v == "finite") e.pulse_mode = PulseMode::finite;
    else throw ConfigError(s.key("pulse_mode"), "expected ideal or finite");
  }
  if (auto v = s.get("t_p")) e.t_p = parse_quantity(*v, Dim::time, s.key("t_p"));
  if (auto v = s.get("alpha_B")) e.alpha_B = parse_number(*v, s.key("alpha_B"));
  if (auto v = s.get("spin_cap")) e.spin_cap = parse_integer<std::size_t>(*v, s.key("spin_cap"));
  s.finish();
}

void parse_sequence(Section s, RunConfig& c) {
  if (s.empty()) throw ConfigError("sequence", "empty sequence block");
  const std::string type = s.require("type");
  auto time = [&](const std::string& k) { return parse_quantity(s.require(k), Dim::time, s.key(k)); };
  auto opt = [&](const std::string& k, Dim d, double fallback) {
    auto v = s.get(k);
    return v ? parse_quantity(*v, d, s.key(k)) : fallback;
  };
  auto count = [&](int fallback) {
    auto v = s.get("k");
    return v ? parse_integer<int>(*v, s.key("k")) : fallback;
  };
  auto grid = [&](bool required) {
    auto v = required ? std::optional<std::string>(s.require("grid")) : s.get("grid");
    if (v) c.grid = parse_list(*v, Dim::time, s.key("grid"));
  };
  if (type == "ramsey") {
    c.sequence = Ramsey{};
    grid(true);
  } else if (type == "spin-echo") {
    c.sequence = SpinEcho{};
    grid(true);
  } else if (type == "eps-cpmg") {
    EpsCpmg q;
    q.tau = time("tau");
    q.epsilon = opt("epsilon", Dim::angle, 0.0);
    q.k = count(1);
    c.sequence = q;
  } else if (type == "wahuha-echo") {
    WahuhaEcho q;
    q.tau = time("tau");
    q.k = count(1);
    c.sequence = q;
  } else if (type == "spin-lock") {
    SpinLock q;
    q.omega_y = parse_quantity(s.require("omega_y"), Dim::frequency, s.key("omega_y"));
    q.T = time("T");
    c.sequence = q;
    grid(false);
  } else if (type == "dtc-floquet") {
    DtcFloquet q;
    q.tau = opt("tau", Dim::time, 0.0);
    q.epsilon = opt("epsilon", Dim::angle, 0.0);
    q.k = count(q.k);
    q.phi = opt("phi", Dim::angle, q.phi);
    q.omega_y = opt("omega_y", Dim::frequency, q.omega_y);
    c.sequence = q;
  } else {
    throw ConfigError(s.key("type"), "unknown sequence type '" + type + "'");
  }
  s.finish();
}

Dim sweep_dim(const std::string& param, const std::string& key) {
  if (param == "epsilon" || param == "phi") return Dim::angle;
  if (param == "tau") return Dim::time;
  if (param == "ppm") return Dim::concentration;
  throw ConfigError(key, "cannot sweep '" + param + "'");
}

void parse_analysis(Section s, AnalysisOptions& a) {
  if (auto v = s.get("fit_model")) {
    if (*v == "none") a.fit = false;
    else {
      try {
        a.fit_model = decay_model_from_string(*v);
      } catch (const InvalidArgument& e) {
        throw ConfigError(s.key("fit_model"), e.what());
      }
    }
  }
  if (auto v = s.get("threshold")) a.threshold = parse_number(*v, s.key("threshold"));
  if (auto v = s.get("spectrum_input")) {
    if (*v == "signed") a.spectrum_input = SpectrumInput::signed_series;
    else if (*v == "contrast") a.spectrum_input = SpectrumInput::contrast;
    else throw ConfigError(s.key("spectrum_input"), "expected signed or contrast");
  }
  if (auto v = s.get("rescale_polarization")) a.rescale_polarization = parse_bool(*v, s.key("rescale_polarization"));
  if (auto v = s.get("dtc_taus")) a.dtc_taus = parse_list(*v, Dim::time, s.key("dtc_taus"));
  if (auto v = s.get("dtc_epsilons")) a.dtc_epsilons = parse_list(*v, Dim::angle, s.key("dtc_epsilons"));
  auto param = s.get("sweep_param");
  auto values = s.get("sweep_values");
  if (param) a.sweep_param = *param;
  if (values) {
    if (!param) throw ConfigError(s.key("sweep_values"), "sweep_values needs sweep_param");
    if (a.sweep_param == "eta_pol") {
      for (const auto& item : split_commas(*values))
        a.sweep_values.push_back(parse_number(item, s.key("sweep_values")));
    } else {
      a.sweep_values = parse_list(*values, sweep_dim(a.sweep_param, s.key("sweep_param")),
                                  s.key("sweep_values"));
    }
  }
  if (auto v = s.get("target_slope")) a.target_slope = parse_quantity(*v, Dim::slope, s.key("target_slope"));
  if (auto v = s.get("calibrate_range")) {
    const auto r = parse_list(*v, Dim::concentration, s.key("calibrate_range"));
    if (r.size() != 2) throw ConfigError(s.key("calibrate_range"), "expected two values");
    a.calibrate_lo = r[0];
    a.calibrate_hi = r[1];
  }
  s.finish();
}

void parse_output(Section s, OutputOptions& o) {
  if (auto v = s.get("prefix")) o.prefix = *v;
  if (auto v = s.get("json")) o.json = parse_bool(*v, s.key("json"));
  if (auto v = s.get("overlay")) o.overlay = *v;
  s.finish();
}

RunConfig from_tree(const ptree& pt) {
  RunConfig c;
  parse_ensemble(Section(pt, "ensemble"), c.ensemble);
  parse_sequence(Section(pt, "sequence"), c);
  parse_analysis(Section(pt, "analysis"), c.analysis);
  parse_output(Section(pt, "output"), c.output);
  validate(c);
  return c;
}

}  // namespace

void validate(const RunConfig& c) {
  try {
    c.ensemble.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("ensemble", e.what());
  }
  try {
    validate(with_pulse_mode(c.sequence, c.ensemble));
  } catch (const Error& e) {
    throw ConfigError("sequence", e.what());
  }
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    if (!(c.grid[i] >= 0.0)) throw ConfigError("sequence.grid", "times must be >= 0");
    if (i && !(c.grid[i] > c.grid[i - 1]))
      throw ConfigError("sequence.grid", "times must be strictly increasing");
  }
  const auto& a = c.analysis;
  if (!(a.threshold > 0.0 && a.threshold <= 1.0))
    throw ConfigError("analysis.threshold", "must lie in (0, 1]");
  for (double t : a.dtc_taus)
    if (!(t >= 0.0)) throw ConfigError("analysis.dtc_taus", "must be >= 0");
  if (!a.sweep_param.empty()) {
    static const std::set<std::string> params{"epsilon", "tau", "phi", "eta_pol", "ppm"};
    if (!params.count(a.sweep_param))
      throw ConfigError("analysis.sweep_param", "cannot sweep '" + a.sweep_param + "'");
  }
  if (a.rescale_polarization && !(c.ensemble.eta_pol > 0.5))
    throw ConfigError("analysis.rescale_polarization", "rescaling needs eta_pol > 0.5");
  if (!(a.target_slope >= 0.0)) throw ConfigError("analysis.target_slope", "must be >= 0");
  if (!(a.calibrate_lo > 0.0 && a.calibrate_hi > a.calibrate_lo))
    throw ConfigError("analysis.calibrate_range", "need 0 < lo < hi");
  if (c.output.prefix.empty() || c.output.prefix.find('/') != std::string::npos)
    throw ConfigError("output.prefix", "must be a non-empty file name stem");
}

RunConfig parse_config_string(const std::string& text) { return from_tree(read_tree(text)); }

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

RunConfig parse_config_layered(const std::string& base, const std::string& overlay) {
  ptree pt = read_tree(base);
  const ptree over = read_tree(overlay);
  for (const auto& [section, keys] : over) {
    // A new sequence type brings its own key set.
    if (section == "sequence" && keys.get_optional<std::string>("type")) pt.erase("sequence");
    for (const auto& [k, v] : keys) pt.put(ptree::path_type(section + "." + k, '.'), v.data());
  }
  return from_tree(pt);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream o;
  const auto& e = c.ensemble;
  o << "[ensemble]\n"
    << "n_realizations = " << e.n_realizations << "\n"
    << "master_seed = " << e.master_seed << "\n"
    << "n_spins = " << e.n_spins << "\n"
    << "concentration = " << quantity_text(e.ppm, Dim::concentration) << "\n"
    << "W = " << quantity_text(e.W, Dim::frequency) << "\n"
    << "eta_pol = " << format_double(e.eta_pol) << "\n"
    << "pulse_mode = " << (e.pulse_mode == PulseMode::finite ? "finite" : "ideal") << "\n"
    << "t_p = " << quantity_text(e.t_p, Dim::time) << "\n"
    << "alpha_B = " << format_double(e.alpha_B) << "\n"
    << "spin_cap = " << e.spin_cap << "\n";

  o << "\n[sequence]\ntype = " << sequence_name(c.sequence) << "\n";
  std::visit(
      [&](const auto& q) {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, EpsCpmg>) {
          o << "tau = " << quantity_text(q.tau, Dim::time) << "\n"
            << "epsilon = " << quantity_text(q.epsilon, Dim::angle) << "\n"
            << "k = " << q.k << "\n";
        } else if constexpr (std::is_same_v<T, WahuhaEcho>) {
          o << "tau = " << quantity_text(q.tau, Dim::time) << "\n"
            << "k = " << q.k << "\n";
        } else if constexpr (std::is_same_v<T, SpinLock>) {
          o << "omega_y = " << quantity_text(q.omega_y, Dim::frequency) << "\n"
            << "T = " << quantity_text(q.T, Dim::time) << "\n";
        } else if constexpr (std::is_same_v<T, DtcFloquet>) {
          o << "tau = " << quantity_text(q.tau, Dim::time) << "\n"
            << "epsilon = " << quantity_text(q.epsilon, Dim::angle) << "\n"
            << "k = " << q.k << "\n"
            << "phi = " << quantity_text(q.phi, Dim::angle) << "\n"
            << "omega_y = " << quantity_text(q.omega_y, Dim::frequency) << "\n";
        }
      },
      c.sequence);
  if (!c.grid.empty()) o << "grid = " << list_text(c.grid, Dim::time) << "\n";

  const auto& a = c.analysis;
  o << "\n[analysis]\n"
    << "fit_model = " << (a.fit ? to_string(a.fit_model) : std::string("none")) << "\n"
    << "threshold = " << format_double(a.threshold) << "\n"
    << "spectrum_input = " << (a.spectrum_input == SpectrumInput::contrast ? "contrast" : "signed") << "\n"
    << "rescale_polarization = " << (a.rescale_polarization ? "true" : "false") << "\n";
  if (!a.dtc_taus.empty()) o << "dtc_taus = " << list_text(a.dtc_taus, Dim::time) << "\n";
  if (!a.dtc_epsilons.empty()) o << "dtc_epsilons = " << list_text(a.dtc_epsilons, Dim::angle) << "\n";
  if (!a.sweep_param.empty()) o << "sweep_param = " << a.sweep_param << "\n";
  if (!a.sweep_values.empty()) {
    if (a.sweep_param == "eta_pol") {
      o << "sweep_values = ";
      for (std::size_t i = 0; i < a.sweep_values.size(); ++i)
        o << (i ? ", " : "") << format_double(a.sweep_values[i]);
      o << "\n";
    } else {
      o << "sweep_values = " << list_text(a.sweep_values, sweep_dim(a.sweep_param, "")) << "\n";
    }
  }
  o << "target_slope = " << quantity_text(a.target_slope, Dim::slope) << "\n"
    << "calibrate_range = " << list_text({a.calibrate_lo, a.calibrate_hi}, Dim::concentration) << "\n";

  o << "\n[output]\nprefix = " << c.output.prefix << "\n"
    << "json = " << (c.output.json ? "true" : "false") << "\n";
  if (!c.output.overlay.empty()) o << "overlay = " << c.output.overlay << "\n";
  return o.str();
}

std::string normalize(const std::string& text) { return serialize(parse_config_string(text)); }

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> preset_names() { return {"small-J", "large-J"}; }

std::string preset_text(const std::string& name) {
  auto make = [](const char* ppm, const char* tmax, const std::string& prefix) {
    return std::string("[ensemble]\nn_realizations = 500\nmaster_seed = 1\nn_spins = 9\n") +
           "concentration = " + ppm + " ppm\nW = 0.65 MHz\neta_pol = 1\n\n" +
           "[sequence]\ntype = spin-echo\ngrid = linspace(0, " + tmax + ", 41) us\n\n" +
           "[analysis]\nfit_model = stretched\n\n[output]\nprefix = " + prefix + "\n";
  };
  if (name == "small-J") return make("25", "8", "small-J");
  if (name == "large-J") return make("46", "5", "large-J");
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

}  // namespace xysim
