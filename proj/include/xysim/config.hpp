#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xysim/dtc.hpp"
#include "xysim/ensemble.hpp"
#include "xysim/fit.hpp"
#include "xysim/sequences.hpp"

namespace xysim {

struct AnalysisOptions {
  bool fit = true;  // "none" disables
  DecayModel fit_model = DecayModel::stretched;
  double threshold = 0.4;
  SpectrumInput spectrum_input = SpectrumInput::signed_series;
  bool rescale_polarization = false;
  std::vector<double> dtc_taus;      // us
  std::vector<double> dtc_epsilons;  // rad
  std::string sweep_param;           // epsilon | tau | phi | eta_pol | ppm
  std::vector<double> sweep_values;  // internal units of the parameter
  double target_slope = 0.0;         // rad^2/us^2
  double calibrate_lo = 5.0;         // ppm
  double calibrate_hi = 200.0;       // ppm
};

struct OutputOptions {
  std::string prefix = "run";
  bool json = true;
  std::string overlay;  // experimental CSV to place next to the trace
};

struct RunConfig {
  EnsembleSpec ensemble;
  SequenceSpec sequence;
  std::vector<double> grid;  // us; Ramsey / spin-echo / spin-lock sample times
  AnalysisOptions analysis;
  OutputOptions output;
};

/// Parses an INI document with sections [ensemble] [sequence] [analysis] [output].
/// Dimensioned values carry a unit ("0.65 MHz", "300 ns", "-0.5 pi", "46 ppm");
/// lists are "a, b, c unit" or "linspace(a, b, n) unit". Throws ConfigError.
RunConfig parse_config_string(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Same, layered: keys in `overlay` replace those in `base`.
RunConfig parse_config_layered(const std::string& base, const std::string& overlay);

/// Canonical text in internal units (rad/us, us, rad, ppm); parse() of it is exact.
std::string serialize(const RunConfig& config);
std::string normalize(const std::string& text);

/// FNV-1a of serialize(config), as 16 hex digits.
std::string config_hash(const RunConfig& config);

std::vector<std::string> preset_names();
/// Built-in preset text ("small-J", "large-J"); throws ConfigError if unknown.
std::string preset_text(const std::string& name);

/// Range checks beyond parsing; ConfigError names the offending block.
void validate(const RunConfig& config);

}  // namespace xysim
