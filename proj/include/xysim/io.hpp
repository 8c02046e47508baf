#pragma once

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xysim/config.hpp"
#include "xysim/dtc.hpp"
#include "xysim/fit.hpp"
#include "xysim/stats.hpp"

namespace xysim {

// CSV numbers use the shortest text that round-trips; a NaN standard error
// (single realization) is written as an empty field.
void write_trace_csv(const std::string& path, const TraceStats& trace);
void write_phase_csv(const std::string& path, const PhaseDiagram& diagram);
/// Rows only for taus with a finite eps*.
void write_boundary_csv(const std::string& path, const PhaseDiagram& diagram);
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

struct ExperimentSeries {
  std::vector<double> times;   // us
  std::vector<double> values;
  std::vector<double> errors;  // NaN where absent
  bool has_errors = false;
};

/// Header "time_us,coherence[,err]". Throws ParseError with the 1-based line.
ExperimentSeries parse_experiment(std::istream& in);
ExperimentSeries ingest_experiment(const std::string& path);

/// Long format "source,time_us,coherence,err" with simulation rows first.
void write_overlay_csv(const std::string& path, const TraceStats& trace,
                       const ExperimentSeries& experiment);

using Json = nlohmann::ordered_json;

/// Record skeleton: full config text, its hash, code version and a creation
/// time taken from SOURCE_DATE_EPOCH when set.
Json make_record(const RunConfig& config, const std::string& command);
Json to_json(const TraceStats& trace);
Json to_json(const PhaseDiagram& diagram);
Json to_json(const FitResult& fit);
void write_json(const std::string& path, const Json& record);

}  // namespace xysim
