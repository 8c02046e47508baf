#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "xysim/errors.hpp"
#include "xysim/io.hpp"

using namespace xysim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / "xysim-io-test";
  fs::create_directories(d);
  return d / name;
}

ExperimentSeries parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment(in);
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("trace CSV layout and round-trip precision") {
    TraceStats t;
    t.times = {0.0, 0.1, 1.0 / 3.0};
    t.mean = {1.0, 0.123456789012345678, -2.0 / 7.0};
    t.stderr_ = {0.0, 1e-17, std::numeric_limits<double>::quiet_NaN()};
    t.n_realizations = 2;
    const auto p = scratch("trace.csv");
    write_trace_csv(p.string(), t);
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    CHECK(line == "time_us,coherence_mean,coherence_stderr");
    for (std::size_t i = 0; i < 3; ++i) {
      std::getline(in, line);
      const auto a = line.find(','), b = line.rfind(',');
      CHECK(std::strtod(line.substr(0, a).c_str(), nullptr) == t.times[i]);
      CHECK(std::strtod(line.substr(a + 1, b - a - 1).c_str(), nullptr) == t.mean[i]);
      if (i == 2) CHECK(b == line.size() - 1);
      else CHECK(std::strtod(line.substr(b + 1).c_str(), nullptr) == t.stderr_[i]);
    }
  }

  TEST_CASE("phase and boundary CSV headers") {
    PhaseDiagram d;
    d.taus = {0.0, 0.5};
    d.epsilons = {0.0, pi / 10};
    d.intensity = {{1.0, 0.2}, {0.9, 0.5}};
    d.boundary = {0.05, std::numeric_limits<double>::quiet_NaN()};
    d.reentrant = {false, false};
    write_phase_csv(scratch("p.csv").string(), d);
    write_boundary_csv(scratch("b.csv").string(), d);
    const auto phase = slurp(scratch("p.csv"));
    const auto bnd = slurp(scratch("b.csv"));
    CHECK(phase.rfind("tau_ns,epsilon_over_pi,s_half_sq\n", 0) == 0);
    CHECK(phase.find("500,0.1,0.5") != std::string::npos);
    CHECK(bnd.rfind("tau_ns,eps_star_over_pi\n", 0) == 0);
    CHECK(std::count(bnd.begin(), bnd.end(), '\n') == 2);
  }

  TEST_CASE("experiment ingest") {
    const auto a = parse("time_us,coherence,err\n0,1,0.01\n0.5,0.8,0.02\n1,0.6,0.02\n");
    CHECK(a.times.size() == 3);
    CHECK(a.values.size() == 3);
    CHECK(a.has_errors);
    CHECK(a.errors[1] == 0.02);

    const auto b = parse("time_us,coherence\n0,1\n2,0.4\n");
    CHECK_FALSE(b.has_errors);
    CHECK(b.errors.size() == 2);
    CHECK(std::isnan(b.errors[0]));

    try {
      parse("time_us,coherence\n0,1\n0.5,0.9\n0.5,0.8\n");
      FAIL("duplicate accepted");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
    CHECK_THROWS_AS(parse("time_us,coherence\n0,1\n1,abc\n"), ParseError);
    CHECK_THROWS_AS(parse("time_us,coherence\n0,1,0.1\n"), ParseError);
    CHECK_THROWS_AS(parse("t,c\n0,1\n"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
  }

  TEST_CASE("overlay puts simulation rows first") {
    TraceStats t;
    t.times = {0.0};
    t.mean = {1.0};
    t.stderr_ = {0.0};
    const auto e = parse("time_us,coherence\n0,0.9\n");
    write_overlay_csv(scratch("o.csv").string(), t, e);
    const auto s = slurp(scratch("o.csv"));
    CHECK(s.rfind("source,time_us,coherence,err\n", 0) == 0);
    CHECK(s.find("simulation") < s.find("experiment"));
  }

  TEST_CASE("records embed the configuration") {
    ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    const auto c = parse_config_string(preset_text("large-J"));
    const auto j = make_record(c, "simulate");
    CHECK(j["created_unix"] == 1700000000);
    CHECK(j["config_hash"] == config_hash(c));
    CHECK(parse_config_string(j["config"].get<std::string>()).ensemble.ppm == 46.0);
    CHECK(j["code_version"] == XYSIM_VERSION);
    TraceStats t;
    t.times = {0.0};
    t.mean = {1.0};
    t.stderr_ = {std::numeric_limits<double>::quiet_NaN()};
    CHECK(to_json(t)["coherence_stderr"][0].is_null());
    ::unsetenv("SOURCE_DATE_EPOCH");
  }
}
