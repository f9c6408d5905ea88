#include "doctest.h"

#include "qwm/error.hpp"
#include "qwm/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace qwm;
namespace fs = std::filesystem;

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;

const char* kQuantum = R"({
  "sequence": {"preset": "quantum", "omega1_over_2pi_mhz": 125, "omega2_over_2pi_mhz": 175},
  "spectrum": {"grid_size": 16, "max_mode": 5}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qwm_test_scenario_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST_CASE("defaults") {
  const auto cfg = parse_scenario(R"({"sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 50}})");
  CHECK(cfg.atom.gamma1 == doctest::Approx(kTwoPi * 20e6));
  CHECK(cfg.sequence.repetition_period == doctest::Approx(100e-9));
  CHECK(cfg.sequence.detuning == doctest::Approx(kTwoPi * 1e6));
  CHECK(cfg.sequence.segments[0].duration == doctest::Approx(2e-9));
  CHECK(cfg.sequence.segments[0].tones[0].rabi_amplitude == doctest::Approx(kTwoPi * 50e6));
  CHECK(cfg.spectrum.method == SpectrumMethod::PhaseGrid);
  CHECK(cfg.spectrum.max_mode == 9);
  CHECK(cfg.spectrum.grid_size == 64);
  CHECK(cfg.output.csv);
  CHECK(cfg.output.json);
  CHECK_FALSE(cfg.sweep);
  CHECK(cfg.warnings.empty());
}

TEST_CASE("resolved config parses to the same scenario") {
  for (const char* text : {kQuantum, R"({
      "atom": {"levels": 3},
      "sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 50},
      "sweep": {"parameter": "dt", "range_ns": {"start": 1, "stop": 3, "count": 5}}})"}) {
    const auto a = parse_scenario(text);
    const auto b = parse_scenario(a.resolved);
    CHECK(a.atom == b.atom);
    CHECK(a.sequence == b.sequence);
    CHECK(a.resolved == b.resolved);
    CHECK(a.spectrum.grid_size == b.spectrum.grid_size);
    CHECK(a.sweep.has_value() == b.sweep.has_value());
    if (a.sweep) CHECK(a.sweep->si_values == b.sweep->si_values);
  }
}

TEST_CASE("syntax errors carry line and column") {
  const auto msg = error_of("{\n  \"atom\": {,\n}");
  CHECK(msg.rfind("cfg:2:", 0) == 0);
}

TEST_CASE("validation errors carry the field path") {
  CHECK(error_of(R"({"sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": "x"}})")
            .find("sequence.omega_rabi_over_2pi_mhz") != std::string::npos);
  CHECK(error_of(R"({"atom": {"levle": 2}, "sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 1}})")
            .find("atom.levle") != std::string::npos);
  CHECK(error_of(R"({"sequence": {"preset": "classical"}})").find("omega_rabi_over_2pi_mhz") != std::string::npos);
  CHECK(error_of(R"({"sequence": {"preset": "squeezed"}})").find("sequence.preset") != std::string::npos);
  CHECK(error_of(R"({"sequnce": {}})").find("sequnce") != std::string::npos);
  CHECK(error_of(R"({"sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 1},
                    "spectrum": {"grid_size": 8}})")
            .find("spectrum.grid_size") != std::string::npos);
  CHECK(error_of(R"({"sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 1, "pulse_ns": 200}})")
            .find("sequence") != std::string::npos);
  CHECK(error_of("[1, 2]").find("object") != std::string::npos);
}

TEST_CASE("sweep errors") {
  const std::string seq = R"("sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 50})";
  CHECK_FALSE(error_of("{" + seq + R"(, "sweep": {"parameter": "omega_rabi", "values_over_2pi_mhz": []}})").empty());
  CHECK(error_of("{" + seq + R"(, "sweep": {"parameter": "omega1", "values_over_2pi_mhz": [1]}})")
            .find("classical") != std::string::npos);
  CHECK_FALSE(error_of("{" + seq + R"(, "sweep": {"parameter": "omega_rabi"}})").empty());
  CHECK_FALSE(error_of("{" + seq + R"(, "sweep": {"parameter": "dt", "values_over_2pi_mhz": [1]}})").empty());
  CHECK(error_of("{" + seq + R"(, "sweep": {"parameter": "omega_rabi", "range_over_2pi_mhz": {"start": 1, "count": 2}}})")
            .find("sweep.range_over_2pi_mhz.stop") != std::string::npos);
}

TEST_CASE("warnings") {
  const auto low = parse_scenario(R"({
    "sequence": {"preset": "quantum", "omega1_over_2pi_mhz": 125, "omega2_over_2pi_mhz": 175},
    "spectrum": {"max_mode": 2}})");
  REQUIRE(low.warnings.size() == 1);
  CHECK(low.warnings[0].find("max_mode") != std::string::npos);
  const auto fast = parse_scenario(R"({
    "sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 50, "detuning_over_2pi_mhz": 15}})");
  REQUIRE(fast.warnings.size() == 1);
  CHECK(fast.warnings[0].find("detuning") != std::string::npos);
}

TEST_CASE("run writes spectra and manifest") {
  const auto dir = scratch("single");
  const auto cfg = parse_scenario(kQuantum);
  const auto summary = run_scenario(cfg, {dir, 1});
  CHECK(fs::exists(dir / "spectrum.csv"));
  CHECK(fs::exists(dir / "spectrum.json"));
  REQUIRE(summary.peaks.size() == 1);
  CHECK(summary.peaks[0] == std::vector<int>{-1, 1, 3});
  CHECK(summary.physicality.within());

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest.at("tool") == "qwm");
  CHECK(manifest.at("version") == QWM_VERSION);
  CHECK(manifest.at("outputs").size() == 2);
  CHECK(manifest.at("config").at("atom").at("gamma1_over_2pi_mhz") == 20);

  // Same config, different thread count: byte-identical files.
  const auto again = scratch("single_again");
  run_scenario(cfg, {again, 3});
  for (const char* f : {"spectrum.csv", "spectrum.json", "manifest.json"}) CHECK(slurp(dir / f) == slurp(again / f));

  // The manifest alone reproduces the run.
  const auto replay = scratch("single_replay");
  run_scenario(parse_scenario(manifest.at("config").dump()), {replay, 2});
  CHECK(slurp(dir / "spectrum.json") == slurp(replay / "spectrum.json"));
}

TEST_CASE("sweep run writes one spectrum per point and a table") {
  const auto dir = scratch("sweep");
  const auto cfg = parse_scenario(R"({
    "sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 50},
    "spectrum": {"grid_size": 16, "max_mode": 3},
    "sweep": {"parameter": "omega_rabi", "values_over_2pi_mhz": [10, 40, 80]},
    "output": {"formats": ["csv", "json"]}})");
  const auto summary = run_scenario(cfg, {dir, 0});
  CHECK(summary.peaks.size() == 3);
  for (const char* f : {"spectrum_0000.csv", "spectrum_0002.json", "sweep.csv", "sweep.json"})
    CHECK(fs::exists(dir / f));
  std::istringstream table(slurp(dir / "sweep.csv"));
  std::string header;
  std::getline(table, header);
  CHECK(header == "omega_rabi_over_2pi_mhz,N_-3,N_-2,N_-1,N_0,N_1,N_2,N_3");
  std::string row;
  int rows = 0;
  while (std::getline(table, row)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("time trace method from config") {
  const auto cfg = parse_scenario(R"({
    "sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 100, "period_ns": 218.75},
    "spectrum": {"method": "time_trace", "max_mode": 3}})");
  CHECK(cfg.spectrum.method == SpectrumMethod::TimeTrace);
  CHECK(cfg.spectrum.n_periods == 32);
  CHECK(cfg.warnings.size() == 1);
  const auto summary = run_scenario(cfg, {scratch("trace"), 0});
  CAPTURE(summary.peaks[0].size());
  CHECK(summary.peaks[0] == std::vector<int>{-3, -1, 1, 3});
}

TEST_CASE("time trace sampling warnings") {
  const auto leaky = parse_scenario(R"({
    "sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 100, "period_ns": 218.75},
    "spectrum": {"method": "time_trace", "max_mode": 5, "n_periods": 8}})");
  REQUIRE(leaky.warnings.size() == 1);
  CHECK(leaky.warnings[0].find("non-integer") != std::string::npos);
  // 100 ns repetitions at 1 MHz see only 10 beat phases.
  const auto aliased = parse_scenario(R"({
    "sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 100},
    "spectrum": {"method": "time_trace"}})");
  REQUIRE(aliased.warnings.size() == 1);
  CHECK(aliased.warnings[0].find("alias") != std::string::npos);
  CHECK(aliased.spectrum.n_periods == 20);
}

TEST_CASE("I/O failures") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/qwm.json"), IoError);
  CHECK_THROWS_AS(run_scenario(parse_scenario(kQuantum), {fs::path("/proc/qwm_no_such_dir"), 0}), IoError);
}

TEST_CASE("shipped configs load") {
  for (const auto& entry : fs::directory_iterator(QWM_CONFIG_DIR)) {
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenario(entry.path()));
  }
}
