#pragma once

#include "qwm/atom.hpp"
#include "qwm/pulse.hpp"
#include "qwm/spectrum.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qwm {

enum class SpectrumMethod { PhaseGrid, TimeTrace };

struct SpectrumConfig {
  SpectrumMethod method = SpectrumMethod::PhaseGrid;
  int grid_size = 64;
  int max_mode = 9;
  double threshold = 1e-3;
  /// Repetitions for the time-trace method; 0 picks the smallest count
  /// covering one beat cycle.
  int n_periods = 0;
};

struct SweepConfig {
  SweepParameter parameter = SweepParameter::OmegaRabi;
  /// Values as written in the config (MHz for angular frequencies over 2 pi, ns for times).
  std::vector<double> values;
  /// Same values in rad/s or s.
  std::vector<double> si_values;
  /// Column name of the swept value, e.g. "omega_rabi_over_2pi_mhz".
  std::string column;
};

struct OutputConfig {
  std::filesystem::path directory = "qwm_out";
  bool csv = true;
  bool json = true;
};

/// A fully resolved scenario. `resolved` is the canonical JSON form with
/// every default filled in; feeding it back to parse_scenario gives the
/// same scenario.
struct ScenarioConfig {
  AtomSpec atom;
  PulseSequence sequence;
  std::string preset;
  SpectrumConfig spectrum;
  std::optional<SweepConfig> sweep;
  OutputConfig output;
  std::string resolved;
  std::vector<std::string> warnings;
};

/// Throws ConfigError with a line:column or field-path diagnostic.
ScenarioConfig parse_scenario(std::string_view text, std::string_view source_name = "config");
/// Throws IoError if the file cannot be read.
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  unsigned threads = 0;
};

struct RunSummary {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
  /// Detected peaks per sweep point (a single entry without a sweep).
  std::vector<std::vector<int>> peaks;
  PhysicalityReport physicality;
};

/// Computes every spectrum of the scenario and writes the spectra, the sweep
/// table and manifest.json. Outputs do not depend on the thread count.
/// Throws NumericalError if a state leaves the physical set, IoError if the
/// output cannot be written.
RunSummary run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace qwm
