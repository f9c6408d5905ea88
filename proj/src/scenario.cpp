#include "qwm/scenario.hpp"

#include "qwm/error.hpp"
#include "qwm/serialize.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <numbers>
#include <set>
#include <sstream>

namespace qwm {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMHz = 1e6;
constexpr double kNs = 1e-9;

double mhz_to_rad_s(double f) { return kTwoPi * f * kMHz; }

// Reads one JSON object, tracking consumed keys so typos are reported, and
// records every resolved value (defaults included) into `resolved`.
class Section {
public:
  Section(const Json& parent, const std::string& key, std::string path, Json& resolved)
      : path_(std::move(path)), resolved_(resolved) {
    if (parent.contains(key)) {
      node_ = &parent.at(key);
      if (!node_->is_object()) fail("", "must be an object");
    }
  }

  bool present() const { return node_ != nullptr; }
  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const Json* v = lookup(key);
    double x;
    if (!v) {
      if (!fallback) fail(key, "is required");
      x = *fallback;
    } else {
      if (!v->is_number()) fail(key, "must be a number");
      x = v->get<double>();
    }
    if (!std::isfinite(x)) fail(key, "must be finite");
    resolved_[key] = x;
    return x;
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    const Json* v = lookup(key);
    int x;
    if (!v) {
      if (!fallback) fail(key, "is required");
      x = *fallback;
    } else {
      if (!v->is_number_integer()) fail(key, "must be an integer");
      x = v->get<int>();
    }
    resolved_[key] = x;
    return x;
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const Json* v = lookup(key);
    std::string x;
    if (!v) {
      if (!fallback) fail(key, "is required");
      x = *fallback;
    } else {
      if (!v->is_string()) fail(key, "must be a string");
      x = v->get<std::string>();
    }
    resolved_[key] = x;
    return x;
  }

  std::vector<double> numbers(const std::string& key) {
    const Json* v = lookup(key);
    if (!v) fail(key, "is required");
    if (!v->is_array()) fail(key, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) fail(key, "must contain only finite numbers");
      out.push_back(e.get<double>());
    }
    resolved_[key] = out;
    return out;
  }

  std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) {
    const Json* v = lookup(key);
    std::vector<std::string> out;
    if (!v) {
      out = std::move(fallback);
    } else {
      if (!v->is_array()) fail(key, "must be an array of strings");
      for (const auto& e : *v) {
        if (!e.is_string()) fail(key, "must contain only strings");
        out.push_back(e.get<std::string>());
      }
    }
    resolved_[key] = out;
    return out;
  }

  const Json* raw(const std::string& key) { return lookup(key); }

  /// Rejects keys that were never read.
  void finish() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items())
      if (!used_.contains(key)) fail(key, "is not a recognized key");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(path_ + (key.empty() ? "" : "." + key) + ": " + what);
  }

private:
  const Json* lookup(const std::string& key) {
    used_.insert(key);
    if (!node_ || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }

  std::string path_;
  Json& resolved_;
  const Json* node_ = nullptr;
  std::set<std::string> used_;
};

struct BeatCoverage {
  bool whole = false;
  double cycles = 0.0;
  long distinct_phases = 0;
};

// How n repetitions sample the beat: whole cycles and distinct phases.
BeatCoverage coverage(int n, double d_omega, double t_r) {
  BeatCoverage c;
  c.cycles = n * d_omega * t_r / kTwoPi;
  const long k = std::lround(c.cycles);
  c.whole = k > 0 && std::abs(c.cycles - k) < 1e-9 * std::max(1.0, c.cycles);
  c.distinct_phases = c.whole ? n / std::gcd(static_cast<long>(n), k) : n;
  return c;
}

// Smallest count from `lower` spanning whole beat cycles with enough distinct
// phases; `lower` itself when none exists below 4096.
int default_periods(int lower, int needed_phases, double d_omega, double t_r) {
  for (int n = lower; n <= 4096; ++n) {
    const auto c = coverage(n, d_omega, t_r);
    if (c.whole && c.distinct_phases >= needed_phases) return n;
  }
  return lower;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text, std::string_view source_name) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(std::string(source_name) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) throw ConfigError(std::string(source_name) + ": top level must be a JSON object");

  ScenarioConfig cfg;
  Json resolved;
  const std::set<std::string> sections{"atom", "sequence", "spectrum", "sweep", "output"};
  for (const auto& [key, value] : doc.items())
    if (!sections.contains(key)) throw ConfigError(key + ": is not a recognized section");

  try {
    // atom
    Json atom_json = Json::object();
    Section atom_s(doc, "atom", "atom", atom_json);
    cfg.atom.levels = atom_s.integer("levels", 2);
    if (cfg.atom.levels != 2 && cfg.atom.levels != 3) atom_s.fail("levels", "must be 2 or 3");
    if (atom_s.has("transition_elements")) {
      cfg.atom.transition_elements = atom_s.numbers("transition_elements");
    } else {
      cfg.atom.transition_elements.assign(1, 1.0);
      if (cfg.atom.levels == 3) cfg.atom.transition_elements.push_back(std::sqrt(2.0));
      atom_json["transition_elements"] = cfg.atom.transition_elements;
    }
    cfg.atom.gamma1 = mhz_to_rad_s(atom_s.number("gamma1_over_2pi_mhz", 20.0));
    cfg.atom.gamma_phi = mhz_to_rad_s(atom_s.number("gamma_phi_over_2pi_mhz", 0.0));
    try {
      cfg.atom.validate();
    } catch (const InvalidArgument& e) {
      atom_s.fail("", e.what());
    }
    atom_s.finish();
    resolved["atom"] = atom_json;

    // sequence
    Json seq_json = Json::object();
    Section seq_s(doc, "sequence", "sequence", seq_json);
    if (!seq_s.present()) throw ConfigError("sequence: section is required");
    cfg.preset = seq_s.string("preset");
    const double default_detuning_mhz = cfg.atom.gamma1 / kTwoPi / kMHz / 20.0;
    try {
      if (cfg.preset == "classical") {
        const double omega = mhz_to_rad_s(seq_s.number("omega_rabi_over_2pi_mhz"));
        const double dt = seq_s.number("pulse_ns", 2.0) * kNs;
        const double t_r = seq_s.number("period_ns", 100.0) * kNs;
        const double dw = mhz_to_rad_s(seq_s.number("detuning_over_2pi_mhz", default_detuning_mhz));
        cfg.sequence = preset_classical(omega, dt, t_r, dw);
      } else if (cfg.preset == "quantum") {
        const double omega1 = mhz_to_rad_s(seq_s.number("omega1_over_2pi_mhz"));
        const double omega2 = mhz_to_rad_s(seq_s.number("omega2_over_2pi_mhz"));
        const double dt1 = seq_s.number("pulse1_ns", 2.0) * kNs;
        const double dt2 = seq_s.number("pulse2_ns", 2.0) * kNs;
        const double gap = seq_s.number("gap_ns", 0.0) * kNs;
        const double t_r = seq_s.number("period_ns", 100.0) * kNs;
        const double dw = mhz_to_rad_s(seq_s.number("detuning_over_2pi_mhz", default_detuning_mhz));
        const int first = seq_s.integer("first_tone", -1);
        cfg.sequence = preset_quantum(omega1, omega2, dt1, dt2, gap, t_r, dw, first);
      } else {
        seq_s.fail("preset", "unknown preset '" + cfg.preset + "' (expected 'classical' or 'quantum')");
      }
    } catch (const InvalidArgument& e) {
      seq_s.fail("", e.what());
    }
    seq_s.finish();
    resolved["sequence"] = seq_json;

    // spectrum
    Json spec_json = Json::object();
    Section spec_s(doc, "spectrum", "spectrum", spec_json);
    const auto method = spec_s.string("method", "phase_grid");
    if (method == "phase_grid")
      cfg.spectrum.method = SpectrumMethod::PhaseGrid;
    else if (method == "time_trace")
      cfg.spectrum.method = SpectrumMethod::TimeTrace;
    else
      spec_s.fail("method", "must be 'phase_grid' or 'time_trace'");
    cfg.spectrum.max_mode = spec_s.integer("max_mode", 9);
    if (cfg.spectrum.max_mode < 0) spec_s.fail("max_mode", "must be >= 0");
    cfg.spectrum.grid_size = spec_s.integer("grid_size", std::max(64, 2 * cfg.spectrum.max_mode + 2));
    if (cfg.spectrum.grid_size < 2 * cfg.spectrum.max_mode + 2)
      spec_s.fail("grid_size", "must be at least 2 * max_mode + 2 = " + std::to_string(2 * cfg.spectrum.max_mode + 2));
    cfg.spectrum.threshold = spec_s.number("threshold", 1e-3);
    if (!(cfg.spectrum.threshold > 0.0 && cfg.spectrum.threshold < 1.0)) spec_s.fail("threshold", "must lie in (0, 1)");
    const int min_periods = static_cast<int>(
        std::ceil(kTwoPi / (cfg.sequence.detuning * cfg.sequence.repetition_period) - 1e-9));
    const int needed = 2 * cfg.spectrum.max_mode + 2;
    cfg.spectrum.n_periods =
        spec_s.integer("n_periods", default_periods(std::max(min_periods, needed), needed, cfg.sequence.detuning,
                                                     cfg.sequence.repetition_period));
    if (cfg.spectrum.n_periods < min_periods)
      spec_s.fail("n_periods", "must cover one beat cycle (at least " + std::to_string(min_periods) + ")");
    spec_s.finish();
    resolved["spectrum"] = spec_json;

    // sweep
    if (doc.contains("sweep")) {
      Json sweep_json = Json::object();
      Section sweep_s(doc, "sweep", "sweep", sweep_json);
      SweepConfig sweep;
      const auto name = sweep_s.string("parameter");
      try {
        sweep.parameter = parse_sweep_parameter(name);
      } catch (const InvalidArgument& e) {
        sweep_s.fail("parameter", e.what());
      }
      const bool is_time = sweep.parameter == SweepParameter::Dt;
      const std::string unit = is_time ? "ns" : "over_2pi_mhz";
      const std::string values_key = "values_" + unit;
      const std::string range_key = "range_" + unit;
      if (sweep_s.has(values_key) == sweep_s.has(range_key))
        sweep_s.fail("", "exactly one of '" + values_key + "' or '" + range_key + "' is required");
      if (sweep_s.has(values_key)) {
        sweep.values = sweep_s.numbers(values_key);
      } else {
        Json range_json = Json::object();
        sweep_s.raw(range_key);
        Section range_s(doc.at("sweep"), range_key, "sweep." + range_key, range_json);
        const double start = range_s.number("start");
        const double stop = range_s.number("stop");
        const int count = range_s.integer("count");
        if (count < 1) range_s.fail("count", "must be >= 1");
        range_s.finish();
        sweep_json[range_key] = range_json;
        for (int i = 0; i < count; ++i)
          sweep.values.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
      }
      if (sweep.values.empty()) sweep_s.fail(values_key, "must not be empty");
      for (double v : sweep.values) sweep.si_values.push_back(is_time ? v * kNs : mhz_to_rad_s(v));
      sweep.column = name + "_" + unit;
      sweep_s.finish();
      try {
        sweep_grid(cfg.sequence, sweep.parameter, sweep.si_values);
      } catch (const InvalidArgument& e) {
        sweep_s.fail("", e.what());
      }
      cfg.sweep = std::move(sweep);
      resolved["sweep"] = sweep_json;
    }

    // output
    Json out_json = Json::object();
    Section out_s(doc, "output", "output", out_json);
    cfg.output.directory = out_s.string("directory", "qwm_out");
    const auto formats = out_s.strings("formats", {"csv", "json"});
    cfg.output.csv = cfg.output.json = false;
    for (const auto& f : formats) {
      if (f == "csv")
        cfg.output.csv = true;
      else if (f == "json")
        cfg.output.json = true;
      else
        out_s.fail("formats", "unknown format '" + f + "' (expected 'csv' or 'json')");
    }
    if (!cfg.output.csv && !cfg.output.json) out_s.fail("formats", "must name at least one format");
    out_s.finish();
    resolved["output"] = out_json;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(source_name) + ": " + e.what());
  }

  if (auto w = cfg.sequence.detuning_warning(cfg.atom)) cfg.warnings.push_back(*w);
  if (cfg.spectrum.method == SpectrumMethod::TimeTrace) {
    const auto c = coverage(cfg.spectrum.n_periods, cfg.sequence.detuning, cfg.sequence.repetition_period);
    const auto n = std::to_string(cfg.spectrum.n_periods);
    if (!c.whole)
      cfg.warnings.push_back("spectrum.n_periods = " + n + " spans " + format_double(c.cycles) +
                             " beat cycles; a non-integer count leaks power between modes");
    else if (c.distinct_phases < 2 * cfg.spectrum.max_mode + 2)
      cfg.warnings.push_back("spectrum.n_periods = " + n + " samples only " + std::to_string(c.distinct_phases) +
                             " distinct beat phases; modes " + std::to_string(c.distinct_phases) +
                             " apart alias onto each other");
  }
  int expected = cfg.preset == "quantum" ? (cfg.atom.levels == 3 ? 5 : 3) : 5;
  if (cfg.spectrum.max_mode < expected)
    cfg.warnings.push_back("spectrum.max_mode = " + std::to_string(cfg.spectrum.max_mode) +
                           " is below the largest expected mode " + std::to_string(expected) + " for this preset");

  cfg.resolved = resolved.dump(2) + "\n";
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content, RunSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
  summary.files.push_back(path);
}

std::string point_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "spectrum_%04zu", index);
  return buf;
}

}  // namespace

RunSummary run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  RunSummary summary;
  summary.warnings = config.warnings;
  summary.directory = options.out_dir.value_or(config.output.directory);

  std::error_code ec;
  std::filesystem::create_directories(summary.directory, ec);
  if (ec || !std::filesystem::is_directory(summary.directory))
    throw IoError("cannot create output directory '" + summary.directory.string() + "'");

  std::vector<PulseSequence> sequences;
  if (config.sweep)
    sequences = sweep_grid(config.sequence, config.sweep->parameter, config.sweep->si_values);
  else
    sequences.push_back(config.sequence);

  EngineOptions engine;
  engine.threads = options.threads;
  engine.physicality = &summary.physicality;

  std::vector<ModeSpectrum> spectra;
  for (const auto& seq : sequences) {
    spectra.push_back(config.spectrum.method == SpectrumMethod::PhaseGrid
                          ? phase_grid_spectrum(config.atom, seq, config.spectrum.grid_size,
                                                config.spectrum.max_mode, engine)
                          : time_trace_spectrum(config.atom, seq, config.spectrum.n_periods,
                                                config.spectrum.max_mode, engine));
    summary.peaks.push_back(detect_peaks(spectra.back(), config.spectrum.threshold));
  }
  if (!summary.physicality.within())
    throw NumericalError("state left the physical set: trace error " +
                         format_double(summary.physicality.max_trace_error) + ", Hermiticity residual " +
                         format_double(summary.physicality.max_hermiticity_residual) + ", min eigenvalue " +
                         format_double(summary.physicality.min_eigenvalue));

  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto stem = config.sweep ? point_name(i) : std::string("spectrum");
    if (config.output.csv) write_file(summary.directory / (stem + ".csv"), spectrum_to_csv(spectra[i]), summary);
    if (config.output.json) write_file(summary.directory / (stem + ".json"), spectrum_to_json(spectra[i]), summary);
  }

  if (config.sweep) {
    const int mm = config.spectrum.max_mode;
    if (config.output.csv) {
      std::string table = config.sweep->column;
      for (int m = -mm; m <= mm; ++m) table += ",N_" + std::to_string(m);
      table += '\n';
      for (std::size_t i = 0; i < spectra.size(); ++i) {
        table += format_double(config.sweep->values[i]);
        for (int m = -mm; m <= mm; ++m) table += ',' + format_double(spectra[i].photons(m));
        table += '\n';
      }
      write_file(summary.directory / "sweep.csv", table, summary);
    }
    if (config.output.json) {
      Json table = Json::object();
      table["column"] = config.sweep->column;
      table["values"] = config.sweep->values;
      Json modes = Json::object();
      for (int m = -mm; m <= mm; ++m) {
        std::vector<double> col;
        for (const auto& s : spectra) col.push_back(s.photons(m));
        modes[std::to_string(m)] = col;
      }
      table["photons_per_cycle"] = modes;
      write_file(summary.directory / "sweep.json", table.dump(2) + "\n", summary);
    }
  }

  Json manifest = Json::object();
  manifest["tool"] = "qwm";
  manifest["version"] = QWM_VERSION;
  manifest["config"] = Json::parse(config.resolved);
  manifest["derived"] = {{"gamma1_rad_per_s", config.atom.gamma1},
                         {"gamma_phi_rad_per_s", config.atom.gamma_phi},
                         {"detuning_rad_per_s", config.sequence.detuning},
                         {"repetition_period_s", config.sequence.repetition_period}};
  manifest["peaks"] = summary.peaks;
  manifest["warnings"] = summary.warnings;
  Json outputs = Json::array();
  for (const auto& f : summary.files) outputs.push_back(f.filename().string());
  manifest["outputs"] = outputs;
  write_file(summary.directory / "manifest.json", manifest.dump(2) + "\n", summary);
  return summary;
}

}  // namespace qwm
