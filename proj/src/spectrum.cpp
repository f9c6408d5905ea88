#include "qwm/spectrum.hpp"

#include "qwm/error.hpp"
#include "qwm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qwm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class T>
T trapezoid(const std::vector<double>& t, const std::vector<T>& y) {
  T sum{};
  for (std::size_t k = 1; k < t.size(); ++k) sum += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
  return sum;
}

double max_transition_rate(const AtomSpec& atom) {
  double rate = atom.gamma_phi;
  for (std::size_t j = 0; j + 1 < atom.dim(); ++j) rate = std::max(rate, atom.transition_rate(j));
  return rate;
}

// Largest step for a segment: resolves decay, drive rotation, and gives
// every pulse at least min_pulse_steps samples.
double segment_step(const AtomSpec& atom, const PulseSegment& seg, const EngineOptions& opt) {
  double h = seg.duration;
  const double rate = max_transition_rate(atom);
  if (rate > 0.0) h = std::min(h, 1.0 / (opt.samples_per_lifetime * rate));
  if (!seg.is_free_decay()) {
    h = std::min(h, seg.duration / std::max(1, opt.min_pulse_steps));
    const double mu_max = *std::max_element(atom.transition_elements.begin(), atom.transition_elements.end());
    double drive = 0.0;
    for (const auto& tone : seg.tones) drive += tone.rabi_amplitude * mu_max;
    if (drive > 0.0) h = std::min(h, opt.max_rotation_per_step / drive);
  }
  return h;
}

// Runs all segments of one repetition starting from rho0. When `drifting`,
// the beat phase advances as d_omega * (t_start + t); otherwise it is frozen
// at `beat_phase`.
Trajectory run_repetition(const AtomSpec& atom, const PulseSequence& seq, const DensityMatrix& rho0, double beat_phase,
                          bool drifting, double t_start, const EngineOptions& opt) {
  Trajectory out{{0.0, rho0}};
  double t = 0.0;
  for (const auto& seg : seq.segments) {
    if (seg.duration == 0.0) continue;
    const double h = segment_step(atom, seg, opt);
    const auto& rho = out.back().rho;
    Trajectory part = drifting ? evolve_drifting(atom, seg.tones, seq.detuning * (t_start + t), seq.detuning, rho,
                                                 seg.duration, h)
                               : evolve(atom, seg.tones, beat_phase, rho, seg.duration, h);
    for (std::size_t k = 1; k < part.size(); ++k) out.push_back({t + part[k].time, std::move(part[k].rho)});
    t += seg.duration;
  }
  return out;
}

double emission_rate(const AtomSpec& atom, const DensityMatrix& rho) {
  double rate = 0.0;
  for (std::size_t j = 0; j + 1 < atom.dim(); ++j) rate += atom.transition_rate(j) * rho.population(j + 1);
  return rate;
}

struct RepetitionSamples {
  std::vector<double> times;
  std::vector<Complex> amplitude;
  std::vector<double> emission_rate;
};

RepetitionSamples sample(const AtomSpec& atom, const Trajectory& traj, PhysicalityReport* report) {
  RepetitionSamples s;
  s.times.reserve(traj.size());
  s.amplitude.reserve(traj.size());
  s.emission_rate.reserve(traj.size());
  for (const auto& p : traj) {
    s.times.push_back(p.time);
    s.amplitude.push_back(emission_amplitude(atom, p.rho));
    s.emission_rate.push_back(emission_rate(atom, p.rho));
    if (report) report->observe(p.rho);
  }
  return s;
}

void check_common(const AtomSpec& atom, const PulseSequence& seq, int max_mode) {
  atom.validate();
  seq.validate();
  if (max_mode < 0) throw InvalidArgument("max_mode must be >= 0");
}

void check_grid(int grid_size, int max_mode) {
  if (grid_size < 1 || grid_size < 2 * max_mode + 2)
    throw InvalidArgument("phase grid of " + std::to_string(grid_size) + " points cannot resolve modes up to |m| = " +
                          std::to_string(max_mode) + " (need at least " + std::to_string(2 * max_mode + 2) + ")");
}

// Builds the spectrum from per-mode envelopes a_m(t) on a shared time grid.
ModeSpectrum assemble(const AtomSpec& atom, const PulseSequence& seq, const std::vector<double>& times,
                      const std::map<int, std::vector<Complex>>& envelopes, double total_photons) {
  ModeSpectrum spec;
  spec.d_omega = seq.detuning;
  spec.total_photons_per_cycle = total_photons;
  std::vector<double> power(times.size());
  for (const auto& [m, env] : envelopes) {
    for (std::size_t k = 0; k < env.size(); ++k) power[k] = std::norm(env[k]);
    spec.modes[m] = ModeValue{0.5 * atom.gamma1 * trapezoid(times, env), atom.gamma1 * trapezoid(times, power)};
  }
  return spec;
}

}  // namespace

bool EmissionRecord::is_valid(const AtomSpec& atom) const {
  double bound = 0.0;
  for (double mu : atom.transition_elements) bound += 0.5 * std::abs(mu);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (k > 0 && !(samples[k].time > samples[k - 1].time)) return false;
    if (!(std::abs(samples[k].amplitude) <= bound + 1e-12)) return false;
  }
  return true;
}

Complex emission_amplitude(const AtomSpec& atom, const DensityMatrix& rho) {
  Complex a = 0.0;
  for (std::size_t j = 0; j + 1 < atom.dim(); ++j) a += atom.transition_elements[j] * rho(j, j + 1);
  return a;
}

EmissionRecord emission_record(const Trajectory& trajectory, const AtomSpec& atom, double beat_phase) {
  EmissionRecord rec{beat_phase, {}};
  rec.samples.reserve(trajectory.size());
  for (const auto& p : trajectory) rec.samples.push_back({p.time, emission_amplitude(atom, p.rho)});
  return rec;
}

double ModeSpectrum::photons(int m) const {
  const auto it = modes.find(m);
  return it == modes.end() ? 0.0 : it->second.photons_per_cycle;
}

double ModeSpectrum::max_photons() const {
  double mx = 0.0;
  for (const auto& [m, v] : modes) mx = std::max(mx, v.photons_per_cycle);
  return mx;
}

double ModeSpectrum::coherent_photons() const {
  double sum = 0.0;
  for (const auto& [m, v] : modes) sum += v.photons_per_cycle;
  return sum;
}

void PhysicalityReport::observe(const DensityMatrix& rho) {
  max_trace_error = std::max(max_trace_error, rho.trace_error());
  max_hermiticity_residual = std::max(max_hermiticity_residual, rho.hermiticity_residual());
  min_eigenvalue = std::min(min_eigenvalue, rho.min_eigenvalue());
  ++samples;
}

void PhysicalityReport::merge(const PhysicalityReport& o) {
  max_trace_error = std::max(max_trace_error, o.max_trace_error);
  max_hermiticity_residual = std::max(max_hermiticity_residual, o.max_hermiticity_residual);
  min_eigenvalue = std::min(min_eigenvalue, o.min_eigenvalue);
  samples += o.samples;
}

bool PhysicalityReport::within(double trace_tol, double hermiticity_tol, double eigen_floor) const {
  return max_trace_error < trace_tol && max_hermiticity_residual < hermiticity_tol && min_eigenvalue >= eigen_floor;
}

Trajectory simulate_repetition(const AtomSpec& atom, const PulseSequence& seq, double beat_phase,
                               const EngineOptions& options) {
  atom.validate();
  seq.validate();
  return run_repetition(atom, seq, DensityMatrix::ground(atom.dim()), beat_phase, false, 0.0, options);
}

ModeSpectrum phase_grid_spectrum(const AtomSpec& atom, const PulseSequence& seq, int grid_size, int max_mode,
                                 const EngineOptions& options) {
  check_common(atom, seq, max_mode);
  check_grid(grid_size, max_mode);
  const auto n = static_cast<std::size_t>(grid_size);

  std::vector<RepetitionSamples> reps(n);
  std::vector<PhysicalityReport> reports(n);
  parallel_for(n, options.threads, [&](std::size_t j) {
    const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    reps[j] = sample(atom, simulate_repetition(atom, seq, phi, options), options.physicality ? &reports[j] : nullptr);
  });
  if (options.physicality)
    for (const auto& r : reports) options.physicality->merge(r);

  const auto& times = reps.front().times;
  std::map<int, std::vector<Complex>> envelopes;
  for (int m = -max_mode; m <= max_mode; ++m) {
    std::vector<Complex> env(times.size(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex w = std::polar(1.0 / static_cast<double>(n), -kTwoPi * m * static_cast<double>(j) / n);
      for (std::size_t k = 0; k < env.size(); ++k) env[k] += w * reps[j].amplitude[k];
    }
    envelopes.emplace(m, std::move(env));
  }
  double total = 0.0;
  for (const auto& r : reps) total += trapezoid(r.times, r.emission_rate);
  return assemble(atom, seq, times, envelopes, total / static_cast<double>(n));
}

ModeSpectrum time_trace_spectrum(const AtomSpec& atom, const PulseSequence& seq, int n_periods, int max_mode,
                                 const EngineOptions& options) {
  check_common(atom, seq, max_mode);
  const double beat_periods = kTwoPi / (seq.detuning * seq.repetition_period);
  if (n_periods < 1 || static_cast<double>(n_periods) < beat_periods * (1.0 - 1e-9))
    throw InvalidArgument("time_trace_spectrum: " + std::to_string(n_periods) +
                          " periods do not cover one beat cycle (need " +
                          std::to_string(static_cast<long>(std::ceil(beat_periods))) + ")");

  const double t_r = seq.repetition_period;
  std::vector<RepetitionSamples> reps;
  reps.reserve(static_cast<std::size_t>(n_periods));
  auto rho = DensityMatrix::ground(atom.dim());
  for (int j = 0; j < n_periods; ++j) {
    auto traj = run_repetition(atom, seq, rho, 0.0, true, t_r * j, options);
    reps.push_back(sample(atom, traj, options.physicality));
    rho = traj.back().rho;
    // Segments may stop short of T_r only if the sequence leaves the tail unspecified.
    if (const double tail = t_r - traj.back().time; tail > 1e-12 * t_r) {
      auto rest = evolve(atom, {}, 0.0, rho, tail, tail);
      rho = rest.back().rho;
    }
  }

  const auto& times = reps.front().times;
  std::map<int, std::vector<Complex>> envelopes;
  for (int m = -max_mode; m <= max_mode; ++m) {
    std::vector<Complex> env(times.size(), 0.0);
    for (int j = 0; j < n_periods; ++j) {
      const auto& r = reps[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < env.size(); ++k)
        env[k] += std::polar(1.0, -m * seq.detuning * (t_r * j + times[k])) * r.amplitude[k];
    }
    for (auto& e : env) e /= static_cast<double>(n_periods);
    envelopes.emplace(m, std::move(env));
  }
  double total = 0.0;
  for (const auto& r : reps) total += trapezoid(r.times, r.emission_rate);
  return assemble(atom, seq, times, envelopes, total / n_periods);
}

std::map<int, Complex> drive_end_modes(const AtomSpec& atom, const PulseSequence& seq, int grid_size, int max_mode,
                                       const EngineOptions& options) {
  check_common(atom, seq, max_mode);
  check_grid(grid_size, max_mode);
  PulseSequence driven = seq;
  while (!driven.segments.empty() && driven.segments.back().is_free_decay()) driven.segments.pop_back();

  const auto n = static_cast<std::size_t>(grid_size);
  std::vector<Complex> end(n);
  std::vector<PhysicalityReport> reports(n);
  parallel_for(n, options.threads, [&](std::size_t j) {
    const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    const auto traj = simulate_repetition(atom, driven, phi, options);
    if (options.physicality)
      for (const auto& p : traj) reports[j].observe(p.rho);
    end[j] = emission_amplitude(atom, traj.back().rho);
  });
  if (options.physicality)
    for (const auto& r : reports) options.physicality->merge(r);

  std::map<int, Complex> out;
  for (int m = -max_mode; m <= max_mode; ++m) {
    Complex c = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      c += std::polar(1.0, -kTwoPi * m * static_cast<double>(j) / static_cast<double>(n)) * end[j];
    out[m] = c / static_cast<double>(n);
  }
  return out;
}

std::vector<int> detect_peaks(const ModeSpectrum& spectrum, double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
    throw InvalidArgument("detect_peaks: rel_threshold must lie in (0, 1)");
  std::vector<int> peaks;
  const double mx = spectrum.max_photons();
  if (!(mx > 0.0)) return peaks;
  for (const auto& [m, v] : spectrum.modes)
    if (v.photons_per_cycle >= rel_threshold * mx) peaks.push_back(m);
  return peaks;
}

}  // namespace qwm
