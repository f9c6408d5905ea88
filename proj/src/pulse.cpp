#include "qwm/pulse.hpp"

#include "qwm/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qwm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

PulseSegment drive(int mode, double omega, double duration) { return {{DriveTone{mode, omega, 0.0}}, duration}; }

}  // namespace

void PulseSequence::validate() const {
  require(std::isfinite(repetition_period) && repetition_period > 0.0, "PulseSequence: repetition_period must be > 0");
  require(std::isfinite(detuning) && detuning > 0.0, "PulseSequence: detuning must be > 0");
  for (const auto& seg : segments) {
    require(finite_nonneg(seg.duration), "PulseSequence: segment durations must be finite and >= 0");
    for (const auto& tone : seg.tones)
      require(finite_nonneg(tone.rabi_amplitude) && std::isfinite(tone.phase_offset),
              "PulseSequence: tone amplitudes must be finite and >= 0");
  }
  require(total_duration() <= repetition_period * (1.0 + 1e-12),
          "PulseSequence: segments are longer than the repetition period");
}

double PulseSequence::total_duration() const {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.duration;
  return total;
}

PulseSequence PulseSequence::normalized() const {
  PulseSequence out{{}, repetition_period, detuning, origin};
  for (const auto& seg : segments) {
    if (seg.duration == 0.0) continue;
    if (seg.is_free_decay() && !out.segments.empty() && out.segments.back().is_free_decay())
      out.segments.back().duration += seg.duration;
    else
      out.segments.push_back(seg);
  }
  return out;
}

std::optional<std::string> PulseSequence::detuning_warning(const AtomSpec& atom) const {
  if (atom.gamma1 > 0.0 && detuning > 0.5 * atom.gamma1)
    return "detuning delta_omega = " + std::to_string(detuning) + " rad/s exceeds gamma1/2 = " +
           std::to_string(0.5 * atom.gamma1) + " rad/s; the mixing peaks assume delta_omega << gamma1";
  return std::nullopt;
}

PulseSequence preset_classical(double omega_rabi, double dt, double t_r, double d_omega) {
  require(finite_nonneg(omega_rabi) && finite_nonneg(dt), "preset_classical: omega_rabi and dt must be >= 0");
  require(std::isfinite(t_r) && t_r > 0.0 && std::isfinite(d_omega) && d_omega > 0.0,
          "preset_classical: t_r and d_omega must be > 0");
  require(dt <= t_r, "preset_classical: pulse length dt exceeds the repetition period t_r");
  PulseSequence seq;
  seq.segments.push_back({{DriveTone{-1, omega_rabi, 0.0}, DriveTone{+1, omega_rabi, 0.0}}, dt});
  seq.segments.push_back({{}, std::max(0.0, t_r - dt)});
  seq.repetition_period = t_r;
  seq.detuning = d_omega;
  seq.origin = ClassicalPreset{omega_rabi, dt, t_r, d_omega};
  return seq;
}

PulseSequence preset_quantum(double omega1, double omega2, double dt1, double dt2, double gap, double t_r,
                             double d_omega, int first_tone) {
  require(first_tone == 1 || first_tone == -1, "preset_quantum: first_tone must be +1 or -1");
  require(finite_nonneg(omega1) && finite_nonneg(omega2), "preset_quantum: Rabi amplitudes must be >= 0");
  require(finite_nonneg(dt1) && finite_nonneg(dt2) && finite_nonneg(gap), "preset_quantum: durations must be >= 0");
  require(std::isfinite(t_r) && t_r > 0.0 && std::isfinite(d_omega) && d_omega > 0.0,
          "preset_quantum: t_r and d_omega must be > 0");
  require(dt1 + gap + dt2 <= t_r, "preset_quantum: dt1 + gap + dt2 exceeds the repetition period t_r");
  PulseSequence seq;
  seq.segments.push_back(drive(first_tone, omega1, dt1));
  seq.segments.push_back({{}, gap});
  seq.segments.push_back(drive(-first_tone, omega2, dt2));
  seq.segments.push_back({{}, std::max(0.0, t_r - (dt1 + gap + dt2))});
  seq.repetition_period = t_r;
  seq.detuning = d_omega;
  seq.origin = QuantumPreset{omega1, omega2, dt1, dt2, gap, t_r, d_omega, first_tone};
  return seq;
}

PulseSequence preset_single(double omega_rabi, double dt, double t_r, double d_omega, int mode_index) {
  require(finite_nonneg(omega_rabi) && finite_nonneg(dt), "preset_single: omega_rabi and dt must be >= 0");
  require(std::isfinite(t_r) && t_r > 0.0 && std::isfinite(d_omega) && d_omega > 0.0,
          "preset_single: t_r and d_omega must be > 0");
  require(dt <= t_r, "preset_single: dt exceeds t_r");
  PulseSequence seq;
  seq.segments.push_back(drive(mode_index, omega_rabi, dt));
  seq.segments.push_back({{}, std::max(0.0, t_r - dt)});
  seq.repetition_period = t_r;
  seq.detuning = d_omega;
  return seq;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "omega_rabi") return SweepParameter::OmegaRabi;
  if (name == "dt") return SweepParameter::Dt;
  if (name == "omega1") return SweepParameter::Omega1;
  if (name == "omega2") return SweepParameter::Omega2;
  throw InvalidArgument("unknown sweep parameter '" + std::string(name) + "'");
}

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::OmegaRabi: return "omega_rabi";
    case SweepParameter::Dt: return "dt";
    case SweepParameter::Omega1: return "omega1";
    case SweepParameter::Omega2: return "omega2";
  }
  return "?";
}

std::vector<PulseSequence> sweep_grid(const PulseSequence& base, SweepParameter parameter,
                                      std::span<const double> values) {
  require(!values.empty(), "sweep_grid: values must not be empty");
  for (double v : values) require(std::isfinite(v), "sweep_grid: values must be finite");

  std::vector<PulseSequence> out;
  out.reserve(values.size());
  if (const auto* c = std::get_if<ClassicalPreset>(&base.origin)) {
    require(parameter == SweepParameter::OmegaRabi || parameter == SweepParameter::Dt,
            "sweep_grid: parameter '" + std::string(to_string(parameter)) + "' does not apply to the classical preset");
    for (double v : values) {
      auto p = *c;
      (parameter == SweepParameter::OmegaRabi ? p.omega_rabi : p.dt) = v;
      out.push_back(preset_classical(p.omega_rabi, p.dt, p.t_r, p.d_omega));
    }
  } else if (const auto* q = std::get_if<QuantumPreset>(&base.origin)) {
    require(parameter == SweepParameter::Omega1 || parameter == SweepParameter::Omega2,
            "sweep_grid: parameter '" + std::string(to_string(parameter)) + "' does not apply to the quantum preset");
    for (double v : values) {
      auto p = *q;
      (parameter == SweepParameter::Omega1 ? p.omega1 : p.omega2) = v;
      out.push_back(preset_quantum(p.omega1, p.omega2, p.dt1, p.dt2, p.gap, p.t_r, p.d_omega, p.first_tone));
    }
  } else {
    throw InvalidArgument("sweep_grid: base sequence was not built from a preset");
  }
  return out;
}

}  // namespace qwm
