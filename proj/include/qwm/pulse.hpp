#pragma once

#include "qwm/atom.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qwm {

/// A constant-envelope stretch of drive; no tones means free decay.
struct PulseSegment {
  std::vector<DriveTone> tones;
  double duration = 0.0;

  bool is_free_decay() const noexcept { return tones.empty(); }
  friend bool operator==(const PulseSegment&, const PulseSegment&) = default;
};

/// Parameters a classical (simultaneous two-tone) sequence was built from.
struct ClassicalPreset {
  double omega_rabi = 0.0;
  double dt = 0.0;
  double t_r = 0.0;
  double d_omega = 0.0;
  friend bool operator==(const ClassicalPreset&, const ClassicalPreset&) = default;
};

/// Parameters a sequential (quantum mixing) sequence was built from.
struct QuantumPreset {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double dt1 = 0.0;
  double dt2 = 0.0;
  double gap = 0.0;
  double t_r = 0.0;
  double d_omega = 0.0;
  int first_tone = -1;
  friend bool operator==(const QuantumPreset&, const QuantumPreset&) = default;
};

using PresetOrigin = std::variant<std::monostate, ClassicalPreset, QuantumPreset>;

/// One repetition of the drive protocol, repeated every `repetition_period`.
struct PulseSequence {
  std::vector<PulseSegment> segments;
  double repetition_period = 0.0;
  /// Tone spacing delta_omega, rad/s.
  double detuning = 0.0;
  /// Preset this sequence came from; not part of equality.
  PresetOrigin origin;

  void validate() const;
  double total_duration() const;
  /// Copy with zero-length segments removed and adjacent free-decay segments merged.
  PulseSequence normalized() const;
  /// Advice when delta_omega is not small against the atom's linewidth.
  std::optional<std::string> detuning_warning(const AtomSpec& atom) const;

  friend bool operator==(const PulseSequence& a, const PulseSequence& b) {
    return a.segments == b.segments && a.repetition_period == b.repetition_period && a.detuning == b.detuning;
  }
};

/// Tones m = -1 and m = +1 with equal Omega for `dt`, then free decay to t_r.
PulseSequence preset_classical(double omega_rabi, double dt, double t_r, double d_omega);

/// Tone m = first_tone (Omega1, dt1), a free gap, tone m = -first_tone
/// (Omega2, dt2), then free decay to t_r.
PulseSequence preset_quantum(double omega1, double omega2, double dt1, double dt2, double gap, double t_r,
                             double d_omega, int first_tone = -1);

/// A single tone at mode `mode_index` for `dt`, then free decay.
PulseSequence preset_single(double omega_rabi, double dt, double t_r, double d_omega, int mode_index);

enum class SweepParameter { OmegaRabi, Dt, Omega1, Omega2 };

SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

/// One sequence per value, rebuilt from the base sequence's preset with a
/// single parameter replaced.
std::vector<PulseSequence> sweep_grid(const PulseSequence& base, SweepParameter parameter,
                                      std::span<const double> values);

}  // namespace qwm
