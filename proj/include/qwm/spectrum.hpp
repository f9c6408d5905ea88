#pragma once

#include "qwm/atom.hpp"
#include "qwm/pulse.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <vector>

namespace qwm {

struct EmissionSample {
  double time;
  /// <sigma^-> in normalized units (hbar Gamma1 / mu = 1).
  Complex amplitude;
};

/// Coherent emission of one repetition at a fixed beat phase.
struct EmissionRecord {
  double beat_phase = 0.0;
  std::vector<EmissionSample> samples;

  /// Strictly increasing times and |amplitude| within the coherence bound.
  bool is_valid(const AtomSpec& atom) const;
};

/// Dipole-weighted coherence sum_j mu_j rho(j, j+1).
Complex emission_amplitude(const AtomSpec& atom, const DensityMatrix& rho);

EmissionRecord emission_record(const Trajectory& trajectory, const AtomSpec& atom, double beat_phase = 0.0);

struct ModeValue {
  /// <b+_m>-equivalent coefficient, (Gamma1 / 2) * integral of a_m(t).
  Complex amplitude;
  /// Coherent photons per repetition, Gamma1 * integral of |a_m(t)|^2.
  double photons_per_cycle = 0.0;

  friend bool operator==(const ModeValue&, const ModeValue&) = default;
};

/// Emission at omega_0 + m * d_omega for each tracked mode m.
struct ModeSpectrum {
  double d_omega = 0.0;
  std::map<int, ModeValue> modes;
  /// All photons (coherent and incoherent) emitted per repetition.
  double total_photons_per_cycle = 0.0;

  double photons(int m) const;
  double max_photons() const;
  double coherent_photons() const;

  friend bool operator==(const ModeSpectrum&, const ModeSpectrum&) = default;
};

/// Worst-case physicality diagnostics over every sampled state.
struct PhysicalityReport {
  double max_trace_error = 0.0;
  double max_hermiticity_residual = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;

  void observe(const DensityMatrix& rho);
  void merge(const PhysicalityReport& other);
  bool within(double trace_tol = 1e-10, double hermiticity_tol = 1e-10, double eigen_floor = -1e-9) const;
};

struct EngineOptions {
  /// Worker threads for independent simulations; 0 = hardware parallelism.
  unsigned threads = 0;
  /// Samples per radiative lifetime 1/Gamma1 (decay and driven segments).
  double samples_per_lifetime = 40.0;
  /// Minimum samples across each driven segment.
  int min_pulse_steps = 64;
  /// Maximum drive rotation per sample, radians.
  double max_rotation_per_step = 1.0 / 16.0;
  /// When set, every sampled state is folded into this report.
  PhysicalityReport* physicality = nullptr;
};

/// Simulates one repetition from the ground state at a frozen beat phase.
Trajectory simulate_repetition(const AtomSpec& atom, const PulseSequence& seq, double beat_phase,
                               const EngineOptions& options = {});

/// Mode spectrum from a discrete Fourier series over M beat phases
/// phi_j = 2 pi j / M, each simulated for one repetition from the ground
/// state. Requires M >= 2 max_mode + 2.
ModeSpectrum phase_grid_spectrum(const AtomSpec& atom, const PulseSequence& seq, int grid_size, int max_mode,
                                 const EngineOptions& options = {});

/// Brute-force reference: n_periods consecutive repetitions with the beat
/// phase advancing continuously, demodulated by e^{-i m d_omega t} and
/// averaged over repetitions at fixed delay into the period. Exact when
/// n_periods * d_omega * T_r is a multiple of 2 pi.
ModeSpectrum time_trace_spectrum(const AtomSpec& atom, const PulseSequence& seq, int n_periods, int max_mode,
                                 const EngineOptions& options = {});

/// Fourier coefficients over beat phase of the emission amplitude at the end
/// of the last driven segment (the coherence the atom is left with).
std::map<int, Complex> drive_end_modes(const AtomSpec& atom, const PulseSequence& seq, int grid_size, int max_mode,
                                       const EngineOptions& options = {});

/// Modes with photons_per_cycle >= rel_threshold * max, ascending.
std::vector<int> detect_peaks(const ModeSpectrum& spectrum, double rel_threshold = 1e-3);

}  // namespace qwm
