#pragma once

#include "qwm/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qwm {

/// An artificial atom with a ladder of 2 or 3 levels, all transitions
/// resonant with the rotating frame at omega_0.
struct AtomSpec {
  int levels = 2;
  /// Dipole elements of |j> -> |j+1>, relative to the g-e element (first entry is 1).
  std::vector<double> transition_elements{1.0};
  /// Radiative relaxation rate of the g-e transition, rad/s.
  double gamma1 = 0.0;
  /// Pure dephasing rate, rad/s. Adds gamma_phi * (j-k)^2 to the decay of rho_jk.
  double gamma_phi = 0.0;

  static AtomSpec two_level(double gamma1, double gamma_phi = 0.0);
  static AtomSpec three_level(double gamma1, double mu12 = 1.4142135623730951, double gamma_phi = 0.0);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(levels); }
  /// Radiative rate of |j+1> -> |j|, gamma1 * mu_j^2.
  double transition_rate(std::size_t j) const { return gamma1 * transition_elements[j] * transition_elements[j]; }

  /// Throws InvalidArgument when an invariant does not hold.
  void validate() const;

  friend bool operator==(const AtomSpec&, const AtomSpec&) = default;
};

/// Hermitian, unit-trace, positive-semidefinite atomic state.
class DensityMatrix {
public:
  /// Validates the invariants within `tol` (trace, Hermiticity) and -1e-9 (eigenvalues).
  explicit DensityMatrix(ComplexMatrix m, double tol = 1e-10);

  /// Skips validation; for states produced by trusted propagation.
  static DensityMatrix unchecked(ComplexMatrix m);

  static DensityMatrix ground(std::size_t dim);
  static DensityMatrix basis(std::size_t dim, std::size_t level);
  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(std::span<const Complex> psi);

  std::size_t dim() const noexcept { return m_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  double population(std::size_t level) const { return m_(level, level).real(); }
  double trace_error() const { return std::abs(m_.trace() - 1.0); }
  double hermiticity_residual() const { return qwm::hermiticity_residual(m_); }
  double min_eigenvalue() const;
  double purity() const;

private:
  struct NoCheck {};
  DensityMatrix(ComplexMatrix m, NoCheck) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// One coherent drive tone at omega_0 + mode_index * delta_omega.
struct DriveTone {
  int mode_index = 0;
  /// Rabi frequency Omega (rad/s): alone and resonant it gives rho_ee = sin^2(Omega t / 2).
  double rabi_amplitude = 0.0;
  double phase_offset = 0.0;

  friend bool operator==(const DriveTone&, const DriveTone&) = default;
};

/// Rotating-frame RWA Hamiltonian (units of hbar) at frozen beat phase phi:
///   H = sum_tones sum_j (Omega mu_j / 2) (e^{-i(m phi + offset)} |j+1><j| + h.c.)
/// Throws InvalidArgument if `tones` is empty.
ComplexMatrix drive_hamiltonian(const AtomSpec& atom, std::span<const DriveTone> tones, double beat_phase);

/// Lindblad generator applied to rho: -i[H, rho] + sum_j Gamma_j D[|j><j+1|] rho + gamma_phi D[L_z] rho.
ComplexMatrix lindblad_rhs(const AtomSpec& atom, const ComplexMatrix& hamiltonian, const DensityMatrix& rho);

/// The same generator as a dim^2 x dim^2 superoperator acting on row-major vec(rho).
ComplexMatrix liouvillian(const AtomSpec& atom, const ComplexMatrix& hamiltonian);

struct TrajectoryPoint {
  double time;
  DensityMatrix rho;
};
using Trajectory = std::vector<TrajectoryPoint>;

/// Integrates the master equation for `duration` with the beat phase frozen.
/// The segment generator is time-constant, so each step of length
/// h <= dt_max applies the exact propagator exp(L h). The trajectory holds
/// t = 0 and every step end.
/// Throws NumericalError if the trace drifts by more than 1e-8.
Trajectory evolve(const AtomSpec& atom, std::span<const DriveTone> tones, double beat_phase,
                  const DensityMatrix& rho0, double duration, double dt_max);

/// Time-dependent variant with the beat phase advancing as
/// phi(t) = phase_at_start + d_omega * t. Each step uses the exponential
/// midpoint rule.
Trajectory evolve_drifting(const AtomSpec& atom, std::span<const DriveTone> tones, double phase_at_start,
                           double d_omega, const DensityMatrix& rho0, double duration, double dt_max);

}  // namespace qwm
