#include "qwm/atom.hpp"

#include "qwm/error.hpp"

#include <cmath>
#include <string>

namespace qwm {

namespace {

constexpr double kTraceDriftLimit = 1e-8;

ComplexMatrix transpose(const ComplexMatrix& a) { return ComplexMatrix(Eigen::MatrixXcd(a.eigen().transpose())); }

ComplexMatrix conj(const ComplexMatrix& a) { return ComplexMatrix(Eigen::MatrixXcd(a.eigen().conjugate())); }

// Sqrt(2) * number operator: dephasing of rho_jk at gamma_phi * (j - k)^2.
ComplexMatrix dephasing_operator(std::size_t dim) {
  ComplexMatrix lz(dim);
  for (std::size_t j = 0; j < dim; ++j) lz(j, j) = std::sqrt(2.0) * static_cast<double>(j);
  return lz;
}

// D[L] as a superoperator on row-major vec(rho).
ComplexMatrix dissipator(const ComplexMatrix& l) {
  const auto dim = l.dim();
  const auto id = ComplexMatrix::identity(dim);
  const auto ldl = l.adjoint() * l;
  return kron(l, conj(l)) - 0.5 * kron(ldl, id) - 0.5 * kron(id, transpose(ldl));
}

Eigen::VectorXcd vec(const ComplexMatrix& m) {
  const auto d = static_cast<Eigen::Index>(m.dim());
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = m.eigen()(i, j);
  return v;
}

ComplexMatrix unvec(const Eigen::VectorXcd& v, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = v(i * d + j);
  return ComplexMatrix(std::move(m));
}

void check_evolve_args(const AtomSpec& atom, const DensityMatrix& rho0, double duration, double dt_max) {
  atom.validate();
  if (rho0.dim() != atom.dim())
    throw InvalidArgument("evolve: state dimension " + std::to_string(rho0.dim()) + " does not match atom levels " +
                          std::to_string(atom.dim()));
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw InvalidArgument("evolve: duration must be finite and >= 0");
  if (!(dt_max > 0.0)) throw InvalidArgument("evolve: dt_max must be > 0");
}

std::size_t step_count(double duration, double dt_max) {
  if (duration == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(duration / dt_max - 1e-12));
}

void check_trace(const Eigen::VectorXcd& v, std::size_t dim, double t) {
  Complex tr = 0.0;
  for (std::size_t k = 0; k < dim; ++k) tr += v(static_cast<Eigen::Index>(k * dim + k));
  if (std::abs(tr - 1.0) > kTraceDriftLimit)
    throw NumericalError("evolve: trace drifted to " + std::to_string(tr.real()) + " at t = " + std::to_string(t) +
                         " s; reduce dt_max");
}

ComplexMatrix hamiltonian_or_zero(const AtomSpec& atom, std::span<const DriveTone> tones, double phase) {
  return tones.empty() ? ComplexMatrix::zero(atom.dim()) : drive_hamiltonian(atom, tones, phase);
}

}  // namespace

AtomSpec AtomSpec::two_level(double gamma1, double gamma_phi) { return AtomSpec{2, {1.0}, gamma1, gamma_phi}; }

AtomSpec AtomSpec::three_level(double gamma1, double mu12, double gamma_phi) {
  return AtomSpec{3, {1.0, mu12}, gamma1, gamma_phi};
}

void AtomSpec::validate() const {
  if (levels != 2 && levels != 3) throw InvalidArgument("AtomSpec: levels must be 2 or 3, got " + std::to_string(levels));
  if (transition_elements.size() != static_cast<std::size_t>(levels - 1))
    throw InvalidArgument("AtomSpec: transition_elements must have levels - 1 entries");
  if (transition_elements.front() != 1.0) throw InvalidArgument("AtomSpec: transition_elements[0] must be 1");
  for (double mu : transition_elements)
    if (!std::isfinite(mu)) throw InvalidArgument("AtomSpec: transition elements must be finite");
  if (!(gamma1 >= 0.0) || !std::isfinite(gamma1)) throw InvalidArgument("AtomSpec: gamma1 must be finite and >= 0");
  if (!(gamma_phi >= 0.0) || !std::isfinite(gamma_phi))
    throw InvalidArgument("AtomSpec: gamma_phi must be finite and >= 0");
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (!m_.all_finite()) throw InvalidArgument("DensityMatrix: non-finite entries");
  if (hermiticity_residual() > tol) throw InvalidArgument("DensityMatrix: not Hermitian");
  if (trace_error() > tol) throw InvalidArgument("DensityMatrix: trace is not 1");
  if (min_eigenvalue() < -1e-9) throw InvalidArgument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) { return DensityMatrix(std::move(m), NoCheck{}); }

DensityMatrix DensityMatrix::ground(std::size_t dim) { return basis(dim, 0); }

DensityMatrix DensityMatrix::basis(std::size_t dim, std::size_t level) {
  return DensityMatrix(ComplexMatrix::unit(dim, level, level), NoCheck{});
}

DensityMatrix DensityMatrix::pure(std::span<const Complex> psi) {
  ComplexMatrix m(psi.size());
  for (std::size_t r = 0; r < psi.size(); ++r)
    for (std::size_t c = 0; c < psi.size(); ++c) m(r, c) = psi[r] * std::conj(psi[c]);
  return DensityMatrix(std::move(m));
}

double DensityMatrix::min_eigenvalue() const { return hermitian_eigenvalues(m_)(0); }

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

ComplexMatrix drive_hamiltonian(const AtomSpec& atom, std::span<const DriveTone> tones, double beat_phase) {
  atom.validate();
  if (tones.empty()) throw InvalidArgument("drive_hamiltonian: at least one tone is required");
  ComplexMatrix h(atom.dim());
  for (const auto& tone : tones) {
    if (!(tone.rabi_amplitude >= 0.0)) throw InvalidArgument("drive_hamiltonian: rabi_amplitude must be >= 0");
    const Complex phase = std::polar(1.0, -(tone.mode_index * beat_phase + tone.phase_offset));
    for (std::size_t j = 0; j + 1 < atom.dim(); ++j) {
      const Complex c = 0.5 * tone.rabi_amplitude * atom.transition_elements[j] * phase;
      h(j + 1, j) += c;
      h(j, j + 1) += std::conj(c);
    }
  }
  return h;
}

ComplexMatrix lindblad_rhs(const AtomSpec& atom, const ComplexMatrix& hamiltonian, const DensityMatrix& rho) {
  atom.validate();
  if (hamiltonian.dim() != atom.dim() || rho.dim() != atom.dim())
    throw InvalidArgument("lindblad_rhs: dimension mismatch");
  using namespace std::complex_literals;
  const auto& r = rho.matrix();
  ComplexMatrix out = -1i * commutator(hamiltonian, r);
  auto add = [&](const ComplexMatrix& l, double rate) {
    if (rate == 0.0) return;
    const auto ldl = l.adjoint() * l;
    out += rate * (l * r * l.adjoint() - 0.5 * anticommutator(ldl, r));
  };
  for (std::size_t j = 0; j + 1 < atom.dim(); ++j)
    add(ComplexMatrix::unit(atom.dim(), j, j + 1), atom.transition_rate(j));
  add(dephasing_operator(atom.dim()), atom.gamma_phi);
  return out;
}

ComplexMatrix liouvillian(const AtomSpec& atom, const ComplexMatrix& hamiltonian) {
  atom.validate();
  if (hamiltonian.dim() != atom.dim()) throw InvalidArgument("liouvillian: dimension mismatch");
  using namespace std::complex_literals;
  const auto id = ComplexMatrix::identity(atom.dim());
  ComplexMatrix out = -1i * (kron(hamiltonian, id) - kron(id, transpose(hamiltonian)));
  for (std::size_t j = 0; j + 1 < atom.dim(); ++j) {
    const double rate = atom.transition_rate(j);
    if (rate != 0.0) out += rate * dissipator(ComplexMatrix::unit(atom.dim(), j, j + 1));
  }
  if (atom.gamma_phi != 0.0) out += atom.gamma_phi * dissipator(dephasing_operator(atom.dim()));
  return out;
}

Trajectory evolve(const AtomSpec& atom, std::span<const DriveTone> tones, double beat_phase,
                  const DensityMatrix& rho0, double duration, double dt_max) {
  check_evolve_args(atom, rho0, duration, dt_max);
  Trajectory out{{0.0, rho0}};
  const auto n = step_count(duration, dt_max);
  if (n == 0) return out;
  const double h = duration / static_cast<double>(n);
  const auto gen = liouvillian(atom, hamiltonian_or_zero(atom, tones, beat_phase));
  const Eigen::MatrixXcd prop = expm(gen * Complex(h)).eigen();
  Eigen::VectorXcd v = vec(rho0.matrix());
  out.reserve(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    v = prop * v;
    const double t = h * static_cast<double>(k);
    check_trace(v, atom.dim(), t);
    out.push_back({t, DensityMatrix::unchecked(unvec(v, atom.dim()))});
  }
  return out;
}

Trajectory evolve_drifting(const AtomSpec& atom, std::span<const DriveTone> tones, double phase_at_start,
                           double d_omega, const DensityMatrix& rho0, double duration, double dt_max) {
  if (tones.empty() || d_omega == 0.0) return evolve(atom, tones, phase_at_start, rho0, duration, dt_max);
  check_evolve_args(atom, rho0, duration, dt_max);
  Trajectory out{{0.0, rho0}};
  const auto n = step_count(duration, dt_max);
  if (n == 0) return out;
  const double h = duration / static_cast<double>(n);
  Eigen::VectorXcd v = vec(rho0.matrix());
  out.reserve(n + 1);
  for (std::size_t k = 1; k <= n; ++k) {
    const double t_mid = h * (static_cast<double>(k) - 0.5);
    const auto gen = liouvillian(atom, drive_hamiltonian(atom, tones, phase_at_start + d_omega * t_mid));
    v = expm(gen * Complex(h)).eigen() * v;
    const double t = h * static_cast<double>(k);
    check_trace(v, atom.dim(), t);
    out.push_back({t, DensityMatrix::unchecked(unvec(v, atom.dim()))});
  }
  return out;
}

}  // namespace qwm
