#include "qwm/oracles.hpp"

#include "qwm/error.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

namespace qwm::oracles {

namespace {

std::atomic<double> g_bessel_corruption{0.0};

// Miller's backward recurrence normalized with J_0 + 2 sum J_2k = 1.
double bessel_miller(int n, double x) {
  const double top = std::max(static_cast<double>(n), x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(60.0 * (top + 1.0)));
  start += start % 2;

  constexpr double kBig = 1e250;
  double next = 0.0;  // J_{k+1}
  double cur = 1e-300;  // J_k
  double norm = 0.0;
  double result = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > kBig) {
      cur /= kBig;
      next /= kBig;
      norm /= kBig;
      result /= kBig;
    }
    if (k - 1 == n) result = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
  }
  norm += cur;
  return result / norm;
}

}  // namespace

double bessel_j(int n, double z) {
  if (n < 0) throw InvalidArgument("bessel_j: order must be >= 0");
  if (!(std::abs(z) <= 30.0)) throw InvalidArgument("bessel_j: |z| must be <= 30, got " + std::to_string(z));
  double value;
  if (z == 0.0) {
    value = n == 0 ? 1.0 : 0.0;
  } else {
    value = bessel_miller(n, std::abs(z));
    if (z < 0.0 && n % 2 == 1) value = -value;
  }
  return value * (1.0 + g_bessel_corruption.load(std::memory_order_relaxed));
}

double bessel_first_maximum(int n) {
  if (n < 1) throw InvalidArgument("bessel_first_maximum: order must be >= 1");
  auto slope = [n](double z) { return bessel_j(n - 1, z) - bessel_j(n + 1, z); };
  double lo = 1e-3;
  double hi = lo;
  while (slope(hi) > 0.0) {
    lo = hi;
    hi += 0.05;
    if (hi > 30.0) throw NumericalError("bessel_first_maximum: no maximum below z = 30");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double classical_mode_amplitude(int k, double omega_rabi, double dt) {
  if (k < 0) throw InvalidArgument("classical_mode_amplitude: k must be >= 0");
  const double sign = k % 2 == 0 ? 1.0 : -1.0;
  return 0.5 * sign * bessel_j(2 * k + 1, 2.0 * omega_rabi * dt);
}

double classical_photons(int k, double omega_rabi, double dt) {
  const double b = classical_mode_amplitude(k, omega_rabi, dt);
  return b * b;
}

double jacobi_anger_residual(double z, double phi, int terms) {
  if (terms < 0) throw InvalidArgument("jacobi_anger_residual: terms must be >= 0");
  double series = 0.0;
  for (int k = 0; k <= terms; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    series += 2.0 * sign * bessel_j(2 * k + 1, z) * std::cos((2 * k + 1) * phi);
  }
  return std::abs(std::sin(z * std::cos(phi)) - series);
}

PeakPrediction two_pulse_spectrum(double theta1, double theta2) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (!(theta1 >= 0.0 && theta1 <= kTwoPi && theta2 >= 0.0 && theta2 <= kTwoPi))
    throw InvalidArgument("two_pulse_spectrum: angles must lie in [0, 2 pi]");
  using namespace std::complex_literals;
  const double c2 = std::cos(0.5 * theta2);
  const double s2 = std::sin(0.5 * theta2);
  return PeakPrediction{
      {-1, 1, 3},
      {0.5i * std::sin(theta1) * c2 * c2, 0.5i * std::sin(theta2) * std::cos(theta1),
       -0.5i * std::sin(theta1) * s2 * s2},
  };
}

double FockVector::norm() const {
  double sum = 0.0;
  for (const auto& c : coefficients) sum += std::norm(c);
  return std::sqrt(sum);
}

namespace {

FockVector normalized(std::vector<Complex> c) {
  FockVector v{std::move(c)};
  const double n = v.norm();
  for (auto& x : v.coefficients) x /= n;
  return v;
}

struct StateBuilder {
  FockVector operator()(const CoherentState& s) const {
    const double mean = std::norm(s.alpha);
    if (s.truncation < 1 || !(mean / s.truncation < 0.5))
      throw InvalidArgument("make_state: truncation " + std::to_string(s.truncation) + " too small for |alpha|^2 = " +
                            std::to_string(mean));
    std::vector<Complex> c(static_cast<std::size_t>(s.truncation) + 1);
    c[0] = std::exp(-0.5 * mean);
    for (std::size_t n = 1; n < c.size(); ++n) c[n] = c[n - 1] * s.alpha / std::sqrt(static_cast<double>(n));
    return normalized(std::move(c));
  }
  FockVector operator()(const ZeroOnePhotonState& s) const {
    // |cos(theta/2)| (1, tan(theta/2)) without dividing by cos(theta/2).
    const double c = std::cos(0.5 * s.theta);
    const double sign = c < 0.0 ? -1.0 : 1.0;
    return normalized({sign * c, sign * std::sin(0.5 * s.theta)});
  }
  FockVector operator()(const TwoPhotonState& s) const { return normalized({1.0, s.gamma1, s.gamma2}); }
};

}  // namespace

FockVector make_state(const StateParams& params) { return std::visit(StateBuilder{}, params); }

std::optional<int> predicted_peak_count(std::optional<int> n_ph) {
  if (!n_ph) return std::nullopt;
  if (*n_ph < 1) throw InvalidArgument("predicted_peak_count: n_ph must be >= 1");
  return 2 * *n_ph + 1;
}

namespace testing {
void corrupt_bessel(double relative_error) { g_bessel_corruption.store(relative_error); }
}  // namespace testing

}  // namespace qwm::oracles
