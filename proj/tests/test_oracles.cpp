#include "doctest.h"

#include "qwm/error.hpp"
#include "qwm/oracles.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace qwm;
using namespace qwm::oracles;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex I{0.0, 1.0};

using Vec2 = std::array<Complex, 2>;

// exp(-i theta/2 (e^{i a}|e><g| + e^{-i a}|g><e|)) applied to v, written out.
Vec2 rotate(const Vec2& v, double theta, double a) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  return {c * v[0] - I * s * std::exp(-I * a) * v[1], c * v[1] - I * s * std::exp(I * a) * v[0]};
}

// Coherence rho(g, e) after tone -1 (theta1) then tone +1 (theta2), Fourier
// analysed over 16 beat phases.
Complex brute_mode(double theta1, double theta2, int m) {
  constexpr int n = 16;
  Complex acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double phi = 2 * kPi * j / n;
    auto v = rotate({1.0, 0.0}, theta1, phi);
    v = rotate(v, theta2, -phi);
    acc += v[0] * std::conj(v[1]) * std::exp(-I * double(m) * phi);
  }
  return acc / double(n);
}
}  // namespace

TEST_CASE("bessel_j matches the standard library") {
  double worst = 0.0;
  for (int n = 0; n <= 40; ++n)
    for (int i = 0; i <= 300; ++i) {
      const double z = 0.1 * i;
      worst = std::max(worst, std::abs(bessel_j(n, z) - std::cyl_bessel_j(double(n), z)));
    }
  CHECK(worst < 1e-12);
  CHECK(bessel_j(3, -2.0) == doctest::Approx(-std::cyl_bessel_j(3.0, 2.0)).epsilon(1e-13));
  CHECK(bessel_j(4, -2.0) == doctest::Approx(std::cyl_bessel_j(4.0, 2.0)).epsilon(1e-13));
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(5, 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_j(-1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bessel_j(1, 31.0), InvalidArgument);
}

TEST_CASE("first maxima") {
  // Zeros of J_n'.
  CHECK(bessel_first_maximum(1) == doctest::Approx(1.8411837813406593).epsilon(1e-10));
  CHECK(bessel_first_maximum(3) == doctest::Approx(4.2011889412105285).epsilon(1e-10));
  CHECK(bessel_first_maximum(5) == doctest::Approx(6.4156163757002403).epsilon(1e-10));
  CHECK(bessel_first_maximum(7) == doctest::Approx(8.5778364897140745).epsilon(1e-10));
  CHECK_THROWS_AS(bessel_first_maximum(0), InvalidArgument);
}

TEST_CASE("classical mode law") {
  const double omega = 2.0;
  const double dt = 0.75;
  CHECK(classical_mode_amplitude(0, omega, dt) == doctest::Approx(0.5 * std::cyl_bessel_j(1.0, 3.0)));
  CHECK(classical_mode_amplitude(1, omega, dt) == doctest::Approx(-0.5 * std::cyl_bessel_j(3.0, 3.0)));
  CHECK(classical_photons(2, omega, dt) == doctest::Approx(0.25 * std::pow(std::cyl_bessel_j(5.0, 3.0), 2)));
  CHECK_THROWS_AS(classical_mode_amplitude(-1, omega, dt), InvalidArgument);
}

TEST_CASE("Jacobi-Anger") {
  CHECK(jacobi_anger_residual(10.0, 0.3, 40) < 1e-12);
  CHECK(jacobi_anger_residual(10.0, 0.3, 2) > 1e-3);
  CHECK_THROWS_AS(jacobi_anger_residual(1.0, 0.0, -1), InvalidArgument);
}

TEST_CASE("two-pulse closed form against explicit rotations") {
  double worst = 0.0;
  for (int i = 0; i <= 12; ++i) {
    for (int j = 0; j <= 12; ++j) {
      const double t1 = 2 * kPi * i / 12;
      const double t2 = 2 * kPi * j / 12;
      const auto p = two_pulse_spectrum(t1, t2);
      REQUIRE(p.modes == std::vector<int>{-1, 1, 3});
      for (std::size_t k = 0; k < 3; ++k)
        worst = std::max(worst, std::abs(p.amplitudes[k] - brute_mode(t1, t2, p.modes[k])));
      for (int m : {-3, -2, 0, 2, 4}) worst = std::max(worst, std::abs(brute_mode(t1, t2, m)));
    }
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("two-pulse special points") {
  const auto p = two_pulse_spectrum(kPi / 2, kPi);
  CHECK(std::abs(p.amplitudes[2]) == doctest::Approx(0.5));
  CHECK(std::abs(p.amplitudes[0]) < 1e-15);
  CHECK(std::abs(p.amplitudes[1]) < 1e-15);
  const auto q = two_pulse_spectrum(kPi / 2, 0.0);
  CHECK(std::abs(q.amplitudes[0]) == doctest::Approx(0.5));
  CHECK_THROWS_AS(two_pulse_spectrum(-0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(two_pulse_spectrum(1.0, 7.0), InvalidArgument);
}

TEST_CASE("photon states") {
  const auto coh = make_state(CoherentState{Complex(1.0, 0.5), 20});
  CHECK(coh.truncation() == 20);
  CHECK(coh.norm() == doctest::Approx(1.0));
  CHECK(std::abs(coh.coefficients[2] / coh.coefficients[1] - Complex(1.0, 0.5) / std::sqrt(2.0)) < 1e-14);
  CHECK_THROWS_AS(make_state(CoherentState{Complex(3.0, 0.0), 10}), InvalidArgument);

  for (double th : {0.2, 1.0, 2.5}) {
    const auto a = make_state(ZeroOnePhotonState{th}).coefficients;
    const auto b = make_state(ZeroOnePhotonState{kPi - th}).coefficients;
    const auto c = make_state(ZeroOnePhotonState{2 * kPi - th}).coefficients;
    CHECK(std::abs(a[0]) == doctest::Approx(std::abs(b[1])));
    CHECK(std::abs(a[1]) == doctest::Approx(std::abs(b[0])));
    CHECK(std::abs(a[1]) == doctest::Approx(std::abs(c[1])));
    CHECK(a[0].real() >= 0.0);
  }
  const auto pi_state = make_state(ZeroOnePhotonState{kPi}).coefficients;
  CHECK(std::abs(pi_state[1]) == doctest::Approx(1.0));

  const auto two = make_state(TwoPhotonState{Complex(1.0, 0.0), Complex(0.0, 1.0)});
  CHECK(two.truncation() == 2);
  CHECK(std::abs(two.coefficients[0]) == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("peak count law") {
  CHECK(predicted_peak_count(1) == 3);
  CHECK(predicted_peak_count(2) == 5);
  CHECK_FALSE(predicted_peak_count(std::nullopt).has_value());
  CHECK_THROWS_AS(predicted_peak_count(0), InvalidArgument);
}

TEST_CASE("fault injection hook") {
  const double clean = bessel_j(1, 2.0);
  testing::corrupt_bessel(0.1);
  CHECK(bessel_j(1, 2.0) == doctest::Approx(1.1 * clean));
  CHECK(jacobi_anger_residual(2.0, 0.4, 40) > 1e-3);
  testing::corrupt_bessel(0.0);
  CHECK(bessel_j(1, 2.0) == clean);
}
