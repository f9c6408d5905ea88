#include "doctest.h"

#include "qwm/error.hpp"
#include "qwm/spectrum.hpp"

#include <cmath>
#include <numbers>

using namespace qwm;

namespace {
constexpr double kPi = std::numbers::pi;
// Normalized units: Gamma1 = 1.
constexpr double kDw = 0.05;
constexpr double kTr = 12.0;
constexpr double kDt = 0.01;

const AtomSpec kAtom = AtomSpec::two_level(1.0);

PulseSequence sequential(double t1, double t2, int first = -1) {
  return preset_quantum(t1 / kDt, t2 / kDt, kDt, kDt, 0.0, kTr, kDw, first);
}
}  // namespace

TEST_CASE("a single tone lands on its own mode") {
  for (int m : {-2, 1, 3}) {
    const auto spec = phase_grid_spectrum(kAtom, preset_single(0.5 * kPi / kDt, kDt, kTr, kDw, m), 16, 5);
    CHECK(detect_peaks(spec) == std::vector<int>{m});
    // Short pulse: coherence (i/2) sin(theta), decaying at Gamma1 / 2.
    CHECK(spec.photons(m) == doctest::Approx(0.25).epsilon(0.02));
    CHECK(std::abs(spec.modes.at(m).amplitude) == doctest::Approx(0.5).epsilon(0.02));
    CHECK(spec.modes.at(m).amplitude.imag() > 0.0);
    CHECK(spec.total_photons_per_cycle == doctest::Approx(0.5).epsilon(0.02));
  }
}

TEST_CASE("coherent photons never exceed the total") {
  for (double x : {0.5, 2.0, 5.0}) {
    const auto spec = phase_grid_spectrum(kAtom, preset_classical(x / (2 * kDt), kDt, kTr, kDw), 32, 9);
    CHECK(spec.coherent_photons() <= spec.total_photons_per_cycle);
  }
}

TEST_CASE("classical drive only fills odd modes") {
  const auto spec = phase_grid_spectrum(kAtom, preset_classical(3.0 / (2 * kDt), kDt, kTr, kDw), 32, 9);
  for (const auto& [m, v] : spec.modes) {
    if (m % 2 == 0) CHECK(v.photons_per_cycle < 1e-14 * spec.max_photons());
    CHECK(v.photons_per_cycle == doctest::Approx(spec.photons(-m)).epsilon(1e-10));
  }
}

TEST_CASE("reversing the pulse order mirrors the spectrum") {
  const auto a = phase_grid_spectrum(kAtom, sequential(0.4 * kPi, 0.7 * kPi, -1), 32, 9);
  const auto b = phase_grid_spectrum(kAtom, sequential(0.4 * kPi, 0.7 * kPi, +1), 32, 9);
  for (int m = -9; m <= 9; ++m) CHECK(a.photons(m) == doctest::Approx(b.photons(-m)).epsilon(1e-10));
  CHECK(detect_peaks(a) == std::vector<int>{-1, 1, 3});
  CHECK(detect_peaks(b) == std::vector<int>{-3, -1, 1});
}

TEST_CASE("phase grid size does not matter once it resolves the modes") {
  const auto seq = sequential(0.3 * kPi, 0.6 * kPi);
  const auto coarse = phase_grid_spectrum(kAtom, seq, 12, 5);
  const auto fine = phase_grid_spectrum(kAtom, seq, 64, 5);
  for (int m = -5; m <= 5; ++m)
    CHECK(std::abs(coarse.photons(m) - fine.photons(m)) < 1e-12);
}

TEST_CASE("thread count does not change results") {
  const auto seq = preset_classical(4.0 / (2 * kDt), kDt, kTr, kDw);
  EngineOptions one;
  one.threads = 1;
  EngineOptions three;
  three.threads = 3;
  CHECK(phase_grid_spectrum(kAtom, seq, 32, 9, one) == phase_grid_spectrum(kAtom, seq, 32, 9, three));
}

TEST_CASE("time trace agrees with phase grid") {
  // Eight repetitions span one beat cycle exactly.
  const double dw = 0.02;
  const double tr = 2 * kPi / (dw * 8);
  const double dt = 0.05;
  const auto seq = preset_classical(2.5 / (2 * dt), dt, tr, dw);
  const auto grid = phase_grid_spectrum(kAtom, seq, 16, 3);
  const auto trace = time_trace_spectrum(kAtom, seq, 8, 3);
  for (int m = -3; m <= 3; ++m) {
    if (grid.photons(m) < 1e-8) continue;
    CHECK(trace.photons(m) == doctest::Approx(grid.photons(m)).epsilon(2e-3));
  }
  CHECK(trace.total_photons_per_cycle == doctest::Approx(grid.total_photons_per_cycle).epsilon(1e-3));
}

TEST_CASE("dephasing removes coherent emission") {
  const auto seq = preset_single(0.5 * kPi / kDt, kDt, kTr, kDw, 1);
  const auto clean = phase_grid_spectrum(kAtom, seq, 8, 3);
  const auto noisy = phase_grid_spectrum(AtomSpec::two_level(1.0, 1.0), seq, 8, 3);
  // Coherence decays at Gamma1/2 + gamma_phi: photons scale by 1/3.
  CHECK(noisy.photons(1) == doctest::Approx(clean.photons(1) / 3.0).epsilon(1e-3));
  CHECK(noisy.total_photons_per_cycle == doctest::Approx(clean.total_photons_per_cycle).epsilon(1e-2));
}

TEST_CASE("physicality is tracked") {
  PhysicalityReport report;
  EngineOptions opt;
  opt.physicality = &report;
  phase_grid_spectrum(AtomSpec::three_level(1.0), sequential(0.5 * kPi, 0.5 * kPi), 8, 3, opt);
  CHECK(report.samples > 0);
  CHECK(report.within());
}

TEST_CASE("emission records") {
  const auto traj = simulate_repetition(kAtom, sequential(0.5 * kPi, 0.5 * kPi), 0.3);
  auto rec = emission_record(traj, kAtom, 0.3);
  CHECK(rec.samples.size() == traj.size());
  CHECK(rec.is_valid(kAtom));
  rec.samples[3].amplitude = 0.7;
  CHECK_FALSE(rec.is_valid(kAtom));
}

TEST_CASE("argument checks") {
  const auto seq = sequential(1.0, 1.0);
  CHECK_THROWS_AS(phase_grid_spectrum(kAtom, seq, 10, 5), InvalidArgument);
  CHECK_THROWS_AS(phase_grid_spectrum(kAtom, seq, 16, -1), InvalidArgument);
  CHECK_THROWS_AS(time_trace_spectrum(kAtom, seq, 5, 3), InvalidArgument);
  CHECK_THROWS_AS(drive_end_modes(kAtom, seq, 4, 3), InvalidArgument);
  const auto spec = phase_grid_spectrum(kAtom, seq, 8, 3);
  CHECK_THROWS_AS(detect_peaks(spec, 0.0), InvalidArgument);
  CHECK_THROWS_AS(detect_peaks(spec, 1.0), InvalidArgument);
  CHECK(detect_peaks(ModeSpectrum{}).empty());
}

TEST_CASE("drive end modes without decay") {
  // A single pi/2 pulse on mode 2 leaves coherence (i/2) e^{2 i phi}.
  const auto modes = drive_end_modes(AtomSpec::two_level(0.0), preset_single(0.5 * kPi / kDt, kDt, kTr, kDw, 2), 8, 3);
  CHECK(std::abs(modes.at(2) - std::complex<double>(0.0, 0.5)) < 1e-13);
  CHECK(std::abs(modes.at(-2)) < 1e-13);
}
