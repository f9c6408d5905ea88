#pragma once

#include "qwm/matrix.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace qwm::oracles {

/// Bessel function of the first kind J_n(z) for n >= 0 and |z| <= 30,
/// absolute error below 1e-12. Throws InvalidArgument outside that range.
double bessel_j(int n, double z);

/// Location of the first maximum of J_n on z > 0 (n >= 1).
double bessel_first_maximum(int n);

/// <b_{2k+1}> = (-1)^k / 2 * J_{2k+1}(2 Omega dt) for two equal simultaneous
/// tones in the short-pulse limit.
double classical_mode_amplitude(int k, double omega_rabi, double dt);

/// Photons per cycle in mode 2k+1: J_{2k+1}^2(2 Omega dt) / 4.
double classical_photons(int k, double omega_rabi, double dt);

/// |sin(z cos phi) - 2 sum_{k=0}^{K} (-1)^k J_{2k+1}(z) cos((2k+1) phi)|
double jacobi_anger_residual(double z, double phi, int terms);

struct PeakPrediction {
  std::vector<int> modes;
  std::vector<Complex> amplitudes;
};

/// Decay-free sequential protocol: rotation theta1 by the omega_- tone, then
/// theta2 by the omega_+ tone, starting from |g>. The final coherence has
/// exactly three Fourier components, at modes -1, +1 and +3.
PeakPrediction two_pulse_spectrum(double theta1, double theta2);

/// Truncated photon-number state, c_0 .. c_{N_max}, unit norm.
struct FockVector {
  std::vector<Complex> coefficients;

  int truncation() const { return static_cast<int>(coefficients.size()) - 1; }
  double norm() const;
};

struct CoherentState {
  Complex alpha;
  int truncation;
};
struct ZeroOnePhotonState {
  double theta;
};
struct TwoPhotonState {
  Complex gamma1;
  Complex gamma2;
};
using StateParams = std::variant<CoherentState, ZeroOnePhotonState, TwoPhotonState>;

/// Coherent state truncated at N_max (requires |alpha|^2 / N_max < 0.5) and
/// renormalized; zero-one photon state |cos(theta/2)| (|0> + tan(theta/2) |1>);
/// two-photon state (|0> + gamma1 |1> + gamma2 |2>) / sqrt(1 + |gamma1|^2 + |gamma2|^2).
FockVector make_state(const StateParams& params);

/// 2 n_ph + 1 for a state with n_ph photons; nullopt (unbounded) for the
/// classical coherent state, passed as nullopt.
std::optional<int> predicted_peak_count(std::optional<int> n_ph);

namespace testing {
/// Fault injection for the self-test: scales every bessel_j result by
/// (1 + relative_error). Zero restores normal behaviour.
void corrupt_bessel(double relative_error);
}  // namespace testing

}  // namespace qwm::oracles
