#include "doctest.h"

#include "qwm/error.hpp"
#include "qwm/pulse.hpp"

#include <vector>

using namespace qwm;

TEST_CASE("classical preset layout") {
  const auto seq = preset_classical(5.0, 0.2, 1.0, 0.1);
  REQUIRE(seq.segments.size() == 2);
  CHECK(seq.segments[0].tones.size() == 2);
  CHECK(seq.segments[0].tones[0].mode_index == -1);
  CHECK(seq.segments[0].tones[1].mode_index == 1);
  CHECK(seq.segments[1].is_free_decay());
  CHECK(seq.total_duration() == doctest::Approx(1.0));
  CHECK_NOTHROW(seq.validate());
  CHECK_THROWS_AS(preset_classical(5.0, 2.0, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(preset_classical(-1.0, 0.2, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(preset_classical(1.0, 0.2, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("quantum preset layout") {
  const auto seq = preset_quantum(1.0, 2.0, 0.1, 0.2, 0.05, 1.0, 0.1);
  REQUIRE(seq.segments.size() == 4);
  CHECK(seq.segments[0].tones[0].mode_index == -1);
  CHECK(seq.segments[0].tones[0].rabi_amplitude == 1.0);
  CHECK(seq.segments[1].is_free_decay());
  CHECK(seq.segments[1].duration == doctest::Approx(0.05));
  CHECK(seq.segments[2].tones[0].mode_index == 1);
  CHECK(seq.segments[3].duration == doctest::Approx(0.65));

  const auto rev = preset_quantum(1.0, 2.0, 0.1, 0.2, 0.0, 1.0, 0.1, +1);
  CHECK(rev.segments[0].tones[0].mode_index == 1);
  CHECK(rev.segments[2].tones[0].mode_index == -1);

  CHECK_THROWS_AS(preset_quantum(1.0, 1.0, 0.5, 0.5, 0.1, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(preset_quantum(1.0, 1.0, 0.1, 0.1, 0.0, 1.0, 0.1, 0), InvalidArgument);
}

TEST_CASE("normalized drops empty segments and merges decay") {
  const auto seq = preset_quantum(1.0, 2.0, 0.1, 0.2, 0.0, 1.0, 0.1);
  const auto n = seq.normalized();
  CHECK(n.segments.size() == 3);
  CHECK(n == n.normalized());

  PulseSequence s{{{{}, 0.2}, {{}, 0.3}, {{DriveTone{0, 1.0, 0.0}}, 0.1}}, 1.0, 0.1, {}};
  const auto m = s.normalized();
  REQUIRE(m.segments.size() == 2);
  CHECK(m.segments[0].duration == doctest::Approx(0.5));
}

TEST_CASE("validation") {
  PulseSequence s{{{{}, 2.0}}, 1.0, 0.1, {}};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.segments[0].duration = 1.0;
  CHECK_NOTHROW(s.validate());
  s.detuning = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("detuning warning") {
  const auto atom = AtomSpec::two_level(1.0);
  CHECK_FALSE(preset_classical(1.0, 0.1, 1.0, 0.05).detuning_warning(atom));
  CHECK(preset_classical(1.0, 0.1, 1.0, 0.6).detuning_warning(atom));
}

TEST_CASE("sweep parameters") {
  CHECK(parse_sweep_parameter("omega_rabi") == SweepParameter::OmegaRabi);
  CHECK(parse_sweep_parameter("omega2") == SweepParameter::Omega2);
  CHECK(to_string(SweepParameter::Dt) == "dt");
  CHECK_THROWS_AS(parse_sweep_parameter("theta"), InvalidArgument);
}

TEST_CASE("sweep grid") {
  const auto base = preset_classical(1.0, 0.1, 1.0, 0.05);
  const std::vector<double> values{2.0, 3.0};
  const auto grid = sweep_grid(base, SweepParameter::OmegaRabi, values);
  REQUIRE(grid.size() == 2);
  CHECK(grid[1] == preset_classical(3.0, 0.1, 1.0, 0.05));
  const auto dts = sweep_grid(base, SweepParameter::Dt, std::vector<double>{0.2});
  CHECK(dts[0].segments[0].duration == 0.2);

  CHECK_THROWS_AS(sweep_grid(base, SweepParameter::OmegaRabi, std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(sweep_grid(base, SweepParameter::Omega1, values), InvalidArgument);
  CHECK_THROWS_AS(sweep_grid(base, SweepParameter::Dt, std::vector<double>{2.0}), InvalidArgument);

  const auto q = preset_quantum(1.0, 2.0, 0.1, 0.1, 0.0, 1.0, 0.05, 1);
  const auto qg = sweep_grid(q, SweepParameter::Omega2, values);
  CHECK(qg[0] == preset_quantum(1.0, 2.0, 0.1, 0.1, 0.0, 1.0, 0.05, 1));
  CHECK(qg[1].segments[2].tones[0].rabi_amplitude == 3.0);
  CHECK_THROWS_AS(sweep_grid(q, SweepParameter::OmegaRabi, values), InvalidArgument);

  CHECK_THROWS_AS(sweep_grid(preset_single(1.0, 0.1, 1.0, 0.05, 2), SweepParameter::OmegaRabi, values),
                  InvalidArgument);
}
