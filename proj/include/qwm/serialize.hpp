#pragma once

#include "qwm/spectrum.hpp"

#include <string>
#include <string_view>

namespace qwm {

/// 17 significant digits; parses back to the same double.
std::string format_double(double x);

/// Header row `m,re_amplitude,im_amplitude,photons_per_cycle`, one row per mode.
std::string spectrum_to_csv(const ModeSpectrum& spectrum);

/// JSON document mirroring ModeSpectrum. Round-trips bit-exactly.
std::string spectrum_to_json(const ModeSpectrum& spectrum);
ModeSpectrum spectrum_from_json(std::string_view text);

}  // namespace qwm
