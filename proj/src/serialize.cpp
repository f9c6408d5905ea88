#include "qwm/serialize.hpp"

#include "qwm/error.hpp"

#include "json.hpp"

#include <cstdio>

namespace qwm {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string spectrum_to_csv(const ModeSpectrum& spectrum) {
  std::string out = "m,re_amplitude,im_amplitude,photons_per_cycle\n";
  for (const auto& [m, v] : spectrum.modes) {
    out += std::to_string(m);
    out += ',' + format_double(v.amplitude.real());
    out += ',' + format_double(v.amplitude.imag());
    out += ',' + format_double(v.photons_per_cycle);
    out += '\n';
  }
  return out;
}

std::string spectrum_to_json(const ModeSpectrum& spectrum) {
  nlohmann::ordered_json doc;
  doc["d_omega"] = spectrum.d_omega;
  doc["total_photons_per_cycle"] = spectrum.total_photons_per_cycle;
  auto& modes = doc["modes"] = nlohmann::ordered_json::array();
  for (const auto& [m, v] : spectrum.modes)
    modes.push_back({{"m", m},
                     {"re_amplitude", v.amplitude.real()},
                     {"im_amplitude", v.amplitude.imag()},
                     {"photons_per_cycle", v.photons_per_cycle}});
  return doc.dump(2) + "\n";
}

ModeSpectrum spectrum_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    ModeSpectrum spectrum;
    spectrum.d_omega = doc.at("d_omega").get<double>();
    spectrum.total_photons_per_cycle = doc.at("total_photons_per_cycle").get<double>();
    for (const auto& mode : doc.at("modes")) {
      const int m = mode.at("m").get<int>();
      if (spectrum.modes.contains(m)) throw InvalidArgument("spectrum JSON: duplicate mode " + std::to_string(m));
      spectrum.modes[m] = ModeValue{
          Complex(mode.at("re_amplitude").get<double>(), mode.at("im_amplitude").get<double>()),
          mode.at("photons_per_cycle").get<double>()};
    }
    return spectrum;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("spectrum JSON: ") + e.what());
  }
}

}  // namespace qwm
