#include "qwm/qwm.h"

#include "qwm/acceptance.hpp"
#include "qwm/error.hpp"
#include "qwm/oracles.hpp"
#include "qwm/scenario.hpp"
#include "qwm/serialize.hpp"
#include "qwm/spectrum.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct qwm_atom {
  qwm::AtomSpec spec;
};
struct qwm_sequence {
  qwm::PulseSequence seq;
};
struct qwm_spectrum {
  qwm::ModeSpectrum spec;
};

namespace {

thread_local std::string g_last_error;

qwm_status fail(qwm_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
qwm_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QWM_OK;
  } catch (const qwm::Error& e) {
    switch (e.kind()) {
      case qwm::ErrorKind::InvalidArgument: return fail(QWM_ERR_INVALID_ARGUMENT, e.what());
      case qwm::ErrorKind::Config: return fail(QWM_ERR_CONFIG, e.what());
      case qwm::ErrorKind::Numerical: return fail(QWM_ERR_NUMERICAL, e.what());
      case qwm::ErrorKind::Io: return fail(QWM_ERR_IO, e.what());
    }
    return fail(QWM_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QWM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QWM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QWM_ERR_INTERNAL, "unknown error");
  }
}

template <class T>
void need(const T* p, const char* name) {
  if (!p) throw qwm::InvalidArgument(std::string(name) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qwm::EngineOptions engine(unsigned threads) {
  qwm::EngineOptions o;
  o.threads = threads;
  return o;
}

}  // namespace

extern "C" {

const char* qwm_version(void) { return QWM_VERSION; }

const char* qwm_last_error(void) { return g_last_error.c_str(); }

const char* qwm_status_string(qwm_status status) {
  switch (status) {
    case QWM_OK: return "ok";
    case QWM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QWM_ERR_CONFIG: return "config error";
    case QWM_ERR_NUMERICAL: return "numerical error";
    case QWM_ERR_IO: return "I/O error";
    case QWM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

qwm_status qwm_atom_create(int levels, const double* transition_elements, double gamma1, double gamma_phi,
                           qwm_atom** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    if (levels < 2) throw qwm::InvalidArgument("levels must be >= 2");
    qwm::AtomSpec spec;
    spec.levels = levels;
    spec.transition_elements.assign(static_cast<std::size_t>(levels - 1), 1.0);
    if (transition_elements)
      spec.transition_elements.assign(transition_elements, transition_elements + (levels - 1));
    spec.gamma1 = gamma1;
    spec.gamma_phi = gamma_phi;
    spec.validate();
    *out = new qwm_atom{std::move(spec)};
  });
}

void qwm_atom_destroy(qwm_atom* atom) { delete atom; }

qwm_status qwm_sequence_classical(double omega_rabi, double dt, double t_r, double d_omega, qwm_sequence** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    *out = new qwm_sequence{qwm::preset_classical(omega_rabi, dt, t_r, d_omega)};
  });
}

qwm_status qwm_sequence_quantum(double omega1, double omega2, double dt1, double dt2, double gap, double t_r,
                                double d_omega, int first_tone, qwm_sequence** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    *out = new qwm_sequence{qwm::preset_quantum(omega1, omega2, dt1, dt2, gap, t_r, d_omega, first_tone)};
  });
}

qwm_status qwm_sequence_single(double omega_rabi, double dt, double t_r, double d_omega, int mode_index,
                               qwm_sequence** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    *out = new qwm_sequence{qwm::preset_single(omega_rabi, dt, t_r, d_omega, mode_index)};
  });
}

void qwm_sequence_destroy(qwm_sequence* sequence) { delete sequence; }

qwm_status qwm_spectrum_phase_grid(const qwm_atom* atom, const qwm_sequence* sequence, int grid_size, int max_mode,
                                   unsigned threads, qwm_spectrum** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    need(atom, "atom");
    need(sequence, "sequence");
    *out = new qwm_spectrum{qwm::phase_grid_spectrum(atom->spec, sequence->seq, grid_size, max_mode, engine(threads))};
  });
}

qwm_status qwm_spectrum_time_trace(const qwm_atom* atom, const qwm_sequence* sequence, int n_periods, int max_mode,
                                   unsigned threads, qwm_spectrum** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    need(atom, "atom");
    need(sequence, "sequence");
    *out = new qwm_spectrum{qwm::time_trace_spectrum(atom->spec, sequence->seq, n_periods, max_mode, engine(threads))};
  });
}

qwm_status qwm_spectrum_from_json(const char* text, qwm_spectrum** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    need(text, "text");
    *out = new qwm_spectrum{qwm::spectrum_from_json(text)};
  });
}

void qwm_spectrum_destroy(qwm_spectrum* spectrum) { delete spectrum; }

qwm_status qwm_spectrum_mode_count(const qwm_spectrum* spectrum, size_t* count) {
  return guard([&] {
    need(spectrum, "spectrum");
    need(count, "count");
    *count = spectrum->spec.modes.size();
  });
}

qwm_status qwm_spectrum_mode(const qwm_spectrum* spectrum, size_t index, int* m, double* re_amplitude,
                             double* im_amplitude, double* photons_per_cycle) {
  return guard([&] {
    need(spectrum, "spectrum");
    if (index >= spectrum->spec.modes.size()) throw qwm::InvalidArgument("mode index out of range");
    auto it = spectrum->spec.modes.begin();
    std::advance(it, static_cast<long>(index));
    if (m) *m = it->first;
    if (re_amplitude) *re_amplitude = it->second.amplitude.real();
    if (im_amplitude) *im_amplitude = it->second.amplitude.imag();
    if (photons_per_cycle) *photons_per_cycle = it->second.photons_per_cycle;
  });
}

qwm_status qwm_spectrum_photons(const qwm_spectrum* spectrum, int m, double* photons_per_cycle) {
  return guard([&] {
    need(spectrum, "spectrum");
    need(photons_per_cycle, "photons_per_cycle");
    *photons_per_cycle = spectrum->spec.photons(m);
  });
}

qwm_status qwm_spectrum_total_photons(const qwm_spectrum* spectrum, double* photons_per_cycle) {
  return guard([&] {
    need(spectrum, "spectrum");
    need(photons_per_cycle, "photons_per_cycle");
    *photons_per_cycle = spectrum->spec.total_photons_per_cycle;
  });
}

qwm_status qwm_detect_peaks(const qwm_spectrum* spectrum, double rel_threshold, int* modes, size_t capacity,
                            size_t* count) {
  return guard([&] {
    need(spectrum, "spectrum");
    need(count, "count");
    if (capacity > 0) need(modes, "modes");
    const auto peaks = qwm::detect_peaks(spectrum->spec, rel_threshold);
    for (std::size_t i = 0; i < peaks.size() && i < capacity; ++i) modes[i] = peaks[i];
    *count = peaks.size();
  });
}

qwm_status qwm_spectrum_to_json(const qwm_spectrum* spectrum, char** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    need(spectrum, "spectrum");
    *out = dup(qwm::spectrum_to_json(spectrum->spec));
  });
}

qwm_status qwm_spectrum_to_csv(const qwm_spectrum* spectrum, char** out) {
  return guard([&] {
    need(out, "out");
    *out = nullptr;
    need(spectrum, "spectrum");
    *out = dup(qwm::spectrum_to_csv(spectrum->spec));
  });
}

void qwm_string_free(char* s) { std::free(s); }

qwm_status qwm_bessel_j(int n, double z, double* out) {
  return guard([&] {
    need(out, "out");
    *out = qwm::oracles::bessel_j(n, z);
  });
}

qwm_status qwm_jacobi_anger_residual(double z, double phi, int terms, double* out) {
  return guard([&] {
    need(out, "out");
    *out = qwm::oracles::jacobi_anger_residual(z, phi, terms);
  });
}

qwm_status qwm_two_pulse_spectrum(double theta1, double theta2, int modes[3], double re[3], double im[3]) {
  return guard([&] {
    need(modes, "modes");
    need(re, "re");
    need(im, "im");
    const auto p = qwm::oracles::two_pulse_spectrum(theta1, theta2);
    for (std::size_t i = 0; i < 3; ++i) {
      modes[i] = p.modes[i];
      re[i] = p.amplitudes[i].real();
      im[i] = p.amplitudes[i].imag();
    }
  });
}

qwm_status qwm_predicted_peak_count(int n_ph, int* count) {
  return guard([&] {
    need(count, "count");
    const auto r = qwm::oracles::predicted_peak_count(n_ph < 0 ? std::nullopt : std::optional<int>(n_ph));
    *count = r.value_or(-1);
  });
}

qwm_status qwm_run_scenario(const char* config_path, const char* out_dir, unsigned threads, qwm_message_fn on_message,
                            void* user) {
  return guard([&] {
    need(config_path, "config_path");
    const auto config = qwm::load_scenario(config_path);
    if (on_message)
      for (const auto& w : config.warnings) on_message(QWM_MESSAGE_WARNING, w.c_str(), user);
    qwm::RunOptions opts;
    if (out_dir) opts.out_dir = out_dir;
    opts.threads = threads;
    const auto summary = qwm::run_scenario(config, opts);
    if (on_message) {
      for (std::size_t i = 0; i < summary.peaks.size(); ++i) {
        std::string line = summary.peaks.size() > 1 ? "point " + std::to_string(i) + ": peaks" : "peaks";
        for (int m : summary.peaks[i]) line += " " + std::to_string(m);
        on_message(QWM_MESSAGE_INFO, line.c_str(), user);
      }
      const auto done = "wrote " + std::to_string(summary.files.size()) + " files to " + summary.directory.string();
      on_message(QWM_MESSAGE_INFO, done.c_str(), user);
    }
  });
}

qwm_status qwm_selftest(const char* criteria, unsigned threads, qwm_criterion_fn on_result, void* user,
                        int* all_passed) {
  return guard([&] {
    need(all_passed, "all_passed");
    *all_passed = 0;
    qwm::AcceptanceOptions opts;
    opts.threads = threads;
    if (criteria) {
      std::string list = criteria;
      std::size_t start = 0;
      while (true) {
        const auto comma = list.find(',', start);
        auto item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (item.empty()) throw qwm::InvalidArgument("empty entry in criteria list '" + list + "'");
        opts.criteria.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    if (on_result)
      opts.on_result = [&](const qwm::CriterionResult& r) {
        on_result(r.id.c_str(), r.passed ? 1 : 0, qwm::format_result(r).c_str(), user);
      };
    const auto results = qwm::run_acceptance(opts);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    *all_passed = ok ? 1 : 0;
  });
}

qwm_status qwm_testing_corrupt_bessel(double relative_error) {
  return guard([&] { qwm::oracles::testing::corrupt_bessel(relative_error); });
}

}  // extern "C"
