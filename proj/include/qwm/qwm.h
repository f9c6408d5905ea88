/* C interface to the quantum wave mixing simulator.
 *
 * Every function returning qwm_status reports failures through the status
 * code; qwm_last_error() then describes the most recent failure on the
 * calling thread. Units are SI: rad/s for rates and Rabi frequencies,
 * seconds for durations. */
#ifndef QWM_H
#define QWM_H

#include <stddef.h>

#if defined(QWM_BUILDING_LIBRARY)
#define QWM_API __attribute__((visibility("default")))
#else
#define QWM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qwm_status {
  QWM_OK = 0,
  QWM_ERR_INVALID_ARGUMENT = 1,
  QWM_ERR_CONFIG = 2,
  QWM_ERR_NUMERICAL = 3,
  QWM_ERR_IO = 4,
  QWM_ERR_INTERNAL = 5
} qwm_status;

typedef struct qwm_atom qwm_atom;
typedef struct qwm_sequence qwm_sequence;
typedef struct qwm_spectrum qwm_spectrum;

QWM_API const char* qwm_version(void);
QWM_API const char* qwm_last_error(void);
QWM_API const char* qwm_status_string(qwm_status status);

/* transition_elements holds levels - 1 dipole ratios; NULL means all 1. */
QWM_API qwm_status qwm_atom_create(int levels, const double* transition_elements, double gamma1, double gamma_phi,
                                   qwm_atom** out);
QWM_API void qwm_atom_destroy(qwm_atom* atom);

QWM_API qwm_status qwm_sequence_classical(double omega_rabi, double dt, double t_r, double d_omega,
                                          qwm_sequence** out);
QWM_API qwm_status qwm_sequence_quantum(double omega1, double omega2, double dt1, double dt2, double gap, double t_r,
                                        double d_omega, int first_tone, qwm_sequence** out);
QWM_API qwm_status qwm_sequence_single(double omega_rabi, double dt, double t_r, double d_omega, int mode_index,
                                       qwm_sequence** out);
QWM_API void qwm_sequence_destroy(qwm_sequence* sequence);

/* threads = 0 uses the available hardware parallelism. */
QWM_API qwm_status qwm_spectrum_phase_grid(const qwm_atom* atom, const qwm_sequence* sequence, int grid_size,
                                           int max_mode, unsigned threads, qwm_spectrum** out);
QWM_API qwm_status qwm_spectrum_time_trace(const qwm_atom* atom, const qwm_sequence* sequence, int n_periods,
                                           int max_mode, unsigned threads, qwm_spectrum** out);
QWM_API qwm_status qwm_spectrum_from_json(const char* text, qwm_spectrum** out);
QWM_API void qwm_spectrum_destroy(qwm_spectrum* spectrum);

QWM_API qwm_status qwm_spectrum_mode_count(const qwm_spectrum* spectrum, size_t* count);
/* Modes are indexed in ascending order of m. */
QWM_API qwm_status qwm_spectrum_mode(const qwm_spectrum* spectrum, size_t index, int* m, double* re_amplitude,
                                     double* im_amplitude, double* photons_per_cycle);
/* 0 for untracked modes. */
QWM_API qwm_status qwm_spectrum_photons(const qwm_spectrum* spectrum, int m, double* photons_per_cycle);
QWM_API qwm_status qwm_spectrum_total_photons(const qwm_spectrum* spectrum, double* photons_per_cycle);
/* Writes up to capacity modes; *count receives the full number of peaks. */
QWM_API qwm_status qwm_detect_peaks(const qwm_spectrum* spectrum, double rel_threshold, int* modes, size_t capacity,
                                    size_t* count);

/* Strings returned through char** are owned by the caller; release them
 * with qwm_string_free. */
QWM_API qwm_status qwm_spectrum_to_json(const qwm_spectrum* spectrum, char** out);
QWM_API qwm_status qwm_spectrum_to_csv(const qwm_spectrum* spectrum, char** out);
QWM_API void qwm_string_free(char* s);

QWM_API qwm_status qwm_bessel_j(int n, double z, double* out);
QWM_API qwm_status qwm_jacobi_anger_residual(double z, double phi, int terms, double* out);
/* Decay-free coherence after the sequential two-pulse protocol: three modes
 * with complex amplitudes. */
QWM_API qwm_status qwm_two_pulse_spectrum(double theta1, double theta2, int modes[3], double re[3], double im[3]);
/* n_ph < 0 stands for the classical coherent drive; *count is then -1
 * (unbounded). */
QWM_API qwm_status qwm_predicted_peak_count(int n_ph, int* count);

enum { QWM_MESSAGE_INFO = 0, QWM_MESSAGE_WARNING = 1 };
typedef void (*qwm_message_fn)(int kind, const char* message, void* user);

/* Runs a scenario config file. out_dir overrides the configured output
 * directory when non-NULL. */
QWM_API qwm_status qwm_run_scenario(const char* config_path, const char* out_dir, unsigned threads,
                                    qwm_message_fn on_message, void* user);

typedef void (*qwm_criterion_fn)(const char* id, int passed, const char* report_line, void* user);

/* criteria is a comma-separated id list such as "A1,A7", or NULL for all. */
QWM_API qwm_status qwm_selftest(const char* criteria, unsigned threads, qwm_criterion_fn on_result, void* user,
                                int* all_passed);

/* Test hook: scales every Bessel value by (1 + relative_error); 0 restores. */
QWM_API qwm_status qwm_testing_corrupt_bessel(double relative_error);

#ifdef __cplusplus
}
#endif

#endif
