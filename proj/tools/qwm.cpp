// Command-line front end. Talks to the library only through qwm.h.
#include "qwm/qwm.h"

#include "CLI11.hpp"

#include <cstdio>
#include <string>

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kNumerical = 3, kIo = 4 };

int exit_code(qwm_status s) {
  switch (s) {
    case QWM_OK: return kOk;
    case QWM_ERR_INVALID_ARGUMENT:
    case QWM_ERR_CONFIG: return kConfig;
    case QWM_ERR_NUMERICAL: return kNumerical;
    case QWM_ERR_IO: return kIo;
    case QWM_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

int report(qwm_status s) {
  if (s != QWM_OK) std::fprintf(stderr, "qwm: %s: %s\n", qwm_status_string(s), qwm_last_error());
  return exit_code(s);
}

void on_message(int kind, const char* message, void*) {
  if (kind == QWM_MESSAGE_WARNING)
    std::fprintf(stderr, "warning: %s\n", message);
  else
    std::printf("%s\n", message);
}

void on_criterion(const char*, int, const char* line, void*) {
  std::printf("%s\n", line);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum wave mixing simulator"};
  app.set_version_flag("--version", std::string(qwm_version()));
  app.require_subcommand(1);

  unsigned threads = 0;
  long long seed = 0;

  auto* run = app.add_subcommand("run", "Simulate a scenario config and write spectra, sweep table and manifest");
  std::string config;
  std::string out_dir;
  run->add_option("config", config, "Scenario config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--threads", threads, "Worker threads, 0 = available parallelism");
  run->add_option("--seed", seed, "Reserved; the pipeline is deterministic and ignores it");

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  std::string criteria;
  std::string fault;
  selftest->add_option("--criteria", criteria, "Comma-separated criterion ids, e.g. A1,A7");
  selftest->add_option("--threads", threads, "Worker threads, 0 = available parallelism");
  selftest->add_option("--seed", seed, "Reserved; the pipeline is deterministic and ignores it");
  selftest->add_option("--inject-fault", fault, "Corrupt an oracle to check that the suite notices")
      ->check(CLI::IsMember({"bessel"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (run->parsed())
    return report(qwm_run_scenario(config.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), threads, on_message,
                                   nullptr));

  if (fault == "bessel") {
    if (const auto s = qwm_testing_corrupt_bessel(0.05); s != QWM_OK) return report(s);
  }
  int all_passed = 0;
  const auto s = qwm_selftest(criteria.empty() ? nullptr : criteria.c_str(), threads, on_criterion, nullptr, &all_passed);
  if (s != QWM_OK) return report(s);
  std::printf("%s\n", all_passed ? "selftest: all criteria passed" : "selftest: FAILED");
  return all_passed ? kOk : kNumerical;
}
