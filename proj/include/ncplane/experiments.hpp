#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ncplane/config.hpp"
#include "ncplane/error.hpp"

namespace ncplane::experiments {

// A quantity compared against a bound; `pass` is value <= threshold unless
// the check is a boolean property (threshold 0, value 0 or 1).
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct Report {
  std::string experiment;
  std::vector<std::filesystem::path> files;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  double seconds = 0.0;
};

// Runs one experiment into cfg.out_dir (created if needed). Throws Error.
Report run(const config::ExperimentConfig& cfg);

// 1 for validation failures, 2 for numerical non-convergence.
int exit_code(ErrorKind kind);

// {"experiment": ..., "error": ..., "message": ..., "exit_code": ...}
std::string error_record(const std::string& experiment, ErrorKind kind,
                         const std::string& message);

// Human-readable summary.txt contents.
std::string summary_text(const Report& r);

// run() plus summary.txt on success or error.json on failure; returns the
// process exit code. Progress goes to `log`, the error record to `err`.
int run_and_record(const config::ExperimentConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace ncplane::experiments
