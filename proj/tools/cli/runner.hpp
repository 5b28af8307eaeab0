#pragma once

#include <optional>
#include <string>

namespace lalg::cli {

struct RunOptions {
  /// run, or one computation op: validate, cohomology, charclass, curvature, index,
  /// groupoid, thom-check, modular, roots.
  std::string command = "run";
  std::optional<std::size_t> truncate;
  std::optional<double> tolerance;
  std::optional<std::size_t> budget;
  bool json = false;
  bool parallel = false;
};

struct RunOutput {
  std::string out;
  std::string err;
  int exit_code = 0;  // 0 success, 1 violation or semantic error, 2 parse or usage error
};

RunOutput run(const std::string& document, const RunOptions& opts);

}  // namespace lalg::cli
