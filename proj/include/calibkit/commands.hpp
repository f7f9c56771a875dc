#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "calibkit/calibrations.hpp"
#include "calibkit/grassmann.hpp"

namespace calib::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2, kNumerical = 3 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  CalibrationSpec calibration;
  std::optional<Eigen::MatrixXd> frame;  // literal plane
  std::optional<std::uint64_t> seed;     // random plane (check, sff) or master seed
  SearchParams params;
  double tol = 1e-8;
  double cluster_tol = 1e-4;
  bool show_basis = false;
};

// Defaults, overridden by a JSON object with any of the keys
//   family m phase algebra n form seed trials tol cluster_tol basis
//   max_iters step_init armijo_c shrink grad_tol master_seed threads
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

struct CommandResult {
  int exit_code = kOk;
  nlohmann::json report;
  std::string csv;  // search only
  std::vector<std::string> warnings;
};

CommandResult cmd_module(const RunConfig& cfg);
CommandResult cmd_check(const RunConfig& cfg);
CommandResult cmd_search(const RunConfig& cfg);
CommandResult cmd_comass(const RunConfig& cfg);
CommandResult cmd_eds(const RunConfig& cfg);
CommandResult cmd_sff(const RunConfig& cfg);
CommandResult cmd_spinor(const RunConfig& cfg);

// Dispatch on cfg.command. Usage problems throw UsageError; numerical
// failures come back as kNumerical.
CommandResult run(const RunConfig& cfg);

// key: value lines for a flat-ish JSON object.
std::string format_text(const nlohmann::json& report);

}  // namespace calib::cli
