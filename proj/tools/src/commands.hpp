#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace rieszfeat::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2 };

// Each command returns an exit code. ConfigError escapes to the caller;
// other failures are reported on err and yield kExitFailure.
int cmd_extract(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bbox(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);

struct PropertyResult {
  std::string name;
  double tolerance = 0.0;
  double measured = 0.0;
  bool passed = false;
};

/// The seeded property suite behind `verify`.
std::vector<PropertyResult> run_property_suite(const RunConfig& config);

/// Entry point shared by main() and the tests.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rieszfeat::cli
