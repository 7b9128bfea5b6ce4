#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rieszfeat/classify.hpp"
#include "rieszfeat/preprocess.hpp"
#include "rieszfeat/representation.hpp"

namespace rieszfeat::cli {

/// Schema violation, unreadable config file or missing required setting.
/// Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  RieszConfig riesz;

  // inputs
  std::string data_dir;  // defaults to $RIESZ_DATA_DIR
  std::string images;
  std::string labels;
  std::string image_dir;
  std::string manifest;
  std::string features;
  std::string model;

  // outputs
  std::string output;
  std::string output_dir;

  bool bbox = false;
  BboxParams bbox_params;

  std::string classifier = "svm";
  int pca_components = 20;
  SvmParams svm;

  std::uint64_t seed = 0;
  int threads = 0;          // 0: hardware concurrency
  std::size_t limit = 0;    // 0: all images

  std::vector<std::size_t> bench_sizes{64, 128, 256};
  int bench_repeats = 5;

  bool inject_fault = false;
};

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

/// Every accepted key, in the order --print-config emits them.
const std::vector<ConfigKey>& config_schema();

/// Throws ConfigError on an unknown key or a malformed value.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment. Later lines win.
void apply_config_text(RunConfig& config, std::istream& in, const std::string& origin);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Defaults with data_dir taken from RIESZ_DATA_DIR when set.
RunConfig default_config();

/// Resolved configuration in the same "key = value" syntax it is read from.
std::string format_config(const RunConfig& config);

/// Cross-field checks shared by every command (RieszConfig ranges, classifier
/// name, ...). Throws ConfigError.
void validate_config(const RunConfig& config);

/// Relative paths that do not exist from the working directory are looked up
/// under data_dir.
std::filesystem::path resolve_input(const RunConfig& config, const std::string& path);

}  // namespace rieszfeat::cli
