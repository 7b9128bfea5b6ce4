#include "run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rieszfeat/feature_csv.hpp"

namespace rieszfeat::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("invalid boolean '" + value + "' for key '" + key + "'");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

template <class T>
std::string int_text(T v) {
  return std::to_string(v);
}

ConfigKey string_key(std::string name, std::string help, std::string RunConfig::*member) {
  return {std::move(name), std::move(help),
          [member](RunConfig& c, const std::string& v) { c.*member = v; },
          [member](const RunConfig& c) { return c.*member; }};
}

std::vector<ConfigKey> build_schema() {
  std::vector<ConfigKey> s;
  s.push_back({"depth", "hierarchy depth K",
               [](RunConfig& c, const std::string& v) { c.riesz.depth = parse_number<int>("depth", v); },
               [](const RunConfig& c) { return int_text(c.riesz.depth); }});
  s.push_back({"angles", "rotation count M (multiple of 4)",
               [](RunConfig& c, const std::string& v) { c.riesz.angles = parse_number<int>("angles", v); },
               [](const RunConfig& c) { return int_text(c.riesz.angles); }});
  s.push_back({"scale_constant", "layer constant C",
               [](RunConfig& c, const std::string& v) {
                 c.riesz.scale_constant = parse_number<double>("scale_constant", v);
               },
               [](const RunConfig& c) { return format_double(c.riesz.scale_constant); }});
  s.push_back({"pooling", "mean or max",
               [](RunConfig& c, const std::string& v) {
                 try {
                   c.riesz.pooling = parse_pooling(v);
                 } catch (const std::invalid_argument& e) {
                   throw ConfigError(e.what());
                 }
               },
               [](const RunConfig& c) { return std::string(to_string(c.riesz.pooling)); }});
  s.push_back({"presmooth_sigma", "Gaussian pre-smoothing width in pixels, or 'none'",
               [](RunConfig& c, const std::string& v) {
                 if (v == "none" || v.empty()) {
                   c.riesz.presmooth_sigma.reset();
                 } else {
                   c.riesz.presmooth_sigma = parse_number<double>("presmooth_sigma", v);
                 }
               },
               [](const RunConfig& c) {
                 return c.riesz.presmooth_sigma ? format_double(*c.riesz.presmooth_sigma)
                                                : std::string("none");
               }});
  s.push_back(string_key("data_dir", "dataset root (default $RIESZ_DATA_DIR)", &RunConfig::data_dir));
  s.push_back(string_key("images", "IDX image file", &RunConfig::images));
  s.push_back(string_key("labels", "IDX label file", &RunConfig::labels));
  s.push_back(string_key("image_dir", "directory of graymaps; one subdirectory per class",
                         &RunConfig::image_dir));
  s.push_back(string_key("manifest", "multi-scale test manifest", &RunConfig::manifest));
  s.push_back(string_key("features", "feature CSV input", &RunConfig::features));
  s.push_back(string_key("model", "model file", &RunConfig::model));
  s.push_back(string_key("output", "output file", &RunConfig::output));
  s.push_back(string_key("output_dir", "output directory", &RunConfig::output_dir));
  s.push_back({"bbox", "crop with the bounding-box pipeline before extraction",
               [](RunConfig& c, const std::string& v) { c.bbox = parse_bool("bbox", v); },
               [](const RunConfig& c) { return bool_text(c.bbox); }});
  s.push_back({"bbox_pad", "zero padding in pixels",
               [](RunConfig& c, const std::string& v) {
                 c.bbox_params.pad = parse_number<std::size_t>("bbox_pad", v);
               },
               [](const RunConfig& c) { return int_text(c.bbox_params.pad); }});
  s.push_back({"bbox_threshold", "foreground threshold on the normalized image",
               [](RunConfig& c, const std::string& v) {
                 c.bbox_params.threshold = parse_number<double>("bbox_threshold", v);
               },
               [](const RunConfig& c) { return format_double(c.bbox_params.threshold); }});
  s.push_back({"bbox_enlarge", "relative box enlargement",
               [](RunConfig& c, const std::string& v) {
                 c.bbox_params.enlarge = parse_number<double>("bbox_enlarge", v);
               },
               [](const RunConfig& c) { return format_double(c.bbox_params.enlarge); }});
  s.push_back(string_key("classifier", "pca or svm", &RunConfig::classifier));
  s.push_back({"pca_components", "principal components per class",
               [](RunConfig& c, const std::string& v) {
                 c.pca_components = parse_number<int>("pca_components", v);
               },
               [](const RunConfig& c) { return int_text(c.pca_components); }});
  s.push_back({"svm_reg", "SVM regularization strength",
               [](RunConfig& c, const std::string& v) { c.svm.reg = parse_number<double>("svm_reg", v); },
               [](const RunConfig& c) { return format_double(c.svm.reg); }});
  s.push_back({"svm_epochs", "SVM passes over the training set",
               [](RunConfig& c, const std::string& v) {
                 c.svm.epochs = parse_number<int>("svm_epochs", v);
               },
               [](const RunConfig& c) { return int_text(c.svm.epochs); }});
  s.push_back({"seed", "random seed",
               [](RunConfig& c, const std::string& v) {
                 c.seed = parse_number<std::uint64_t>("seed", v);
                 c.svm.seed = c.seed;
               },
               [](const RunConfig& c) { return int_text(c.seed); }});
  s.push_back({"threads", "worker threads (0 = all cores)",
               [](RunConfig& c, const std::string& v) { c.threads = parse_number<int>("threads", v); },
               [](const RunConfig& c) { return int_text(c.threads); }});
  s.push_back({"limit", "process only the first N images (0 = all)",
               [](RunConfig& c, const std::string& v) {
                 c.limit = parse_number<std::size_t>("limit", v);
               },
               [](const RunConfig& c) { return int_text(c.limit); }});
  s.push_back({"bench_sizes", "comma-separated square image sizes",
               [](RunConfig& c, const std::string& v) {
                 std::vector<std::size_t> sizes;
                 std::stringstream ss(v);
                 std::string item;
                 while (std::getline(ss, item, ',')) {
                   sizes.push_back(parse_number<std::size_t>("bench_sizes", trim(item)));
                 }
                 c.bench_sizes = std::move(sizes);
               },
               [](const RunConfig& c) {
                 std::string out;
                 for (std::size_t i = 0; i < c.bench_sizes.size(); ++i) {
                   if (i) out += ",";
                   out += std::to_string(c.bench_sizes[i]);
                 }
                 return out;
               }});
  s.push_back({"bench_repeats", "timed repetitions per benchmark",
               [](RunConfig& c, const std::string& v) {
                 c.bench_repeats = parse_number<int>("bench_repeats", v);
               },
               [](const RunConfig& c) { return int_text(c.bench_repeats); }});
  s.push_back({"inject_fault", "debug: keep DC in every Riesz multiplier (verify must fail)",
               [](RunConfig& c, const std::string& v) { c.inject_fault = parse_bool("inject_fault", v); },
               [](const RunConfig& c) { return bool_text(c.inject_fault); }});
  return s;
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = build_schema();
  return schema;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  for (const auto& k : config_schema()) {
    if (k.name == key) {
      k.set(config, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

void apply_config_text(RunConfig& config, std::istream& in, const std::string& origin) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  apply_config_text(config, in, path.string());
}

RunConfig default_config() {
  RunConfig c;
  if (const char* env = std::getenv("RIESZ_DATA_DIR"); env != nullptr) c.data_dir = env;
  return c;
}

std::string format_config(const RunConfig& config) {
  std::string out;
  for (const auto& k : config_schema()) out += k.name + " = " + k.get(config) + "\n";
  return out;
}

void validate_config(const RunConfig& config) {
  try {
    config.riesz.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (config.classifier != "pca" && config.classifier != "svm") {
    throw ConfigError("classifier must be 'pca' or 'svm', got '" + config.classifier + "'");
  }
  if (config.pca_components < 1) throw ConfigError("pca_components must be >= 1");
  if (!(config.svm.reg > 0.0)) throw ConfigError("svm_reg must be positive");
  if (config.svm.epochs < 1) throw ConfigError("svm_epochs must be >= 1");
  if (config.threads < 0) throw ConfigError("threads must be >= 0");
  if (!(config.bbox_params.threshold > 0.0 && config.bbox_params.threshold <= 1.0)) {
    throw ConfigError("bbox_threshold must lie in (0, 1]");
  }
  if (!(config.bbox_params.enlarge >= 0.0)) throw ConfigError("bbox_enlarge must be >= 0");
  if (config.bench_repeats < 1) throw ConfigError("bench_repeats must be >= 1");
  for (auto n : config.bench_sizes) {
    if (n < 2) throw ConfigError("bench_sizes entries must be >= 2");
  }
}

std::filesystem::path resolve_input(const RunConfig& config, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || config.data_dir.empty() || std::filesystem::exists(p)) return p;
  return std::filesystem::path(config.data_dir) / p;
}

}  // namespace rieszfeat::cli
