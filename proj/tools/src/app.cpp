#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>

#include "commands.hpp"

namespace rieszfeat::cli {

namespace {

struct CommandSpec {
  const char* name;
  const char* help;
  int (*run)(const RunConfig&, std::ostream&, std::ostream&);
};

constexpr CommandSpec kCommands[] = {
    {"extract", "compute feature CSV from images", cmd_extract},
    {"bbox", "write bounding-box crops", cmd_bbox},
    {"train", "fit a PCA or SVM model on a feature CSV", cmd_train},
    {"eval", "evaluate a model on a feature CSV or a multi-scale manifest", cmd_eval},
    {"verify", "run the numerical property suite", cmd_verify},
    {"bench", "time the transform and feature pipeline", cmd_bench},
};

struct CommandArgs {
  std::string config_file;
  bool print_config = false;
  std::map<std::string, std::optional<std::string>> overrides;
};

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Riesz feature extraction, classification and verification"};
  app.require_subcommand(1);
  std::vector<std::pair<CLI::App*, const CommandSpec*>> subs;
  std::map<const CommandSpec*, CommandArgs> args;

  for (const auto& spec : kCommands) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    auto& a = args[&spec];
    sub->add_option("--config", a.config_file, "flat 'key = value' configuration file");
    sub->add_flag("--print-config", a.print_config, "print the resolved configuration and exit");
    for (const auto& key : config_schema()) {
      std::string names = "--" + key.name;
      if (key.name.find('_') != std::string::npos) {
        std::string dashed = key.name;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        names += ",--" + dashed;
      }
      sub->add_option(names, a.overrides[key.name], key.help);
    }
    subs.emplace_back(sub, &spec);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  for (const auto& [sub, spec] : subs) {
    if (!sub->parsed()) continue;
    const auto& a = args[spec];
    try {
      RunConfig config = default_config();
      if (!a.config_file.empty()) apply_config_file(config, a.config_file);
      for (const auto& key : config_schema()) {
        if (const auto& v = a.overrides.at(key.name); v) apply_setting(config, key.name, *v);
      }
      validate_config(config);
      if (a.print_config) {
        out << format_config(config);
        return kExitOk;
      }
      return spec->run(config, out, err);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitFailure;
    }
  }
  return kExitConfig;
}

}  // namespace rieszfeat::cli
