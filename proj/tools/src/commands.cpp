#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

#include "datasets.hpp"
#include "rieszfeat/feature_csv.hpp"
#include "rieszfeat/io.hpp"
#include "rieszfeat/model_io.hpp"
#include "rieszfeat/preprocess.hpp"

namespace rieszfeat::cli {

namespace fs = std::filesystem;

namespace {

void require(const std::string& value, const char* key, const char* command) {
  if (value.empty()) {
    throw ConfigError(std::string(command) + " requires '" + key + "'");
  }
}

std::vector<std::string> feature_columns(const RieszConfig& riesz) {
  std::vector<std::string> cols;
  for (const auto& p : enumerate_paths(riesz.depth, riesz.angles)) cols.push_back(p.name());
  return cols;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

LabeledFeatures usable_rows(const FeatureTable& table, std::ostream& err) {
  LabeledFeatures data;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    bool finite = true;
    for (double v : table.rows[i]) finite = finite && std::isfinite(v);
    if (!finite) {
      ++skipped;
      continue;
    }
    data.rows.push_back(table.rows[i]);
    data.labels.push_back(table.labels[i]);
    data.class_count = std::max(data.class_count, table.labels[i] + 1);
  }
  if (skipped > 0) err << "warning: skipped " << skipped << " flagged rows\n";
  return data;
}

FeatureTable read_labeled_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read feature file " + path.string());
  FeatureTable table = read_feature_csv(in);
  if (!table.with_labels) throw ConfigError(path.string() + " has no label column");
  return table;
}

struct ShardResult {
  std::string name;
  double scale = 1.0;
  Evaluation eval;
  std::size_t flagged = 0;
};

void print_confusion(std::ostream& out, const Evaluation& e) {
  out << "  confusion (rows: true, columns: predicted)\n";
  for (const auto& row : e.confusion) {
    out << "   ";
    for (auto v : row) out << ' ' << std::setw(5) << v;
    out << '\n';
  }
}

}  // namespace

int cmd_extract(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.output, "output", "extract");
  const ImageSet set = load_image_set(config);
  const MultiplierCache cache;
  const auto batch = extract_batch(set, config, cache, err);

  FeatureTable table;
  table.columns = feature_columns(config.riesz);
  table.rows = batch.rows;
  table.with_labels = set.labeled;
  table.labels = set.labels;
  auto file = open_output(config.output);
  write_feature_csv(file, table);
  out << "extract: " << set.images.size() << " images, " << table.columns.size()
      << " features each, " << batch.failures << " flagged -> " << config.output << '\n';
  return kExitOk;
}

int cmd_bbox(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.output_dir, "output_dir", "bbox");
  const ImageSet set = load_image_set(config);
  fs::create_directories(config.output_dir);
  std::vector<std::optional<BboxResult>> results(set.images.size());
  std::vector<std::string> errors(set.images.size());
  parallel_for(set.images.size(), config.threads, [&](std::size_t i) {
    try {
      results[i] = bbox_extract_detailed(set.images[i], config.bbox_params);
    } catch (const BlankImageError& e) {
      errors[i] = e.what();
    }
  });
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]) {
      err << "warning: image " << i << " (" << set.ids[i] << "): " << errors[i] << "; skipped\n";
      ++skipped;
      continue;
    }
    std::ostringstream name;
    name << std::setw(6) << std::setfill('0') << i << ".pgm";
    write_pgm(fs::path(config.output_dir) / name.str(), results[i]->crop);
    const auto& t = results[i]->tight;
    const auto& e = results[i]->enlarged;
    out << "image " << i << " (" << set.ids[i] << "): tight " << t.height << "x" << t.width
        << " at (" << t.row0 << "," << t.col0 << "), crop " << e.height << "x" << e.width << '\n';
  }
  out << "bbox: " << results.size() - skipped << " crops written to " << config.output_dir
      << ", " << skipped << " skipped\n";
  return kExitOk;
}

int cmd_train(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.features, "features", "train");
  require(config.model, "model", "train");
  const auto table = read_labeled_table(resolve_input(config, config.features));
  const LabeledFeatures data = usable_rows(table, err);
  if (data.rows.empty()) throw std::runtime_error("no usable training rows in " + config.features);

  StoredModel model;
  if (config.classifier == "pca") {
    auto fit = pca_fit(data, config.pca_components);
    for (const auto& w : fit.warnings) err << "warning: " << w << '\n';
    model = std::move(fit.model);
  } else {
    SvmClassifier clf;
    clf.normalizer = maxabs_fit(data.rows);
    clf.model = svm_fit(clf.normalizer.apply(data), config.svm);
    model = std::move(clf);
  }
  if (fs::path(config.model).has_parent_path()) {
    fs::create_directories(fs::path(config.model).parent_path());
  }
  save_model(config.model, model);
  out << "train: " << config.classifier << " on " << data.rows.size() << " rows, "
      << model_class_count(model) << " classes, dim " << model_dim(model) << " -> " << config.model
      << '\n';
  return kExitOk;
}

int cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.model, "model", "eval");
  if (config.features.empty() == config.manifest.empty()) {
    throw ConfigError("eval requires exactly one of 'features' or 'manifest'");
  }
  const fs::path model_path = resolve_input(config, config.model);
  if (!fs::exists(model_path)) throw std::runtime_error("model file " + model_path.string() + " not found");
  const StoredModel model = load_model(model_path);
  const Predictor predictor = [&model](std::span<const double> x) { return predict(model, x); };

  std::vector<ShardResult> shards;
  if (!config.features.empty()) {
    const auto table = read_labeled_table(resolve_input(config, config.features));
    LabeledFeatures data = usable_rows(table, err);
    data.class_count = std::max<int>(data.class_count, static_cast<int>(model_class_count(model)));
    ShardResult r{"features", 1.0, evaluate(predictor, data), table.rows.size() - data.rows.size()};
    shards.push_back(std::move(r));
  } else {
    const MultiplierCache cache;
    for (const auto& entry : load_manifest(resolve_input(config, config.manifest))) {
      const ImageSet set = load_idx_set(entry.images, entry.labels, config.limit);
      const auto batch = extract_batch(set, config, cache, err);
      LabeledFeatures data;
      data.class_count = std::max<int>(set.class_count, static_cast<int>(model_class_count(model)));
      std::size_t flagged_wrong = 0;
      for (std::size_t i = 0; i < set.images.size(); ++i) {
        if (batch.failed[i]) {
          ++flagged_wrong;
          continue;
        }
        data.rows.push_back(batch.rows[i]);
        data.labels.push_back(set.labels[i]);
      }
      ShardResult r;
      r.name = entry.images.filename().string();
      r.scale = entry.scale;
      r.flagged = flagged_wrong;
      if (!data.rows.empty()) r.eval = evaluate(predictor, data);
      // flagged images count as misclassified
      r.eval.total += flagged_wrong;
      r.eval.accuracy = r.eval.total ? static_cast<double>(r.eval.correct) / r.eval.total : 0.0;
      shards.push_back(std::move(r));
    }
  }

  for (const auto& s : shards) {
    out << "eval " << s.name << " scale " << format_double(s.scale) << ": accuracy "
        << std::fixed << std::setprecision(2) << 100.0 * s.eval.accuracy << "% (" << s.eval.correct
        << "/" << s.eval.total << ", " << s.flagged << " flagged)\n";
    out.unsetf(std::ios::floatfield);
    print_confusion(out, s.eval);
  }
  if (!config.output.empty()) {
    auto report = open_output(config.output);
    report << "shard,scale,accuracy,correct,total,flagged\n";
    for (const auto& s : shards) {
      report << s.name << ',' << format_double(s.scale) << ',' << format_double(s.eval.accuracy)
             << ',' << s.eval.correct << ',' << s.eval.total << ',' << s.flagged << '\n';
    }
    fs::path confusion_path(config.output);
    confusion_path.replace_filename(confusion_path.stem().string() + "_confusion.csv");
    auto confusion = open_output(confusion_path);
    confusion << "shard,true,predicted,count\n";
    for (const auto& s : shards) {
      for (std::size_t t = 0; t < s.eval.confusion.size(); ++t) {
        for (std::size_t p = 0; p < s.eval.confusion[t].size(); ++p) {
          confusion << s.name << ',' << t << ',' << p << ',' << s.eval.confusion[t][p] << '\n';
        }
      }
    }
  }
  return kExitOk;
}

}  // namespace rieszfeat::cli
