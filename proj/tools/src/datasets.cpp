#include "datasets.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "rieszfeat/io.hpp"
#include "rieszfeat/preprocess.hpp"

namespace rieszfeat::cli {

namespace fs = std::filesystem;

std::vector<ManifestEntry> parse_manifest(std::istream& in, const fs::path& base_dir) {
  std::vector<ManifestEntry> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string where = "manifest line " + std::to_string(line_no);
    if (tok.size() != 6 || tok[0] != "scale" || tok[2] != "images" || tok[4] != "labels") {
      throw ConfigError(where + ": expected 'scale <float> images <path> labels <path>'");
    }
    ManifestEntry e;
    try {
      std::size_t used = 0;
      e.scale = std::stod(tok[1], &used);
      if (used != tok[1].size() || !(e.scale > 0.0)) throw std::invalid_argument("scale");
    } catch (const std::exception&) {
      throw ConfigError(where + ": invalid scale '" + tok[1] + "'");
    }
    e.images = fs::path(tok[3]).is_absolute() ? fs::path(tok[3]) : base_dir / tok[3];
    e.labels = fs::path(tok[5]).is_absolute() ? fs::path(tok[5]) : base_dir / tok[5];
    out.push_back(std::move(e));
  }
  if (out.empty()) throw ConfigError("manifest lists no shards");
  return out;
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest " + path.string());
  return parse_manifest(in, path.parent_path());
}

ImageSet load_idx_set(const fs::path& images, const fs::path& labels, std::size_t limit) {
  ImageSet set;
  set.images = load_idx_images(images);
  if (!labels.empty()) {
    set.labels = load_idx_labels(labels);
    if (set.labels.size() != set.images.size()) {
      throw IdxError(IdxError::Kind::CountMismatch,
                     labels.string() + ": " + std::to_string(set.labels.size()) +
                         " labels for " + std::to_string(set.images.size()) + " images");
    }
    set.labeled = true;
  }
  if (limit > 0 && set.images.size() > limit) {
    set.images.erase(set.images.begin() + static_cast<std::ptrdiff_t>(limit), set.images.end());
    if (set.labeled) set.labels.resize(limit);
  }
  for (std::size_t i = 0; i < set.images.size(); ++i) set.ids.push_back("#" + std::to_string(i));
  if (set.labeled) {
    set.class_count = set.labels.empty() ? 0 : *std::max_element(set.labels.begin(), set.labels.end()) + 1;
  }
  return set;
}

namespace {

bool is_image_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".pnm" || ext == ".txt";
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : (e.is_regular_file() && is_image_file(e.path()))) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ImageSet load_image_dir(const fs::path& dir, std::size_t limit) {
  if (!fs::is_directory(dir)) throw ConfigError("image_dir " + dir.string() + " is not a directory");
  ImageSet set;
  const auto classes = sorted_entries(dir, true);
  auto add = [&](const fs::path& file, int label) {
    if (limit > 0 && set.images.size() >= limit) return;
    set.images.push_back(load_gray_image(file));
    set.ids.push_back(fs::relative(file, dir).string());
    if (label >= 0) set.labels.push_back(label);
  };
  if (classes.empty()) {
    for (const auto& f : sorted_entries(dir, false)) add(f, -1);
  } else {
    set.labeled = true;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      set.class_names.push_back(classes[c].filename().string());
      for (const auto& f : sorted_entries(classes[c], false)) add(f, static_cast<int>(c));
    }
    set.class_count = static_cast<int>(classes.size());
  }
  if (set.images.empty()) throw ConfigError("no images found under " + dir.string());
  return set;
}

ImageSet load_image_set(const RunConfig& config) {
  const bool idx = !config.images.empty();
  const bool dir = !config.image_dir.empty();
  if (idx == dir) throw ConfigError("set exactly one of 'images' or 'image_dir'");
  if (dir) return load_image_dir(resolve_input(config, config.image_dir), config.limit);
  const fs::path labels = config.labels.empty() ? fs::path() : resolve_input(config, config.labels);
  return load_idx_set(resolve_input(config, config.images), labels, config.limit);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (!stop) {
          const std::size_t i = next++;
          if (i >= n) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            stop = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

ImageGrid prepare_image(const ImageGrid& img, const RunConfig& config) {
  return config.bbox ? bbox_extract(img, config.bbox_params) : img;
}

BatchFeatures extract_batch(const ImageSet& set, const RunConfig& config,
                            const MultiplierCache& cache, std::ostream& log) {
  const std::size_t n = set.images.size();
  const std::size_t dim = feature_count(config.riesz.depth, config.riesz.angles);
  BatchFeatures out;
  out.rows.assign(n, std::vector<double>(dim, std::numeric_limits<double>::quiet_NaN()));
  out.failed.assign(n, false);
  std::vector<std::string> messages(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    try {
      out.rows[i] = extract_features(prepare_image(set.images[i], config), config.riesz, cache).values;
    } catch (const BlankImageError& e) {
      messages[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (messages[i].empty()) continue;
    out.failed[i] = true;
    ++out.failures;
    log << "warning: image " << i << " (" << set.ids[i] << "): " << messages[i]
        << "; row flagged\n";
  }
  return out;
}

}  // namespace rieszfeat::cli
