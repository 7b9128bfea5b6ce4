#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rieszfeat/image.hpp"
#include "rieszfeat/riesz.hpp"
#include "run_config.hpp"

namespace rieszfeat::cli {

/// One test shard: `scale <float> images <path> labels <path>`.
struct ManifestEntry {
  double scale = 1.0;
  std::filesystem::path images;
  std::filesystem::path labels;
};

/// Relative shard paths are taken relative to base_dir. Throws ConfigError.
std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

struct ImageSet {
  std::vector<ImageGrid> images;
  std::vector<std::string> ids;  // file name or IDX index, for diagnostics
  bool labeled = false;
  std::vector<int> labels;
  int class_count = 0;
  std::vector<std::string> class_names;  // image_dir layout only
};

/// IDX pair (labels optional) or an image directory. With subdirectories, each
/// one is a class (sorted by name) holding .pgm/.pnm/.txt files; otherwise
/// the directory's own files are read unlabeled. `limit` > 0 keeps the first
/// images only.
ImageSet load_idx_set(const std::filesystem::path& images, const std::filesystem::path& labels,
                      std::size_t limit);
ImageSet load_image_dir(const std::filesystem::path& dir, std::size_t limit);

/// Dispatches on config.images / config.image_dir. Throws ConfigError when
/// neither (or both) is set.
ImageSet load_image_set(const RunConfig& config);

/// Runs fn(i) for i in [0, n) on `threads` workers (0 = hardware concurrency).
/// Exceptions thrown by fn are rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Bounding-box crop when config.bbox is set, otherwise the image itself.
ImageGrid prepare_image(const ImageGrid& img, const RunConfig& config);

struct BatchFeatures {
  std::vector<std::vector<double>> rows;  // NaN-filled where failed[i]
  std::vector<bool> failed;
  std::size_t failures = 0;
};

/// Per-image preparation and feature extraction, parallel over images, output
/// in input order. Blank images are logged to `log` with their index and
/// flagged; any other error propagates.
BatchFeatures extract_batch(const ImageSet& set, const RunConfig& config,
                            const MultiplierCache& cache, std::ostream& log);

}  // namespace rieszfeat::cli
