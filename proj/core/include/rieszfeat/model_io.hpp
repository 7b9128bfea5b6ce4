#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <variant>

#include "rieszfeat/classify.hpp"

namespace rieszfeat {

/// SVM together with the normalizer its inputs pass through.
struct SvmClassifier {
  MaxAbsNormalizer normalizer;
  SvmModel model;
};

using StoredModel = std::variant<PcaClassModel, SvmClassifier>;

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Plain-text model file:
///
///   rieszfeat-model 1
///   kind pca|svm
///   classes <C> dim <P> ...
///   ... row-major numbers, one vector per line
///
/// Numbers are written in shortest round-trip form, so reading a written
/// model reproduces it bit for bit.
void write_model(std::ostream& out, const StoredModel& model);
StoredModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const StoredModel& model);
StoredModel load_model(const std::filesystem::path& path);

std::size_t model_dim(const StoredModel& model);
std::size_t model_class_count(const StoredModel& model);

/// Applies the stored normalizer (SVM) and predicts.
int predict(const StoredModel& model, std::span<const double> raw_features);

}  // namespace rieszfeat
