#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rieszfeat {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Feature rows with class labels in [0, class_count).
struct LabeledFeatures {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  int class_count = 0;

  std::size_t dim() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
  /// Throws std::invalid_argument on empty data, ragged rows, non-finite
  /// values or labels outside [0, class_count).
  void validate() const;
};

/// Per-coordinate division by the largest absolute training value.
struct MaxAbsNormalizer {
  std::vector<double> scales;  // zero columns get scale 1

  std::vector<double> apply(std::span<const double> x) const;
  LabeledFeatures apply(const LabeledFeatures& data) const;
};

MaxAbsNormalizer maxabs_fit(std::span<const std::vector<double>> train);

// ---------------------------------------------------------------------------
// Nearest-subspace PCA classifier

struct PcaClassSubspace {
  std::vector<double> mean;
  std::vector<std::vector<double>> basis;  // orthonormal directions, each of length dim
};

struct PcaClassModel {
  std::size_t dim = 0;
  int components = 0;  // requested d
  std::vector<PcaClassSubspace> classes;
};

struct PcaFitResult {
  PcaClassModel model;
  std::vector<std::string> warnings;  // rank truncations
};

/// Per class: mean and the top-d right singular vectors of the centered class
/// matrix. d is truncated to the numerical rank (at most n_c - 1) with a warning.
/// Throws std::invalid_argument if d < 1 or a class has fewer than 2 samples.
PcaFitResult pca_fit(const LabeledFeatures& train, int components);

/// ||(x - mu_c) - V_c V_c^T (x - mu_c)||_2 for every class.
std::vector<double> pca_residuals(const PcaClassModel& model, std::span<const double> x);

/// Class with the smallest residual; ties go to the smallest class id.
int pca_predict(const PcaClassModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Linear one-vs-rest SVM

struct SvmParams {
  double reg = 1e-4;
  int epochs = 50;
  std::uint64_t seed = 0;
};

struct SvmModel {
  std::vector<std::vector<double>> weights;  // one per class
  std::vector<double> biases;
  SvmParams params;

  std::size_t dim() const noexcept { return weights.empty() ? 0 : weights.front().size(); }
};

/// One-vs-rest hinge loss + (reg/2)||w||^2, minimized by stochastic
/// subgradient descent with step 1/(reg t) and suffix averaging over the
/// second half of the run. Features are centered internally so the learned
/// rules are unaffected by a common shift of the training data. The visiting
/// order depends only on the seed and the sample count, so a relabeling of
/// the classes permutes the binary problems without changing them.
/// Throws std::invalid_argument with fewer than two classes present.
SvmModel svm_fit(const LabeledFeatures& train, const SvmParams& params = {});

std::vector<double> svm_scores(const SvmModel& model, std::span<const double> x);

/// argmax_c w_c . x + b_c; ties go to the smallest class id.
int svm_predict(const SvmModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------

struct Evaluation {
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
};

using Predictor = std::function<int(std::span<const double>)>;

/// Throws std::invalid_argument on an empty test set.
Evaluation evaluate(const Predictor& predict, const LabeledFeatures& test);
Evaluation evaluate(const PcaClassModel& model, const LabeledFeatures& test);
Evaluation evaluate(const SvmModel& model, const LabeledFeatures& test);

}  // namespace rieszfeat
