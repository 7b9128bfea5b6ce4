#include "rieszfeat/classify.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace rieszfeat {

namespace {

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw DimensionMismatch("feature dimension " + std::to_string(got) + ", model expects " +
                            std::to_string(expected));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void LabeledFeatures::validate() const {
  if (rows.empty()) throw std::invalid_argument("feature set is empty");
  if (rows.size() != labels.size()) {
    throw std::invalid_argument("feature rows and labels differ in count");
  }
  const std::size_t d = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != d) throw DimensionMismatch("ragged feature rows");
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
    }
  }
  for (int label : labels) {
    if (label < 0 || label >= class_count) {
      throw std::invalid_argument("label " + std::to_string(label) + " outside [0, " +
                                  std::to_string(class_count) + ")");
    }
  }
}

std::vector<double> MaxAbsNormalizer::apply(std::span<const double> x) const {
  check_dim(scales.size(), x.size());
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] / scales[j];
  return out;
}

LabeledFeatures MaxAbsNormalizer::apply(const LabeledFeatures& data) const {
  LabeledFeatures out;
  out.labels = data.labels;
  out.class_count = data.class_count;
  out.rows.reserve(data.rows.size());
  for (const auto& row : data.rows) out.rows.push_back(apply(row));
  return out;
}

MaxAbsNormalizer maxabs_fit(std::span<const std::vector<double>> train) {
  if (train.empty()) throw std::invalid_argument("maxabs_fit: empty training set");
  MaxAbsNormalizer n;
  n.scales.assign(train.front().size(), 0.0);
  for (const auto& row : train) {
    check_dim(n.scales.size(), row.size());
    for (std::size_t j = 0; j < row.size(); ++j) n.scales[j] = std::max(n.scales[j], std::abs(row[j]));
  }
  for (double& s : n.scales) {
    if (s == 0.0) s = 1.0;
  }
  return n;
}

PcaFitResult pca_fit(const LabeledFeatures& train, int components) {
  if (components < 1) throw std::invalid_argument("pca_fit: components must be >= 1");
  train.validate();
  const std::size_t dim = train.dim();
  PcaFitResult result;
  result.model.dim = dim;
  result.model.components = components;

  for (int c = 0; c < train.class_count; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < train.labels.size(); ++i) {
      if (train.labels[i] == c) idx.push_back(i);
    }
    if (idx.size() < 2) {
      throw std::invalid_argument("pca_fit: class " + std::to_string(c) + " has " +
                                  std::to_string(idx.size()) + " samples, need at least 2");
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = train.rows[idx[i]][j];
      }
    }
    const Eigen::RowVectorXd mu = x.colwise().mean();
    x.rowwise() -= mu;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double tol = static_cast<double>(std::max(x.rows(), x.cols())) *
                       std::numeric_limits<double>::epsilon() * (sv.size() ? sv(0) : 0.0);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > tol) ++rank;
    rank = std::min(rank, static_cast<int>(idx.size()) - 1);
    const int kept = std::min(components, rank);
    if (kept < components) {
      result.warnings.push_back("class " + std::to_string(c) + ": " +
                                std::to_string(components) + " components requested, rank " +
                                std::to_string(rank) + " available; using " +
                                std::to_string(kept));
    }

    PcaClassSubspace sub;
    sub.mean.assign(mu.data(), mu.data() + mu.size());
    const Eigen::MatrixXd& v = svd.matrixV();
    for (int k = 0; k < kept; ++k) {
      std::vector<double> dir(v.col(k).data(), v.col(k).data() + dim);
      // fix the sign: largest-magnitude entry positive
      const auto big = std::max_element(dir.begin(), dir.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      });
      if (*big < 0.0) {
        for (double& e : dir) e = -e;
      }
      sub.basis.push_back(std::move(dir));
    }
    result.model.classes.push_back(std::move(sub));
  }
  return result;
}

std::vector<double> pca_residuals(const PcaClassModel& model, std::span<const double> x) {
  check_dim(model.dim, x.size());
  std::vector<double> out;
  out.reserve(model.classes.size());
  std::vector<double> r(x.size());
  for (const auto& sub : model.classes) {
    for (std::size_t j = 0; j < x.size(); ++j) r[j] = x[j] - sub.mean[j];
    std::vector<double> resid = r;
    for (const auto& v : sub.basis) {
      const double coef = dot(v, r);
      for (std::size_t j = 0; j < x.size(); ++j) resid[j] -= coef * v[j];
    }
    out.push_back(std::sqrt(dot(resid, resid)));
  }
  return out;
}

int pca_predict(const PcaClassModel& model, std::span<const double> x) {
  const auto res = pca_residuals(model, x);
  return static_cast<int>(std::min_element(res.begin(), res.end()) - res.begin());
}

SvmModel svm_fit(const LabeledFeatures& train, const SvmParams& params) {
  train.validate();
  if (!(params.reg > 0.0)) throw std::invalid_argument("svm_fit: reg must be positive");
  if (params.epochs < 1) throw std::invalid_argument("svm_fit: epochs must be >= 1");
  std::vector<std::size_t> per_class(static_cast<std::size_t>(train.class_count), 0);
  for (int label : train.labels) ++per_class[static_cast<std::size_t>(label)];
  if (std::count_if(per_class.begin(), per_class.end(), [](std::size_t n) { return n > 0; }) < 2) {
    throw std::invalid_argument("svm_fit: training data must contain at least two classes");
  }

  const std::size_t n = train.rows.size();
  const std::size_t dim = train.dim();
  const std::size_t aug = dim + 1;  // trailing constant feature carries the bias

  std::vector<double> mu(dim, 0.0);
  for (const auto& row : train.rows) {
    for (std::size_t j = 0; j < dim; ++j) mu[j] += row[j];
  }
  for (double& m : mu) m /= static_cast<double>(n);
  std::vector<std::vector<double>> xs(n, std::vector<double>(aug, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) xs[i][j] = train.rows[i][j] - mu[j];
  }

  // one visiting order shared by all binary problems
  std::mt19937_64 rng(params.seed);
  std::vector<std::size_t> order;
  order.reserve(n * static_cast<std::size_t>(params.epochs));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (int e = 0; e < params.epochs; ++e) {
    for (std::size_t i = n - 1; i > 0; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i);
      std::swap(perm[i], perm[pick(rng)]);
    }
    order.insert(order.end(), perm.begin(), perm.end());
  }

  const double lambda = params.reg;
  const double radius = 1.0 / std::sqrt(lambda);
  const std::size_t steps = order.size();
  const std::size_t average_from = steps / 2;

  SvmModel model;
  model.params = params;
  for (int c = 0; c < train.class_count; ++c) {
    std::vector<double> w(aug, 0.0);
    std::vector<double> avg(aug, 0.0);
    std::size_t averaged = 0;
    for (std::size_t t = 1; t <= steps; ++t) {
      const std::size_t i = order[t - 1];
      const double y = train.labels[i] == c ? 1.0 : -1.0;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double margin = y * dot(w, xs[i]);
      const double shrink = 1.0 - eta * lambda;
      for (double& v : w) v *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < aug; ++j) w[j] += eta * y * xs[i][j];
      }
      const double norm = std::sqrt(dot(w, w));
      if (norm > radius) {
        for (double& v : w) v *= radius / norm;
      }
      if (t > average_from) {
        ++averaged;
        const double a = 1.0 / static_cast<double>(averaged);
        for (std::size_t j = 0; j < aug; ++j) avg[j] += a * (w[j] - avg[j]);
      }
    }
    std::vector<double> weights(avg.begin(), avg.begin() + static_cast<long>(dim));
    model.biases.push_back(avg[dim] - dot(weights, mu));
    model.weights.push_back(std::move(weights));
  }
  return model;
}

std::vector<double> svm_scores(const SvmModel& model, std::span<const double> x) {
  check_dim(model.dim(), x.size());
  std::vector<double> s(model.weights.size());
  for (std::size_t c = 0; c < s.size(); ++c) s[c] = dot(model.weights[c], x) + model.biases[c];
  return s;
}

int svm_predict(const SvmModel& model, std::span<const double> x) {
  const auto s = svm_scores(model, x);
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

Evaluation evaluate(const Predictor& predict, const LabeledFeatures& test) {
  if (test.rows.empty()) throw std::invalid_argument("evaluate: empty test set");
  if (test.rows.size() != test.labels.size()) {
    throw std::invalid_argument("evaluate: rows and labels differ in count");
  }
  Evaluation ev;
  const auto classes = static_cast<std::size_t>(std::max(test.class_count, 1));
  ev.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
  for (std::size_t i = 0; i < test.rows.size(); ++i) {
    const int truth = test.labels[i];
    const int pred = predict(test.rows[i]);
    const auto need = static_cast<std::size_t>(std::max(truth, pred)) + 1;
    if (need > ev.confusion.size()) {
      for (auto& row : ev.confusion) row.resize(need, 0);
      ev.confusion.resize(need, std::vector<std::size_t>(need, 0));
    }
    ++ev.confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(pred)];
    if (pred == truth) ++ev.correct;
  }
  ev.total = test.rows.size();
  ev.accuracy = static_cast<double>(ev.correct) / static_cast<double>(ev.total);
  return ev;
}

Evaluation evaluate(const PcaClassModel& model, const LabeledFeatures& test) {
  return evaluate([&](std::span<const double> x) { return pca_predict(model, x); }, test);
}

Evaluation evaluate(const SvmModel& model, const LabeledFeatures& test) {
  return evaluate([&](std::span<const double> x) { return svm_predict(model, x); }, test);
}

}  // namespace rieszfeat
