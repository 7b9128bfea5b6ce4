#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "rieszfeat/classify.hpp"

using namespace rieszfeat;

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

// Projector V V^T as a dense matrix.
std::vector<Vec> projector(const PcaClassSubspace& s, std::size_t dim) {
  std::vector<Vec> p(dim, Vec(dim, 0.0));
  for (const auto& v : s.basis) {
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) p[i][j] += v[i] * v[j];
    }
  }
  return p;
}

// Residual by least squares on an arbitrary (not necessarily orthonormal)
// spanning set: solve the normal equations with Gaussian elimination.
double lsq_residual(const Vec& x, const Vec& mean, const std::vector<Vec>& span) {
  const std::size_t k = span.size();
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - mean[i];
  std::vector<Vec> a(k, Vec(k + 1, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = dot(span[i], span[j]);
    a[i][k] = dot(span[i], y);
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  Vec res = y;
  for (std::size_t i = 0; i < k; ++i) {
    const double coef = a[i][k] / a[i][i];
    for (std::size_t j = 0; j < y.size(); ++j) res[j] -= coef * span[i][j];
  }
  return std::sqrt(dot(res, res));
}

struct Planes {
  std::vector<Vec> means;
  std::vector<std::vector<Vec>> dirs;
};

Planes random_planes(std::size_t classes, std::size_t dim, std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Planes p;
  for (std::size_t c = 0; c < classes; ++c) {
    Vec m(dim);
    for (auto& v : m) v = 4.0 * g(rng);
    p.means.push_back(m);
    std::vector<Vec> dirs;
    for (std::size_t k = 0; k < d; ++k) {
      Vec v(dim);
      for (auto& e : v) e = g(rng);
      dirs.push_back(v);
    }
    p.dirs.push_back(dirs);
  }
  return p;
}

LabeledFeatures sample_planes(const Planes& p, std::size_t per_class, double noise,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  LabeledFeatures out;
  out.class_count = static_cast<int>(p.means.size());
  for (std::size_t i = 0; i < per_class; ++i) {
    for (std::size_t c = 0; c < p.means.size(); ++c) {
      Vec x = p.means[c];
      for (const auto& dir : p.dirs[c]) {
        const double t = 3.0 * g(rng);
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += t * dir[j];
      }
      for (auto& v : x) v += noise * g(rng);
      out.rows.push_back(std::move(x));
      out.labels.push_back(static_cast<int>(c));
    }
  }
  return out;
}

LabeledFeatures separable_2d(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LabeledFeatures out;
  out.class_count = 2;
  while (out.rows.size() < n) {
    const double x = u(rng);
    const double y = u(rng);
    const double s = x + 2.0 * y - 0.3;
    if (std::abs(s) < 0.3) continue;  // margin
    out.rows.push_back({x, y});
    out.labels.push_back(s > 0 ? 1 : 0);
  }
  return out;
}

}  // namespace

TEST(MaxAbs, Examples) {
  const std::vector<Vec> one{{2.0, -4.0}};
  EXPECT_EQ(maxabs_fit(one).scales, (Vec{2.0, 4.0}));
  const std::vector<Vec> zero_col{{0.0, 1.0}, {0.0, -3.0}};
  const auto n = maxabs_fit(zero_col);
  EXPECT_EQ(n.scales, (Vec{1.0, 3.0}));
  EXPECT_EQ(n.apply(Vec{0.0, 1.5}), (Vec{0.0, 0.5}));
  EXPECT_THROW(maxabs_fit(std::vector<Vec>{}), std::invalid_argument);
  EXPECT_THROW(maxabs_fit(std::vector<Vec>{{1.0}, {1.0, 2.0}}), DimensionMismatch);
  EXPECT_THROW(n.apply(Vec{1.0}), DimensionMismatch);
}

TEST(MaxAbs, TrainingSetLandsInUnitBox) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 5.0);
  std::vector<Vec> rows(30, Vec(6));
  for (auto& r : rows) {
    for (auto& v : r) v = g(rng);
  }
  const auto n = maxabs_fit(rows);
  for (const auto& r : rows) {
    for (double v : n.apply(r)) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(MaxAbs, PositiveRescalingCancels) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec> rows(10, Vec(4));
  for (auto& r : rows) {
    for (auto& v : r) v = g(rng);
  }
  const Vec factors{0.25, 2.0, 8.0, 0.5};  // powers of two: exact
  auto scaled = rows;
  for (auto& r : scaled) {
    for (std::size_t j = 0; j < r.size(); ++j) r[j] *= factors[j];
  }
  const auto a = maxabs_fit(rows);
  const auto b = maxabs_fit(scaled);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(a.apply(rows[i]), b.apply(scaled[i]));
}

TEST(Pca, TwoPointClass) {
  LabeledFeatures t;
  t.rows = {{0.0, 0.0, 0.0}, {1.0, 2.0, 2.0}};
  t.labels = {0, 0};
  t.class_count = 1;
  const auto fit = pca_fit(t, 3);
  EXPECT_FALSE(fit.warnings.empty());
  const auto& s = fit.model.classes[0];
  ASSERT_EQ(s.basis.size(), 1u);
  EXPECT_NEAR(std::abs(s.basis[0][0]), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(std::abs(s.basis[0][1]), 2.0 / 3.0, 1e-12);
  for (const auto& x : t.rows) EXPECT_LE(pca_residuals(fit.model, x)[0], 1e-12);
}

TEST(Pca, OrthonormalBasisAndFullRankResiduals) {
  std::mt19937_64 rng(5);
  const auto planes = random_planes(2, 6, 2, rng);
  const auto train = sample_planes(planes, 5, 0.5, rng);
  const auto fit = pca_fit(train, 10);
  for (const auto& s : fit.model.classes) {
    ASSERT_EQ(s.basis.size(), 4u);  // 5 samples -> rank 4
    for (std::size_t i = 0; i < s.basis.size(); ++i) {
      for (std::size_t j = 0; j < s.basis.size(); ++j) {
        EXPECT_NEAR(dot(s.basis[i], s.basis[j]), i == j ? 1.0 : 0.0, 1e-8);
      }
    }
  }
  for (std::size_t i = 0; i < train.rows.size(); ++i) {
    EXPECT_LE(pca_residuals(fit.model, train.rows[i])[static_cast<std::size_t>(train.labels[i])],
              1e-8);
  }
}

TEST(Pca, DuplicatedSamplesGiveSameSubspace) {
  std::mt19937_64 rng(6);
  const auto planes = random_planes(2, 5, 2, rng);
  const auto train = sample_planes(planes, 8, 0.3, rng);
  auto doubled = train;
  doubled.rows.insert(doubled.rows.end(), train.rows.begin(), train.rows.end());
  doubled.labels.insert(doubled.labels.end(), train.labels.begin(), train.labels.end());
  const auto a = pca_fit(train, 2).model;
  const auto b = pca_fit(doubled, 2).model;
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(a.classes[c].mean[j], b.classes[c].mean[j], 1e-12);
    const auto pa = projector(a.classes[c], 5);
    const auto pb = projector(b.classes[c], 5);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(pa[i][j], pb[i][j], 1e-10);
    }
  }
}

TEST(Pca, MeanAndSpanPointsPredictTheirClass) {
  std::mt19937_64 rng(7);
  const auto planes = random_planes(3, 8, 2, rng);
  const auto fit = pca_fit(sample_planes(planes, 20, 0.05, rng), 2);
  for (int c = 0; c < 3; ++c) {
    const auto& s = fit.model.classes[static_cast<std::size_t>(c)];
    EXPECT_EQ(pca_predict(fit.model, s.mean), c);
    Vec x = s.mean;
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += 2.0 * s.basis[0][j] - 1.5 * s.basis[1][j];
    EXPECT_EQ(pca_predict(fit.model, x), c);
  }
}

TEST(Pca, ThreeClassSyntheticAccuracy) {
  std::mt19937_64 rng(8);
  const auto planes = random_planes(3, 10, 2, rng);
  const auto train = sample_planes(planes, 40, 0.2, rng);
  const auto test = sample_planes(planes, 100, 0.2, rng);
  const auto model = pca_fit(train, 2).model;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.rows.size(); ++i) {
    const auto& x = test.rows[i];
    // brute-force residuals against the fitted subspaces
    const auto res = pca_residuals(model, x);
    int best = 0;
    for (int c = 0; c < 3; ++c) {
      const auto& s = model.classes[static_cast<std::size_t>(c)];
      const double oracle = lsq_residual(x, s.mean, s.basis);
      EXPECT_NEAR(res[static_cast<std::size_t>(c)], oracle, 1e-8 * (1.0 + oracle));
      if (oracle < lsq_residual(x, model.classes[static_cast<std::size_t>(best)].mean,
                                model.classes[static_cast<std::size_t>(best)].basis)) {
        best = c;
      }
    }
    EXPECT_EQ(pca_predict(model, x), best);
    if (best == test.labels[i]) ++correct;
  }
  EXPECT_GE(static_cast<double>(correct) / test.rows.size(), 0.99);
  EXPECT_GE(evaluate(model, test).accuracy, 0.99);
}

TEST(Pca, ResidualNonIncreasingInComponents) {
  std::mt19937_64 rng(9);
  const auto planes = random_planes(2, 7, 3, rng);
  const auto train = sample_planes(planes, 15, 0.5, rng);
  const auto probe = sample_planes(planes, 10, 1.0, rng);
  std::vector<PcaClassModel> models;
  for (int d = 1; d <= 6; ++d) models.push_back(pca_fit(train, d).model);
  for (const auto& x : probe.rows) {
    for (std::size_t d = 1; d < models.size(); ++d) {
      const auto lo = pca_residuals(models[d - 1], x);
      const auto hi = pca_residuals(models[d], x);
      for (std::size_t c = 0; c < lo.size(); ++c) EXPECT_LE(hi[c], lo[c] + 1e-12);
    }
  }
}

TEST(Pca, RotationInvariance) {
  std::mt19937_64 rng(10);
  const auto planes = random_planes(3, 4, 1, rng);
  const auto train = sample_planes(planes, 10, 0.8, rng);
  const auto probe = sample_planes(planes, 20, 1.5, rng);
  const auto model = pca_fit(train, 1).model;
  // Givens rotation in the (0, 2) plane followed by one in (1, 3)
  auto rotate = [](Vec v) {
    const double a = 0.7;
    const double b = -1.3;
    const double x0 = v[0];
    const double x2 = v[2];
    v[0] = std::cos(a) * x0 - std::sin(a) * x2;
    v[2] = std::sin(a) * x0 + std::cos(a) * x2;
    const double x1 = v[1];
    const double x3 = v[3];
    v[1] = std::cos(b) * x1 - std::sin(b) * x3;
    v[3] = std::sin(b) * x1 + std::cos(b) * x3;
    return v;
  };
  PcaClassModel rotated = model;
  for (auto& s : rotated.classes) {
    s.mean = rotate(s.mean);
    for (auto& v : s.basis) v = rotate(v);
  }
  for (const auto& x : probe.rows) {
    EXPECT_EQ(pca_predict(model, x), pca_predict(rotated, rotate(x)));
    const auto a = pca_residuals(model, x);
    const auto b = pca_residuals(rotated, rotate(x));
    for (std::size_t c = 0; c < a.size(); ++c) EXPECT_NEAR(a[c], b[c], 1e-10 * (1.0 + a[c]));
  }
}

TEST(Pca, Errors) {
  LabeledFeatures t;
  t.rows = {{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}};
  t.labels = {0, 0, 1};
  t.class_count = 2;
  EXPECT_THROW(pca_fit(t, 1), std::invalid_argument);
  t.labels = {0, 0, 0};
  t.class_count = 1;
  EXPECT_THROW(pca_fit(t, 0), std::invalid_argument);
  const auto model = pca_fit(t, 1).model;
  EXPECT_THROW(pca_predict(model, Vec{1.0}), DimensionMismatch);
}

TEST(Svm, SeparableTrainingAccuracy) {
  std::mt19937_64 rng(11);
  const auto train = separable_2d(200, rng);
  const auto model = svm_fit(train, {.reg = 1e-4, .epochs = 50, .seed = 1});
  EXPECT_EQ(evaluate(model, train).accuracy, 1.0);
  // every training point is on the correct side of its own classifier
  for (std::size_t i = 0; i < train.rows.size(); ++i) {
    const auto s = svm_scores(model, train.rows[i]);
    EXPECT_GT(s[static_cast<std::size_t>(train.labels[i])], s[1 - static_cast<std::size_t>(train.labels[i])]);
  }
}

TEST(Svm, DeterministicForSeed) {
  std::mt19937_64 rng(12);
  std::mt19937_64 prng(12);
  const auto train = sample_planes(random_planes(3, 5, 1, prng), 20, 1.0, rng);
  const auto a = svm_fit(train, {.reg = 1e-3, .epochs = 10, .seed = 5});
  const auto b = svm_fit(train, {.reg = 1e-3, .epochs = 10, .seed = 5});
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.biases, b.biases);
}

TEST(Svm, LabelPermutationPermutesPredictions) {
  std::mt19937_64 rng(13);
  const auto planes = random_planes(4, 6, 1, rng);
  const auto train = sample_planes(planes, 15, 1.0, rng);
  const auto probe = sample_planes(planes, 10, 2.0, rng);
  const std::vector<int> perm{2, 0, 3, 1};
  auto permuted = train;
  for (auto& l : permuted.labels) l = perm[static_cast<std::size_t>(l)];
  const SvmParams params{.reg = 1e-3, .epochs = 20, .seed = 3};
  const auto a = svm_fit(train, params);
  const auto b = svm_fit(permuted, params);
  for (const auto& x : probe.rows) EXPECT_EQ(perm[static_cast<std::size_t>(svm_predict(a, x))], svm_predict(b, x));
}

TEST(Svm, CommonShiftIsAbsorbed) {
  std::mt19937_64 rng(14);
  const auto planes = random_planes(3, 4, 1, rng);
  const auto train = sample_planes(planes, 20, 1.0, rng);
  const auto probe = sample_planes(planes, 30, 2.0, rng);
  const Vec shift{5.0, -3.0, 0.5, 12.0};
  auto shifted = train;
  for (auto& r : shifted.rows) {
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += shift[j];
  }
  const SvmParams params{.reg = 1e-3, .epochs = 20, .seed = 2};
  const auto a = svm_fit(train, params);
  const auto b = svm_fit(shifted, params);
  for (auto x : probe.rows) {
    const auto sa = svm_scores(a, x);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += shift[j];
    const auto sb = svm_scores(b, x);
    for (std::size_t c = 0; c < sa.size(); ++c) EXPECT_NEAR(sa[c], sb[c], 1e-3);
  }
}

TEST(Svm, PredictIsArgmaxWithLowestIdTieBreak) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    SvmModel m;
    for (int c = 0; c < 5; ++c) {
      Vec w(3);
      for (auto& v : w) v = g(rng);
      m.weights.push_back(w);
      m.biases.push_back(g(rng));
    }
    for (int k = 0; k < 20; ++k) {
      Vec x(3);
      for (auto& v : x) v = g(rng);
      int best = 0;
      double best_score = dot(m.weights[0], x) + m.biases[0];
      for (int c = 1; c < 5; ++c) {
        const double s = dot(m.weights[static_cast<std::size_t>(c)], x) + m.biases[static_cast<std::size_t>(c)];
        if (s > best_score) {
          best = c;
          best_score = s;
        }
      }
      EXPECT_EQ(svm_predict(m, x), best);
    }
  }
  SvmModel tie;
  tie.weights = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
  tie.biases = {0.5, 0.5, 0.5};
  EXPECT_EQ(svm_predict(tie, Vec{0.0, 0.0}), 0);
  EXPECT_EQ(svm_predict(tie, Vec{-1.0, 0.0}), 2);
  EXPECT_THROW(svm_predict(tie, Vec{1.0}), DimensionMismatch);
}

TEST(Svm, Errors) {
  LabeledFeatures t;
  t.rows = {{1.0}, {2.0}};
  t.labels = {0, 0};
  t.class_count = 1;
  EXPECT_THROW(svm_fit(t), std::invalid_argument);
  t.labels = {0, 1};
  t.class_count = 2;
  EXPECT_THROW(svm_fit(t, {.reg = 0.0}), std::invalid_argument);
}

TEST(Evaluate, Examples) {
  LabeledFeatures t;
  t.class_count = 10;
  for (int i = 0; i < 50; ++i) {
    t.rows.push_back({static_cast<double>(i % 10)});
    t.labels.push_back(i % 10);
  }
  const auto perfect = evaluate([](std::span<const double> x) { return static_cast<int>(x[0]); }, t);
  EXPECT_EQ(perfect.accuracy, 1.0);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(perfect.confusion[i][j], i == j ? 5u : 0u);
  }
  const auto constant = evaluate([](std::span<const double>) { return 3; }, t);
  EXPECT_DOUBLE_EQ(constant.accuracy, 0.1);
  for (const auto& row : constant.confusion) {
    EXPECT_EQ(std::accumulate(row.begin(), row.end(), std::size_t{0}), 5u);
  }

  // hand-counted: predictions 0,1,1,0,2,2,2,1,0,0 vs labels 0,1,2,0,2,1,2,1,1,0 -> 7 / 10
  LabeledFeatures small;
  small.class_count = 3;
  const std::vector<int> pred{0, 1, 1, 0, 2, 2, 2, 1, 0, 0};
  small.labels = {0, 1, 2, 0, 2, 1, 2, 1, 1, 0};
  for (int i = 0; i < 10; ++i) small.rows.push_back({static_cast<double>(i)});
  const auto e = evaluate([&](std::span<const double> x) { return pred[static_cast<std::size_t>(x[0])]; },
                          small);
  EXPECT_EQ(e.correct, 7u);
  EXPECT_DOUBLE_EQ(e.accuracy, 0.7);
  EXPECT_EQ(e.confusion[1][0], 1u);
  EXPECT_EQ(e.confusion[2][1], 1u);
  EXPECT_EQ(e.confusion[1][2], 1u);

  LabeledFeatures none;
  none.class_count = 2;
  EXPECT_THROW(evaluate([](std::span<const double>) { return 0; }, none), std::invalid_argument);
}
