#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "datasets.hpp"
#include "rieszfeat/feature_csv.hpp"
#include "rieszfeat/model_io.hpp"
#include "rieszfeat/preprocess.hpp"
#include "test_support.hpp"

using namespace rieszfeat;
using namespace rieszfeat::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rieszfeat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_app(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

double rel_linf(const std::vector<double>& ref, const std::vector<double>& x) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    num = std::max(num, std::abs(ref[i] - x[i]));
    den = std::max(den, std::abs(ref[i]));
  }
  return num / den;
}

}  // namespace

TEST(RunConfig, FileValuesAndUnknownKeys) {
  RunConfig c = default_config();
  std::istringstream in("# comment\ndepth = 2\nangles=8  # trailing\npooling = max\nbbox = true\n");
  apply_config_text(c, in, "test");
  EXPECT_EQ(c.riesz.depth, 2);
  EXPECT_EQ(c.riesz.angles, 8);
  EXPECT_EQ(c.riesz.pooling, Pooling::Max);
  EXPECT_TRUE(c.bbox);
  std::istringstream unknown("colour = blue\n");
  EXPECT_THROW(apply_config_text(c, unknown, "test"), ConfigError);
  std::istringstream malformed("depth 3\n");
  EXPECT_THROW(apply_config_text(c, malformed, "test"), ConfigError);
  EXPECT_THROW(apply_setting(c, "depth", "three"), ConfigError);
  EXPECT_THROW(apply_setting(c, "bbox", "maybe"), ConfigError);
}

TEST(RunConfig, PrintedConfigReadsBack) {
  RunConfig c = default_config();
  apply_setting(c, "scale_constant", "0.25");
  apply_setting(c, "presmooth_sigma", "1.5");
  apply_setting(c, "bench_sizes", "32, 64");
  apply_setting(c, "seed", "17");
  const std::string text = format_config(c);
  RunConfig d;
  std::istringstream in(text);
  apply_config_text(d, in, "printed");
  EXPECT_EQ(format_config(d), text);
  EXPECT_EQ(d.svm.seed, 17u);
}

TEST(RunConfig, ValidationRejectsBadCombinations) {
  RunConfig c;
  c.riesz.angles = 6;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = RunConfig{};
  c.classifier = "knn";
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Manifest, ParsesShards) {
  std::istringstream in(
      "# scale shards\n"
      "scale 0.5 images a.idx labels a.lbl\n"
      "scale 2 images /abs/b.idx labels b.lbl\n");
  const auto m = parse_manifest(in, "/data");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].scale, 0.5);
  EXPECT_EQ(m[0].images, fs::path("/data/a.idx"));
  EXPECT_EQ(m[1].images, fs::path("/abs/b.idx"));
  EXPECT_EQ(m[1].labels, fs::path("/data/b.lbl"));
  std::istringstream bad("scale x images a labels b\n");
  EXPECT_THROW(parse_manifest(bad, "/"), ConfigError);
  std::istringstream wrong("images a labels b\n");
  EXPECT_THROW(parse_manifest(wrong, "/"), ConfigError);
}

TEST(App, ExitCodesForConfigErrors) {
  EXPECT_EQ(run({}).code, kExitConfig);
  EXPECT_EQ(run({"extract", "--depth", "x"}).code, kExitConfig);
  EXPECT_EQ(run({"extract", "--no-such-flag", "1"}).code, kExitConfig);
  EXPECT_EQ(run({"extract"}).code, kExitConfig);  // no output
  const auto dir = testkit::scratch_dir("cli_cfg");
  write_text(dir / "bad.cfg", "depth = 3\nfoo = 1\n");
  const auto r = run({"verify", "--config", (dir / "bad.cfg").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("foo"), std::string::npos);
  EXPECT_EQ(run({"train", "--features", "x.csv", "--model", "m", "--classifier", "tree"}).code,
            kExitConfig);
}

TEST(App, FlagsOverrideFileAndPrintConfig) {
  const auto dir = testkit::scratch_dir("cli_print");
  write_text(dir / "run.cfg", "depth = 2\nangles = 8\n");
  const auto r = run({"extract", "--config", (dir / "run.cfg").string(), "--angles", "4",
                      "--bbox-pad", "10", "--print-config"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("depth = 2\n"), std::string::npos);
  EXPECT_NE(r.out.find("angles = 4\n"), std::string::npos);
  EXPECT_NE(r.out.find("bbox_pad = 10\n"), std::string::npos);
}

TEST(App, VerifyPassesAndDetectsInjectedFault) {
  const auto ok = run({"verify"});
  EXPECT_EQ(ok.code, kExitOk) << ok.out;
  EXPECT_EQ(run({"verify", "--seed", "12345"}).code, kExitOk);
  const auto bad = run({"verify", "--inject_fault", "true"});
  EXPECT_EQ(bad.code, kExitFailure);
  const auto line = bad.out.find("kernel_zero_integral");
  ASSERT_NE(line, std::string::npos);
  EXPECT_NE(bad.out.substr(line, bad.out.find('\n', line) - line).find("FAIL"), std::string::npos);
}

TEST(App, ExtractConstantImagesIsDeterministic) {
  const auto dir = testkit::scratch_dir("cli_extract");
  testkit::write_idx_images(dir / "img.idx", {ImageGrid::filled(28, 28, 0.2), ImageGrid::filled(28, 28, 0.6),
                                               ImageGrid::filled(28, 28, 1.0)});
  testkit::write_idx_labels(dir / "lbl.idx", {0, 1, 2});
  const std::vector<std::string> args{"extract", "--images", (dir / "img.idx").string(), "--labels",
                                      (dir / "lbl.idx").string(), "--output",
                                      (dir / "f.csv").string(), "--threads", "3"};
  ASSERT_EQ(run(args).code, kExitOk);
  std::ifstream in(dir / "f.csv");
  const auto table = read_feature_csv(in);
  ASSERT_EQ(table.rows.size(), 3u);
  ASSERT_EQ(table.columns.size(), 85u);
  EXPECT_EQ(table.labels, (std::vector<int>{0, 1, 2}));
  for (const auto& row : table.rows) {
    for (std::size_t j = 1; j < row.size(); ++j) EXPECT_LE(std::abs(row[j]), 1e-12);
  }
  const std::string first = slurp(dir / "f.csv");
  ASSERT_EQ(run(args).code, kExitOk);
  EXPECT_EQ(slurp(dir / "f.csv"), first);
}

TEST(App, BlankImagesAreFlaggedNotFatal) {
  const auto dir = testkit::scratch_dir("cli_blank");
  const auto digit = testkit::synthetic_digit(28, 14.0, 14.0, 6.0, 4.0, 1.0);
  testkit::write_idx_images(dir / "img.idx", {digit, ImageGrid(28, 28), digit});
  const auto r = run({"extract", "--images", (dir / "img.idx").string(), "--bbox", "true",
                      "--output", (dir / "f.csv").string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.err.find("image 1"), std::string::npos);
  std::ifstream in(dir / "f.csv");
  const auto table = read_feature_csv(in);
  EXPECT_FALSE(table.with_labels);
  EXPECT_TRUE(std::isnan(table.rows[1][0]));
  EXPECT_FALSE(std::isnan(table.rows[2][0]));

  const auto b = run({"bbox", "--images", (dir / "img.idx").string(), "--output_dir",
                      (dir / "crops").string()});
  EXPECT_EQ(b.code, kExitOk);
  EXPECT_NE(b.err.find("skipped"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "crops" / "000000.pgm"));
  EXPECT_FALSE(fs::exists(dir / "crops" / "000001.pgm"));
  EXPECT_NE(b.out.find("tight"), std::string::npos);
}

TEST(App, TrainAndEvaluatePerfectSetup) {
  const auto dir = testkit::scratch_dir("cli_train");
  FeatureTable t;
  t.columns = {"[]", "[0]", "[1]"};
  t.with_labels = true;
  for (int i = 0; i < 30; ++i) {
    const int c = i % 3;
    std::vector<double> row{0.1 * (i % 5), 0.05 * (i % 7), 0.02 * (i % 3)};
    row[static_cast<std::size_t>(c)] += 10.0;
    t.rows.push_back(row);
    t.labels.push_back(c);
  }
  {
    std::ofstream out(dir / "train.csv");
    write_feature_csv(out, t);
  }
  for (const char* clf : {"svm", "pca"}) {
    const auto model = (dir / (std::string(clf) + ".model")).string();
    const auto tr = run({"train", "--features", (dir / "train.csv").string(), "--model", model,
                         "--classifier", clf, "--pca_components", "1", "--svm_epochs", "200"});
    ASSERT_EQ(tr.code, kExitOk) << tr.err;
    EXPECT_EQ(model_class_count(load_model(model)), 3u);
    const auto report = (dir / (std::string(clf) + "_report.csv")).string();
    const auto ev = run({"eval", "--features", (dir / "train.csv").string(), "--model", model,
                         "--output", report});
    ASSERT_EQ(ev.code, kExitOk) << ev.err;
    EXPECT_NE(ev.out.find("accuracy 100.00%"), std::string::npos) << clf << ": " << ev.out;
    EXPECT_NE(slurp(report).find("features,1,1,30,30,0"), std::string::npos) << slurp(report);
    EXPECT_TRUE(fs::exists(dir / (std::string(clf) + "_report_confusion.csv")));
  }
}

TEST(App, TrainAndEvalErrors) {
  const auto dir = testkit::scratch_dir("cli_train_err");
  write_text(dir / "empty.csv", "");
  EXPECT_EQ(run({"train", "--features", (dir / "empty.csv").string(), "--model",
                 (dir / "m").string()}).code,
            kExitFailure);
  write_text(dir / "header.csv", "[],label\n");
  EXPECT_EQ(run({"train", "--features", (dir / "header.csv").string(), "--model",
                 (dir / "m").string()}).code,
            kExitFailure);
  write_text(dir / "f.csv", "[],label\n1,0\n2,1\n");
  const auto missing = run({"eval", "--features", (dir / "f.csv").string(), "--model",
                            (dir / "nope.model").string()});
  EXPECT_EQ(missing.code, kExitFailure);
  EXPECT_NE(missing.err.find("not found"), std::string::npos);

  // model trained on 2-dim features, evaluated on 1-dim ones
  write_text(dir / "two.csv", "[],[0],label\n1,0,0\n1.5,0.5,0\n5,1,1\n6,1.5,1\n");
  ASSERT_EQ(run({"train", "--features", (dir / "two.csv").string(), "--model",
                 (dir / "two.model").string()}).code,
            kExitOk);
  const auto mismatch = run({"eval", "--features", (dir / "f.csv").string(), "--model",
                             (dir / "two.model").string()});
  EXPECT_EQ(mismatch.code, kExitFailure);
}

TEST(App, ManifestEvaluationReportsEveryScale) {
  const auto dir = testkit::scratch_dir("cli_manifest");
  // class 0: tall rings, class 1: wide rings
  auto make = [](double scale, int cls, int k) {
    const std::size_t n = static_cast<std::size_t>(28 * scale);
    const double rr = (cls == 0 ? 8.0 : 4.0) * scale;
    const double rc = (cls == 0 ? 4.0 : 8.0) * scale;
    return testkit::synthetic_digit(n, n / 2.0 + k % 2, n / 2.0, rr, rc, 1.0 * scale);
  };
  std::vector<ImageGrid> train;
  std::vector<int> train_labels;
  for (int k = 0; k < 6; ++k) {
    for (int c = 0; c < 2; ++c) {
      train.push_back(make(1.0, c, k));
      train_labels.push_back(c);
    }
  }
  testkit::write_idx_images(dir / "train.idx", train);
  testkit::write_idx_labels(dir / "train.lbl", train_labels);
  std::ofstream manifest(dir / "manifest.txt");
  for (double s : {1.0, 2.0}) {
    std::vector<ImageGrid> imgs;
    std::vector<int> labels;
    for (int k = 0; k < 4; ++k) {
      for (int c = 0; c < 2; ++c) {
        imgs.push_back(make(s, c, k));
        labels.push_back(c);
      }
    }
    const std::string stem = "test_" + std::to_string(static_cast<int>(s));
    testkit::write_idx_images(dir / (stem + ".idx"), imgs);
    testkit::write_idx_labels(dir / (stem + ".lbl"), labels);
    manifest << "scale " << s << " images " << stem << ".idx labels " << stem << ".lbl\n";
  }
  manifest.close();

  ASSERT_EQ(run({"extract", "--images", (dir / "train.idx").string(), "--labels",
                 (dir / "train.lbl").string(), "--bbox", "true", "--depth", "2", "--output",
                 (dir / "train.csv").string()}).code,
            kExitOk);
  ASSERT_EQ(run({"train", "--features", (dir / "train.csv").string(), "--model",
                 (dir / "m.model").string(), "--svm_epochs", "100"}).code,
            kExitOk);
  const auto ev = run({"eval", "--manifest", (dir / "manifest.txt").string(), "--model",
                       (dir / "m.model").string(), "--bbox", "true", "--depth", "2", "--output",
                       (dir / "report.csv").string()});
  ASSERT_EQ(ev.code, kExitOk) << ev.err;
  const auto report = slurp(dir / "report.csv");
  EXPECT_NE(report.find("test_1.idx,1,"), std::string::npos) << report;
  EXPECT_NE(report.find("test_2.idx,2,"), std::string::npos) << report;
}

TEST(App, DataDirResolvesRelativeInputs) {
  const auto dir = testkit::scratch_dir("cli_datadir");
  testkit::write_idx_images(dir / "img.idx", {ImageGrid::filled(8, 8, 0.5)});
  const auto r = run({"extract", "--data_dir", dir.string(), "--images", "img.idx", "--depth", "1",
                      "--output", (dir / "f.csv").string()});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(App, ImageDirectoryWithClassFolders) {
  const auto dir = testkit::scratch_dir("cli_imgdir");
  fs::create_directories(dir / "cork");
  fs::create_directories(dir / "wool");
  write_text(dir / "cork" / "a.pgm", "P2\n2 2\n255\n0 255\n255 0\n");
  write_text(dir / "wool" / "b.txt", "2 2\n0.1 0.2\n0.3 0.4\n");
  write_text(dir / "wool" / "c.pgm", "P2\n2 2\n255\n1 2\n3 4\n");
  const auto set = load_image_dir(dir, 0);
  EXPECT_EQ(set.class_names, (std::vector<std::string>{"cork", "wool"}));
  EXPECT_EQ(set.labels, (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(set.ids[1], "wool/b.txt");
  EXPECT_EQ(load_image_dir(dir, 2).images.size(), 2u);
}

namespace {

std::vector<ImageGrid> digit_family() {
  std::vector<ImageGrid> out;
  for (double stroke : {1.2, 2.0}) {
    for (double rr : {7.0, 9.0}) {
      for (double cr : {12.0, 13.5, 15.0}) out.push_back(testkit::synthetic_digit(28, cr, 14.0, rr, 4.5, stroke));
    }
  }
  return out;
}

}  // namespace

TEST(Pipeline, UpscaledDigitBoxWithinOnePixelPerSide) {
  const BboxParams params;
  for (const auto& digit : digit_family()) {
    const auto a = bbox_extract_detailed(digit, params);
    const auto b = bbox_extract_detailed(rescale(digit, 2.0, Interpolation::Nearest), params);
    EXPECT_EQ(b.tight.height, 2 * a.tight.height);
    EXPECT_EQ(b.tight.width, 2 * a.tight.width);
    EXPECT_LE(std::abs(static_cast<double>(b.crop.height()) - 2.0 * a.crop.height()), 2.0);
    EXPECT_LE(std::abs(static_cast<double>(b.crop.width()) - 2.0 * a.crop.width()), 2.0);
  }
}

// Same crop, doubled: isolates the representation from box rounding.
TEST(Pipeline, DoubledCropGivesSameFeatures) {
  RunConfig config;
  config.bbox = true;
  const MultiplierCache cache;
  double worst = 0.0;
  for (const auto& digit : digit_family()) {
    const auto crop = prepare_image(digit, config);
    const auto a = extract_features(crop, config.riesz, cache).values;
    const auto b = extract_features(rescale(crop, 2.0, Interpolation::Nearest), config.riesz, cache).values;
    worst = std::max(worst, rel_linf(a, b));
  }
  RecordProperty("worst_rel_linf", std::to_string(worst));
  EXPECT_LE(worst, 0.05);
}

TEST(Pipeline, UpscaledDigitGivesSameFeatures) {
  RunConfig config;
  config.bbox = true;
  const MultiplierCache cache;
  double worst = 0.0;
  for (const auto& digit : digit_family()) {
    const auto up = rescale(digit, 2.0, Interpolation::Nearest);
    const auto a = extract_features(prepare_image(digit, config), config.riesz, cache).values;
    const auto b = extract_features(prepare_image(up, config), config.riesz, cache).values;
    worst = std::max(worst, rel_linf(a, b));
  }
  RecordProperty("worst_rel_linf", std::to_string(worst));
  EXPECT_LE(worst, 0.05);
}

TEST(Executable, RunsVerify) {
  const int status = std::system((std::string(RIESZFEAT_CLI_PATH) + " verify > /dev/null").c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  const int bad = std::system((std::string(RIESZFEAT_CLI_PATH) + " bench --bench_sizes 1 2> /dev/null").c_str());
  ASSERT_TRUE(WIFEXITED(bad));
  EXPECT_EQ(WEXITSTATUS(bad), 2);
}
