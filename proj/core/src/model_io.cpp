#include "rieszfeat/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "rieszfeat/feature_csv.hpp"

namespace rieszfeat {

namespace {

constexpr const char* kMagic = "rieszfeat-model";
constexpr int kVersion = 1;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void write_vector(std::ostream& out, std::span<const double> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_double(v[i]);
  }
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty()) return std::istringstream(line);
    }
    fail(std::string("unexpected end of file, expected ") + what);
  }

  void expect_word(std::istringstream& in, const char* word) {
    std::string got;
    if (!(in >> got) || got != word) fail(std::string("expected '") + word + "'");
  }

  template <class T>
  T read_value(std::istringstream& in, const char* what) {
    std::string token;
    if (!(in >> token)) fail(std::string("missing ") + what);
    T v{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      fail(std::string("invalid ") + what + " '" + token + "'");
    }
    return v;
  }

  template <class T>
  T keyed(std::istringstream& in, const char* key) {
    expect_word(in, key);
    return read_value<T>(in, key);
  }

  std::vector<double> vector_line(std::size_t n, const char* what) {
    auto in = next(what);
    std::vector<double> v(n);
    for (auto& e : v) e = read_value<double>(in, what);
    std::string extra;
    if (in >> extra) fail(std::string("too many values in ") + what);
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ModelFormatError("model line " + std::to_string(line_no_) + ": " + msg);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const StoredModel& model) {
  out << kMagic << ' ' << kVersion << '\n';
  std::visit(overloaded{
                 [&](const PcaClassModel& m) {
                   out << "kind pca\n";
                   out << "classes " << m.classes.size() << " dim " << m.dim << " components "
                       << m.components << '\n';
                   for (std::size_t c = 0; c < m.classes.size(); ++c) {
                     const auto& sub = m.classes[c];
                     out << "class " << c << " rank " << sub.basis.size() << '\n';
                     write_vector(out, sub.mean);
                     for (const auto& v : sub.basis) write_vector(out, v);
                   }
                 },
                 [&](const SvmClassifier& s) {
                   const auto& m = s.model;
                   out << "kind svm\n";
                   out << "classes " << m.weights.size() << " dim " << m.dim() << '\n';
                   out << "params reg " << format_double(m.params.reg) << " epochs "
                       << m.params.epochs << " seed " << m.params.seed << '\n';
                   out << "scales\n";
                   write_vector(out, s.normalizer.scales);
                   for (std::size_t c = 0; c < m.weights.size(); ++c) {
                     out << "class " << c << " bias " << format_double(m.biases[c]) << '\n';
                     write_vector(out, m.weights[c]);
                   }
                 },
             },
             model);
  if (!out) throw ModelFormatError("failed writing model");
}

StoredModel read_model(std::istream& in) {
  LineReader reader(in);
  {
    auto line = reader.next("header");
    reader.expect_word(line, kMagic);
    const int version = reader.read_value<int>(line, "version");
    if (version != kVersion) reader.fail("unsupported model version " + std::to_string(version));
  }
  std::string kind;
  {
    auto line = reader.next("kind");
    reader.expect_word(line, "kind");
    line >> kind;
  }
  auto dims = reader.next("dimensions");
  const auto classes = reader.keyed<std::size_t>(dims, "classes");
  const auto dim = reader.keyed<std::size_t>(dims, "dim");

  if (kind == "pca") {
    PcaClassModel m;
    m.dim = dim;
    m.components = reader.keyed<int>(dims, "components");
    for (std::size_t c = 0; c < classes; ++c) {
      auto head = reader.next("class header");
      if (reader.keyed<std::size_t>(head, "class") != c) reader.fail("classes out of order");
      const auto rank = reader.keyed<std::size_t>(head, "rank");
      PcaClassSubspace sub;
      sub.mean = reader.vector_line(dim, "class mean");
      for (std::size_t k = 0; k < rank; ++k) sub.basis.push_back(reader.vector_line(dim, "basis"));
      m.classes.push_back(std::move(sub));
    }
    return m;
  }
  if (kind == "svm") {
    SvmClassifier s;
    auto params = reader.next("params");
    reader.expect_word(params, "params");
    s.model.params.reg = reader.keyed<double>(params, "reg");
    s.model.params.epochs = reader.keyed<int>(params, "epochs");
    s.model.params.seed = reader.keyed<std::uint64_t>(params, "seed");
    auto scales = reader.next("scales");
    reader.expect_word(scales, "scales");
    s.normalizer.scales = reader.vector_line(dim, "scales");
    for (std::size_t c = 0; c < classes; ++c) {
      auto head = reader.next("class header");
      if (reader.keyed<std::size_t>(head, "class") != c) reader.fail("classes out of order");
      s.model.biases.push_back(reader.keyed<double>(head, "bias"));
      s.model.weights.push_back(reader.vector_line(dim, "weights"));
    }
    return s;
  }
  reader.fail("unknown model kind '" + kind + "'");
}

void save_model(const std::filesystem::path& path, const StoredModel& model) {
  std::ofstream out(path);
  if (!out) throw ModelFormatError("cannot write model file " + path.string());
  write_model(out, model);
}

StoredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError("cannot open model file " + path.string());
  return read_model(in);
}

std::size_t model_dim(const StoredModel& model) {
  return std::visit(overloaded{[](const PcaClassModel& m) { return m.dim; },
                               [](const SvmClassifier& s) { return s.model.dim(); }},
                    model);
}

std::size_t model_class_count(const StoredModel& model) {
  return std::visit(overloaded{[](const PcaClassModel& m) { return m.classes.size(); },
                               [](const SvmClassifier& s) { return s.model.weights.size(); }},
                    model);
}

int predict(const StoredModel& model, std::span<const double> raw_features) {
  return std::visit(
      overloaded{[&](const PcaClassModel& m) { return pca_predict(m, raw_features); },
                 [&](const SvmClassifier& s) {
                   return svm_predict(s.model, s.normalizer.apply(raw_features));
                 }},
      model);
}

}  // namespace rieszfeat
