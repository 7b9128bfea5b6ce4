#include "rieszfeat/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace rieszfeat {

namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path, bool idx) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    const std::string msg = "cannot open " + path.string();
    if (idx) throw IdxError(IdxError::Kind::Io, msg);
    throw GrayImageError(GrayImageError::Kind::Io, msg);
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void require_header(const std::vector<unsigned char>& bytes, std::size_t header_bytes,
                    const std::filesystem::path& path) {
  if (bytes.size() < header_bytes) {
    throw IdxError(IdxError::Kind::Truncated,
                   path.string() + ": truncated IDX header (" + std::to_string(bytes.size()) +
                       " bytes)");
  }
}

void require_magic(std::uint32_t magic, std::uint32_t expected,
                   const std::filesystem::path& path) {
  if (magic != expected) {
    std::ostringstream msg;
    msg << path.string() << ": bad IDX magic 0x" << std::hex << magic << ", expected 0x"
        << expected;
    throw IdxError(IdxError::Kind::BadMagic, msg.str());
  }
}

// Netpbm header tokenizer: whitespace separated, '#' starts a comment to end of line.
class PnmTokenizer {
 public:
  explicit PnmTokenizer(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  bool next(std::string& token) {
    token.clear();
    while (pos_ < bytes_.size()) {
      const char c = static_cast<char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      token.push_back(static_cast<char>(bytes_[pos_++]));
    }
    return !token.empty();
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

long parse_positive(const std::string& token, const std::filesystem::path& path,
                    const char* what) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || value <= 0) {
    throw GrayImageError(GrayImageError::Kind::InconsistentDimensions,
                         path.string() + ": invalid " + what + " '" + token + "'");
  }
  return value;
}

ImageGrid load_pnm(const std::vector<unsigned char>& bytes, bool binary,
                   const std::filesystem::path& path) {
  PnmTokenizer tok(bytes);
  std::string token;
  tok.next(token);  // magic, already checked
  std::string wtok, htok, mtok;
  if (!tok.next(wtok) || !tok.next(htok) || !tok.next(mtok)) {
    throw GrayImageError(GrayImageError::Kind::Truncated, path.string() + ": truncated header");
  }
  const auto width = static_cast<std::size_t>(parse_positive(wtok, path, "width"));
  const auto height = static_cast<std::size_t>(parse_positive(htok, path, "height"));
  const long maxval = parse_positive(mtok, path, "maxval");
  if (maxval > 65535) {
    throw GrayImageError(GrayImageError::Kind::UnsupportedFormat,
                         path.string() + ": maxval above 65535");
  }
  const double scale = 1.0 / static_cast<double>(maxval);
  const std::size_t count = width * height;
  std::vector<double> samples;
  samples.reserve(count);

  if (binary) {
    const std::size_t start = tok.position() + 1;  // single whitespace after maxval
    const std::size_t bps = maxval > 255 ? 2 : 1;
    if (start > bytes.size() || bytes.size() - start < count * bps) {
      throw GrayImageError(GrayImageError::Kind::Truncated,
                           path.string() + ": pixel data shorter than " +
                               std::to_string(count) + " samples");
    }
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = start + i * bps;
      const unsigned v = bps == 2 ? (unsigned{bytes[at]} << 8) | bytes[at + 1] : bytes[at];
      samples.push_back(static_cast<double>(v) * scale);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      if (!tok.next(token)) {
        throw GrayImageError(GrayImageError::Kind::Truncated,
                             path.string() + ": declared " + std::to_string(count) +
                                 " pixels but found " + std::to_string(i));
      }
      std::size_t used = 0;
      long v = -1;
      try {
        v = std::stol(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || v < 0 || v > maxval) {
        throw GrayImageError(GrayImageError::Kind::InconsistentDimensions,
                             path.string() + ": invalid pixel value '" + token + "'");
      }
      samples.push_back(static_cast<double>(v) * scale);
    }
  }
  return ImageGrid(height, width, std::move(samples));
}

ImageGrid load_matrix_text(const std::vector<unsigned char>& bytes,
                           const std::filesystem::path& path) {
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  long rows = 0;
  long cols = 0;
  std::string extra;
  if (!(hs >> rows >> cols) || (hs >> extra) || rows <= 0 || cols <= 0) {
    throw GrayImageError(GrayImageError::Kind::UnsupportedFormat,
                         path.string() + ": not a graymap and no 'rows cols' header line");
  }
  const auto count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<double> samples;
  samples.reserve(count);
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) {
      throw GrayImageError(GrayImageError::Kind::InconsistentDimensions,
                           path.string() + ": invalid value '" + token + "'");
    }
    samples.push_back(v);
  }
  if (samples.size() < count) {
    throw GrayImageError(GrayImageError::Kind::Truncated,
                         path.string() + ": declared " + std::to_string(count) +
                             " values but found " + std::to_string(samples.size()));
  }
  if (samples.size() > count) {
    throw GrayImageError(GrayImageError::Kind::InconsistentDimensions,
                         path.string() + ": more values than the declared " +
                             std::to_string(rows) + "x" + std::to_string(cols));
  }
  return ImageGrid(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                   std::move(samples));
}

}  // namespace

std::vector<ImageGrid> load_idx_images(const std::filesystem::path& path) {
  const auto bytes = read_all(path, true);
  require_header(bytes, 16, path);
  require_magic(read_be32(bytes, 0), kIdxImageMagic, path);
  const std::size_t count = read_be32(bytes, 4);
  const std::size_t rows = read_be32(bytes, 8);
  const std::size_t cols = read_be32(bytes, 12);
  const std::size_t pixels = rows * cols;
  if (count > 0 && pixels == 0) {
    throw IdxError(IdxError::Kind::Truncated, path.string() + ": zero image dimensions");
  }
  if (bytes.size() - 16 < count * pixels) {
    throw IdxError(IdxError::Kind::Truncated,
                   path.string() + ": payload holds " + std::to_string(bytes.size() - 16) +
                       " bytes, header promises " + std::to_string(count * pixels));
  }
  std::vector<ImageGrid> images;
  images.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<double> samples(pixels);
    const unsigned char* src = bytes.data() + 16 + n * pixels;
    for (std::size_t i = 0; i < pixels; ++i) samples[i] = src[i] / 255.0;
    images.emplace_back(rows, cols, std::move(samples));
  }
  return images;
}

std::vector<int> load_idx_labels(const std::filesystem::path& path) {
  const auto bytes = read_all(path, true);
  require_header(bytes, 8, path);
  require_magic(read_be32(bytes, 0), kIdxLabelMagic, path);
  const std::size_t count = read_be32(bytes, 4);
  if (bytes.size() - 8 < count) {
    throw IdxError(IdxError::Kind::Truncated,
                   path.string() + ": payload holds " + std::to_string(bytes.size() - 8) +
                       " labels, header promises " + std::to_string(count));
  }
  return std::vector<int>(bytes.begin() + 8, bytes.begin() + 8 + static_cast<long>(count));
}

LabeledDataset load_idx(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path) {
  LabeledDataset ds;
  ds.images = load_idx_images(images_path);
  ds.labels = load_idx_labels(labels_path);
  if (ds.images.size() != ds.labels.size()) {
    throw IdxError(IdxError::Kind::CountMismatch,
                   "image file holds " + std::to_string(ds.images.size()) +
                       " images but label file holds " + std::to_string(ds.labels.size()) +
                       " labels");
  }
  ds.class_count =
      ds.labels.empty() ? 1 : *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
  return ds;
}

ImageGrid load_gray_image(const std::filesystem::path& path) {
  const auto bytes = read_all(path, false);
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '2') return load_pnm(bytes, false, path);
    if (bytes[1] == '5') return load_pnm(bytes, true, path);
    throw GrayImageError(GrayImageError::Kind::UnsupportedFormat,
                         path.string() + ": unsupported netpbm variant P" +
                             static_cast<char>(bytes[1]));
  }
  return load_matrix_text(bytes, path);
}

void write_pgm(const std::filesystem::path& path, const ImageGrid& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw GrayImageError(GrayImageError::Kind::Io, "cannot write " + path.string());
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  std::string row;
  row.reserve(img.size());
  for (double v : img.samples()) {
    row.push_back(static_cast<char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
  }
  out.write(row.data(), static_cast<std::streamsize>(row.size()));
  if (!out) throw GrayImageError(GrayImageError::Kind::Io, "write failed: " + path.string());
}

}  // namespace rieszfeat
