#include "rieszfeat/feature_csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <system_error>

namespace rieszfeat {

namespace {

std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos) return field;
  std::string q = "\"";
  for (char c : field) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw CsvError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double(const std::string& field, std::size_t line_no) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw CsvError("line " + std::to_string(line_no) + ": invalid number '" + field + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  if (table.with_labels && table.labels.size() != table.rows.size()) {
    throw CsvError("label count does not match row count");
  }
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j > 0) out << ',';
    out << quote_if_needed(table.columns[j]);
  }
  if (table.with_labels) out << (table.columns.empty() ? "" : ",") << "label";
  out << '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (row.size() != table.columns.size()) {
      throw CsvError("row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                     " values for " + std::to_string(table.columns.size()) + " columns");
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << format_double(row[j]);
    }
    if (table.with_labels) out << (row.empty() ? "" : ",") << table.labels[i];
    out << '\n';
  }
  if (!out) throw CsvError("failed writing feature table");
}

FeatureTable read_feature_csv(std::istream& in) {
  FeatureTable table;
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.empty()) throw CsvError("feature table is empty");
  table.columns = split_csv_line(line, line_no);
  if (!table.columns.empty() && table.columns.back() == "label") {
    table.with_labels = true;
    table.columns.pop_back();
  }
  const std::size_t expected = table.columns.size() + (table.with_labels ? 1 : 0);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line, line_no);
    if (fields.size() != expected) {
      throw CsvError("line " + std::to_string(line_no) + ": " + std::to_string(fields.size()) +
                     " fields, expected " + std::to_string(expected));
    }
    if (table.with_labels) {
      const std::string& lf = fields.back();
      int label = -1;
      auto [ptr, ec] = std::from_chars(lf.data(), lf.data() + lf.size(), label);
      if (ec != std::errc() || ptr != lf.data() + lf.size() || label < 0) {
        throw CsvError("line " + std::to_string(line_no) + ": invalid label '" + lf + "'");
      }
      table.labels.push_back(label);
      fields.pop_back();
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rieszfeat
