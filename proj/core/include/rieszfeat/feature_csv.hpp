#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rieszfeat {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Feature table as stored on disk.
///
/// Header: one column per feature path name ("[]", "[0]", "[2,1,3]"; names
/// containing commas are double-quoted), then an optional trailing "label"
/// column. Values use the shortest decimal form that reads back bit-exactly.
/// Rows of images that failed upstream carry "nan" in every feature field.
struct FeatureTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  bool with_labels = false;
  std::vector<int> labels;  // one per row when with_labels
};

/// Shortest round-trip decimal representation; "nan" for NaN.
std::string format_double(double value);

void write_feature_csv(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_csv(std::istream& in);

}  // namespace rieszfeat
