#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace quasar {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvDataset {
  std::size_t rows = 0;
  std::size_t cols = 0;            // feature count
  std::vector<double> features;    // rows x cols, row-major
  std::vector<double> labels;      // +1 / -1
  std::vector<std::string> names;  // feature names; empty without a header
};

// label_column is a header name or a zero-based column index. A first row with a
// non-numeric cell is read as a header. The label column must take exactly two
// values; the smaller maps to -1 and the larger to +1.
CsvDataset load_csv(const std::string& path, const std::string& label_column);

}  // namespace quasar
