#pragma once
// Dataset container and CSV ingestion for the benchmark harness.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace caeac {

// Configuration problems (bad flags, invalid parameters). CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Data problems (missing files, parse failures, shape mismatches). CLI exit
// code 3.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Dataset {
  std::string name;
  std::vector<std::vector<double>> features;  // n rows of d values
  std::vector<std::string> labels;            // length n
  std::string provenance;                     // source path

  std::size_t size() const { return features.size(); }
  std::size_t dimension() const {
    return features.empty() ? 0 : features.front().size();
  }
  std::size_t class_count() const;
};

// Selects the label column by 0-based index or, when `header` is true, by
// column name.
struct LabelColumn {
  static LabelColumn index(std::size_t i) { return {i, {}}; }
  static LabelColumn name(std::string n) { return {0, std::move(n)}; }
  std::size_t idx = 0;
  std::string column_name;  // empty = use idx
};

// Strict comma-separated parsing: rectangular rows, every non-label cell a
// finite double. The label column is kept as text. Throws DataError naming the
// offending line on ragged rows, non-numeric cells, or a missing label column.
Dataset load_csv(const std::string& path, const LabelColumn& label_column,
                 bool header);

// Per-attribute min-max scaling to [0, 1] in place; constant attributes map
// to 0.
void min_max_normalize(std::vector<std::vector<double>>& features);

}  // namespace caeac
