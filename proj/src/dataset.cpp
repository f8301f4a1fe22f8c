#include "caeac/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace caeac {

std::size_t Dataset::class_count() const {
  return std::set<std::string>(labels.begin(), labels.end()).size();
}

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, const std::string& path,
                  std::size_t line_number) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || !std::isfinite(value))
    throw DataError(path + ":" + std::to_string(line_number) +
                    ": non-numeric feature cell '" + cell + "'");
  return value;
}

std::string dataset_name_from_path(const std::string& path) {
  auto base = path;
  const auto slash = base.find_last_of("/\\");
  if (slash != std::string::npos) base = base.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
  return base;
}

}  // namespace

Dataset load_csv(const std::string& path, const LabelColumn& label_column,
                 bool header) {
  std::ifstream file(path);
  if (!file) throw DataError("cannot open data file: " + path);

  Dataset dataset;
  dataset.name = dataset_name_from_path(path);
  dataset.provenance = path;

  std::string line;
  std::size_t line_number = 0;
  std::size_t width = 0;
  std::size_t label_index = label_column.idx;
  bool resolved_label = label_column.column_name.empty();

  auto strip_bom = [&line, &line_number]() {
    if (line_number == 1 && line.size() >= 3 && line[0] == '\xEF' &&
        line[1] == '\xBB' && line[2] == '\xBF')
      line = line.substr(3);
  };

  if (header) {
    if (!std::getline(file, line))
      throw DataError(path + ": empty file (no header line)");
    ++line_number;
    strip_bom();
    const auto names = split_csv_line(line);
    width = names.size();
    if (!resolved_label) {
      const auto it = std::find(names.begin(), names.end(),
                                trim(label_column.column_name));
      if (it == names.end())
        throw DataError(path + ":1: no column named '" +
                        label_column.column_name + "' in header");
      label_index = static_cast<std::size_t>(it - names.begin());
      resolved_label = true;
    }
  } else if (!resolved_label) {
    throw DataError(path + ": label column by name requires a header row");
  }

  while (std::getline(file, line)) {
    ++line_number;
    strip_bom();
    const auto cells = split_csv_line(line);
    if (cells.empty() || (cells.size() == 1 && cells.front().empty())) {
      throw DataError(path + ":" + std::to_string(line_number) + ": blank row");
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw DataError(path + ":" + std::to_string(line_number) +
                      ": ragged row (" + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(width) + ")");
    if (label_index >= width)
      throw DataError(path + ":" + std::to_string(line_number) +
                      ": label column " + std::to_string(label_index) +
                      " out of range for " + std::to_string(width) + " columns");
    std::vector<double> row;
    row.reserve(width - 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_index) continue;
      row.push_back(parse_cell(cells[c], path, line_number));
    }
    if (row.empty())
      throw DataError(path + ":" + std::to_string(line_number) +
                      ": no feature columns besides the label");
    dataset.features.push_back(std::move(row));
    dataset.labels.push_back(cells[label_index]);
  }
  if (dataset.features.empty())
    throw DataError(path + ": no data rows");
  return dataset;
}

void min_max_normalize(std::vector<std::vector<double>>& features) {
  if (features.empty()) return;
  const std::size_t d = features.front().size();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& row : features)
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], row[i]);
      hi[i] = std::max(hi[i], row[i]);
    }
  for (auto& row : features)
    for (std::size_t i = 0; i < d; ++i)
      row[i] = hi[i] > lo[i] ? (row[i] - lo[i]) / (hi[i] - lo[i]) : 0.0;
}

}  // namespace caeac
