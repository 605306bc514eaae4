#include "quasar/problems/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "quasar/errors.hpp"

namespace quasar {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> to_number(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
  return v;
}

bool is_index(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

CsvDataset load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> table;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    table.push_back(split(line));
    line_numbers.push_back(lineno);
  }
  if (in.bad()) throw IoError("read error on '" + path + "'");
  if (table.empty()) throw ParseError(path, "no data rows");

  std::vector<std::string> header;
  const bool has_header = std::any_of(table.front().begin(), table.front().end(),
                                      [](const std::string& c) { return !to_number(c); });
  if (has_header) header = table.front();
  const std::size_t first = has_header ? 1 : 0;
  const std::size_t width = table.front().size();
  if (table.size() <= first) throw ParseError(path, "no data rows");
  if (width < 2) throw ParseError(path, "need at least one feature and one label column");

  std::size_t label = 0;
  if (is_index(label_column)) {
    label = std::stoul(label_column);
    if (label >= width) {
      throw ParseError(path, "label column " + label_column + " out of range");
    }
  } else {
    const auto it = std::find(header.begin(), header.end(), label_column);
    if (it == header.end()) throw ParseError(path, "unknown label column '" + label_column + "'");
    label = static_cast<std::size_t>(it - header.begin());
  }

  CsvDataset out;
  out.cols = width - 1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != label) out.names.push_back(header[c]);
  }
  std::vector<double> raw_labels;
  for (std::size_t r = first; r < table.size(); ++r) {
    const auto& row = table[r];
    const std::string where = path + ":" + std::to_string(line_numbers[r]);
    if (row.size() != width) {
      throw ParseError(where, "expected " + std::to_string(width) + " cells, found " +
                                  std::to_string(row.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      const auto v = to_number(row[c]);
      if (!v) throw ParseError(where + ":" + std::to_string(c + 1), "non-numeric cell '" + row[c] + "'");
      if (c == label) {
        raw_labels.push_back(*v);
      } else {
        out.features.push_back(*v);
      }
    }
  }
  const std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() != 2) {
    throw ParseError(path, "label column must take exactly two values, found " +
                               std::to_string(distinct.size()));
  }
  const double low = *distinct.begin();
  out.rows = raw_labels.size();
  out.labels.reserve(out.rows);
  for (double v : raw_labels) out.labels.push_back(v == low ? -1.0 : 1.0);
  return out;
}

}  // namespace quasar
