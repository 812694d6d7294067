// Copyright 2026 The RPEClu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rpeclu/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>

#include "rpeclu/error.hpp"

namespace rpeclu {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

LoadedData read_csv(const std::filesystem::path& path,
                    const std::optional<std::string>& truth_col) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");

  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.size() >= 3 && rows.empty() && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (trim(line).empty()) continue;
    rows.push_back(split(line));
  }
  if (rows.empty()) throw Error(ErrorCode::kParse, "'" + path.string() + "' has no rows");

  const std::size_t width = rows.front().size();
  bool has_header = false;
  for (const auto& field : rows.front())
    if (!parse_number(field)) has_header = true;

  LoadedData out;
  std::optional<std::size_t> truth_index;
  if (has_header) {
    for (const auto& name : rows.front()) out.feature_names.emplace_back(unquote(name));
  }
  if (truth_col) {
    if (has_header) {
      for (std::size_t j = 0; j < width; ++j)
        if (out.feature_names[j] == *truth_col) truth_index = j;
    } else if (const auto idx = parse_number(*truth_col);
               idx && *idx >= 1 && *idx <= static_cast<double>(width) &&
               *idx == static_cast<double>(static_cast<std::size_t>(*idx))) {
      truth_index = static_cast<std::size_t>(*idx) - 1;
    }
    if (!truth_index)
      throw Error(ErrorCode::kInvalidArgument,
                  "truth column '" + *truth_col + "' not found in '" + path.string() + "'");
    if (has_header) out.feature_names.erase(out.feature_names.begin() + static_cast<long>(*truth_index));
  }

  const std::size_t first = has_header ? 1 : 0;
  const std::size_t n = rows.size() - first;
  const std::size_t p = width - (truth_index ? 1 : 0);
  if (n == 0) throw Error(ErrorCode::kParse, "'" + path.string() + "' has a header but no data");
  if (p == 0) throw Error(ErrorCode::kParse, "'" + path.string() + "' has no feature columns");

  out.x.resize(static_cast<Index>(n), static_cast<Index>(p));
  std::map<std::string, int> levels;
  HardPartition truth;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != width)
      throw Error(ErrorCode::kParse, "line " + std::to_string(r + 1) + " has " +
                                         std::to_string(row.size()) + " fields, expected " +
                                         std::to_string(width));
    std::size_t col = 0;
    for (std::size_t j = 0; j < width; ++j) {
      if (truth_index && j == *truth_index) {
        const std::string key(unquote(row[j]));
        auto [it, inserted] = levels.try_emplace(key, static_cast<int>(levels.size()) + 1);
        if (inserted) out.truth_levels.push_back(key);
        truth.labels.push_back(it->second);
        continue;
      }
      const auto v = parse_number(row[j]);
      if (!v)
        throw Error(ErrorCode::kParse, "non-numeric value '" + row[j] + "' at line " +
                                           std::to_string(r + 1) + ", column " +
                                           std::to_string(j + 1));
      out.x(static_cast<Index>(r - first), static_cast<Index>(col++)) = *v;
    }
  }
  if (truth_index) {
    truth.g = static_cast<int>(levels.size());
    out.truth = std::move(truth);
  }
  return out;
}

void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  const Index p = data.x.cols();
  for (Index j = 0; j < p; ++j) out << 'x' << (j + 1) << ',';
  out << "truth\n";
  for (Index i = 0; i < data.x.rows(); ++i) {
    for (Index j = 0; j < p; ++j) out << format_double(data.x(i, j)) << ',';
    out << data.truth.labels[static_cast<std::size_t>(i)] << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

}  // namespace rpeclu
