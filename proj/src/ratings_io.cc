// Copyright 2026 The LDP Ratings Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ldp/ratings_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>
#include <utility>

#include "ldp/errors.h"

namespace ldp {

namespace {

constexpr char kHeader[] = "user,item,value";

std::vector<std::string> SplitCommas(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double ParseValue(const std::string& text, const RatingScale& scale, int line) {
  if (scale.kind == RatingScale::Kind::kStars) {
    int stars = 0;
    const auto [end, ec] =
        std::from_chars(text.data(), text.data() + text.size(), stars);
    if (ec != std::errc() || end != text.data() + text.size()) {
      throw ParseError("malformed star rating '" + text + "'", line);
    }
    if (stars < 1 || stars > scale.d) {
      throw ParseError("star rating " + text + " outside 1.." +
                           std::to_string(scale.d),
                       line);
    }
    return stars;
  }
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty() ||
      !std::isfinite(value)) {
    throw ParseError("malformed rating value '" + text + "'", line);
  }
  if (scale.kind == RatingScale::Kind::kUnitInterval &&
      !(value >= -1.0 && value <= 1.0)) {
    throw ParseError("rating " + text + " outside [-1, 1]", line);
  }
  return value;
}

std::vector<size_t> SortedOrder(const std::vector<std::string>& labels) {
  std::vector<size_t> order(labels.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return labels[a] < labels[b]; });
  return order;
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

double NormalizeStars(int value, int d) {
  if (d < 2) throw InvalidParameterError("star normalization needs d >= 2");
  if (value < 1 || value > d) {
    throw InvalidParameterError("star value outside 1..d");
  }
  return 2.0 * (value - 1) / (d - 1) - 1.0;
}

int DenormalizeStars(double value, int d) {
  if (d < 2) throw InvalidParameterError("star normalization needs d >= 2");
  if (!(value >= -1.0 && value <= 1.0)) {
    throw InvalidParameterError("normalized value outside [-1, 1]");
  }
  const int stars = static_cast<int>(std::lround(1.0 + (value + 1.0) * (d - 1) / 2.0));
  return std::clamp(stars, 1, d);
}

std::string FormatReal(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

RatingScale RatingScale::Stars(int d) {
  if (d < 1) throw InvalidParameterError("star scale needs d >= 1");
  return {Kind::kStars, d};
}

RatingsTable ParseRatings(std::istream& in, const RatingScale& scale) {
  std::string line;
  int line_number = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) {
      throw ParseError("expected header '" + std::string(kHeader) + "'",
                       line_number);
    }
    have_header = true;
  }
  if (!have_header) throw ParseError("missing header", 0);

  RatingsTable table;
  std::unordered_map<std::string, size_t> user_index, item_index;
  struct Entry {
    size_t row, col;
    double value;
  };
  std::vector<Entry> entries;
  std::map<std::pair<size_t, size_t>, int> seen;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = SplitCommas(line);
    if (fields.size() != 3) {
      throw ParseError("expected 3 fields, found " +
                           std::to_string(fields.size()),
                       line_number);
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError("empty user or item id", line_number);
    }
    const double value = ParseValue(fields[2], scale, line_number);
    auto [user, user_added] = user_index.try_emplace(fields[0], table.users.size());
    if (user_added) table.users.push_back(fields[0]);
    auto [item, item_added] = item_index.try_emplace(fields[1], table.items.size());
    if (item_added) table.items.push_back(fields[1]);
    const auto key = std::make_pair(user->second, item->second);
    const auto [previous, fresh] = seen.try_emplace(key, line_number);
    if (!fresh) {
      throw ParseError("duplicate rating for (" + fields[0] + ", " +
                           fields[1] + "), first on line " +
                           std::to_string(previous->second),
                       line_number);
    }
    entries.push_back({user->second, item->second, value});
  }

  const auto m = static_cast<Eigen::Index>(table.users.size());
  const auto n = static_cast<Eigen::Index>(table.items.size());
  table.matrix.values = Matrix::Zero(m, n);
  table.matrix.mask = Mask::Constant(m, n, false);
  for (const Entry& e : entries) {
    table.matrix.values(e.row, e.col) = e.value;
    table.matrix.mask(e.row, e.col) = true;
  }
  return table;
}

RatingsTable ReadRatings(const std::string& path, const RatingScale& scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ParseRatings(in, scale);
}

void WriteRatings(std::ostream& out, const RatingsTable& table,
                  const RatingScale& scale) {
  out << kHeader << '\n';
  const std::vector<size_t> users = SortedOrder(table.users);
  const std::vector<size_t> items = SortedOrder(table.items);
  for (size_t i : users) {
    for (size_t j : items) {
      if (!table.matrix.mask(i, j)) continue;
      const double value = table.matrix.values(i, j);
      out << table.users[i] << ',' << table.items[j] << ',';
      if (scale.kind == RatingScale::Kind::kStars) {
        out << std::llround(value);
      } else {
        out << FormatReal(value);
      }
      out << '\n';
    }
  }
}

void WriteRatings(const std::string& path, const RatingsTable& table,
                  const RatingScale& scale) {
  std::ofstream out = OpenForWrite(path);
  WriteRatings(out, table, scale);
}

void WriteDenseGrid(std::ostream& out, const std::vector<std::string>& users,
                    const std::vector<std::string>& items,
                    const Matrix& values) {
  if (values.rows() != static_cast<Eigen::Index>(users.size()) ||
      values.cols() != static_cast<Eigen::Index>(items.size())) {
    throw InvalidParameterError("grid labels do not match the matrix shape");
  }
  const std::vector<size_t> rows = SortedOrder(users);
  const std::vector<size_t> cols = SortedOrder(items);
  out << "user";
  for (size_t j : cols) out << ',' << items[j];
  out << '\n';
  for (size_t i : rows) {
    out << users[i];
    for (size_t j : cols) out << ',' << FormatReal(values(i, j));
    out << '\n';
  }
}

void WriteDenseGrid(const std::string& path,
                    const std::vector<std::string>& users,
                    const std::vector<std::string>& items,
                    const Matrix& values) {
  std::ofstream out = OpenForWrite(path);
  WriteDenseGrid(out, users, items, values);
}

}  // namespace ldp
