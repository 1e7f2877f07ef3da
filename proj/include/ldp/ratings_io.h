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

#ifndef LDP_RATINGS_IO_H_
#define LDP_RATINGS_IO_H_

// Ratings files and star-scale normalization.
//
// A ratings file is UTF-8 CSV with LF line endings and the header
// `user,item,value`. An absent (user, item) pair means the rating is
// missing; there is no sentinel value. Identifiers may not contain commas.
// Every write is canonical: rows sorted by (user, item) and reals printed
// with 12 significant digits, so repeated runs are byte-identical.

#include <iosfwd>
#include <string>
#include <vector>

#include "ldp/completion.h"

namespace ldp {

// Affine map of star level 1..d onto the uniform grid over [-1, 1]:
// v -> 2(v - 1)/(d - 1) - 1. Requires d >= 2.
double NormalizeStars(int value, int d);
// Nearest star level to a value in [-1, 1].
int DenormalizeStars(double value, int d);

// "%.12g".
std::string FormatReal(double value);

struct RatingScale {
  enum class Kind {
    // Values in [-1, 1].
    kUnitInterval,
    // Integer star levels 1..d.
    kStars,
    // Any finite real (privatized continuous ratings).
    kReal,
  };
  Kind kind = Kind::kReal;
  int d = 0;

  static RatingScale UnitInterval() { return {Kind::kUnitInterval, 0}; }
  static RatingScale Stars(int d);
  static RatingScale Real() { return {Kind::kReal, 0}; }
};

struct RatingsTable {
  // Row and column labels, in first-appearance order.
  std::vector<std::string> users;
  std::vector<std::string> items;
  RatingMatrix matrix;
};

// Throws ParseError (with line number) on a bad header, malformed row,
// out-of-scale value or duplicate (user, item) pair.
RatingsTable ParseRatings(std::istream& in, const RatingScale& scale);
RatingsTable ReadRatings(const std::string& path, const RatingScale& scale);

// Observed entries only, sorted by (user, item). Star scales print integers.
void WriteRatings(std::ostream& out, const RatingsTable& table,
                  const RatingScale& scale);
void WriteRatings(const std::string& path, const RatingsTable& table,
                  const RatingScale& scale);

// Dense grid: header `user,<items...>` then one row per user, both sorted.
void WriteDenseGrid(std::ostream& out, const std::vector<std::string>& users,
                    const std::vector<std::string>& items,
                    const Matrix& values);
void WriteDenseGrid(const std::string& path,
                    const std::vector<std::string>& users,
                    const std::vector<std::string>& items,
                    const Matrix& values);

}  // namespace ldp

#endif  // LDP_RATINGS_IO_H_
