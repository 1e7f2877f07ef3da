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

#include "ldp/dp_verify.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "ldp/errors.h"

namespace ldp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string FormatNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

std::string AtomLabel(const EventAtom& atom) {
  if (const auto* interval = std::get_if<RealInterval>(&atom)) {
    return "[" + FormatNumber(interval->lo) + ":" + FormatNumber(interval->hi) +
           ")";
  }
  if (std::holds_alternative<MissingAtom>(atom)) return "?";
  return "{" + std::to_string(std::get<CategoryAtom>(atom).value) + "}";
}

double DropProbability(PrivacyBudget epsilon) {
  return 1.0 / (1.0 + std::exp(0.5 * epsilon.epsilon()));
}

// Mass of the real part of `event` under Laplace(center, scale).
double RealMass(const OutputEvent& event, double center, double scale) {
  double mass = 0.0;
  for (const EventAtom& atom : event.atoms()) {
    if (const auto* interval = std::get_if<RealInterval>(&atom)) {
      mass += LaplaceIntervalMass(interval->lo - center, interval->hi - center,
                                  scale);
    }
  }
  return mass;
}

// Fills ratio/pass for an exact comparison, including the zero-denominator
// conventions: 0/0 passes with ratio 0, positive/0 fails with ratio inf.
void FinishExact(RatioReport& report) {
  if (report.denominator > 0.0) {
    report.ratio = report.numerator / report.denominator;
  } else {
    report.ratio = report.numerator > 0.0 ? kInf : 0.0;
  }
  report.reference_ratio = report.ratio;
  report.method = CertificationMethod::kExact;
  report.pass = report.ratio <= report.bound + kExactRatioTolerance;
}

std::string JoinVector(const std::vector<std::string>& parts) {
  std::string out = "(";
  for (size_t k = 0; k < parts.size(); ++k) {
    if (k > 0) out += ";";
    out += parts[k];
  }
  return out + ")";
}

void SortWorstFirst(std::vector<RatioReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const RatioReport& a, const RatioReport& b) {
                     return a.ratio > b.ratio;
                   });
}

}  // namespace

OutputEvent OutputEvent::Interval(double lo, double hi) {
  return Union({RealInterval{lo, hi}});
}

OutputEvent OutputEvent::Missing() { return Union({MissingAtom{}}); }

OutputEvent OutputEvent::Category(int value) {
  return Union({CategoryAtom{value}});
}

OutputEvent OutputEvent::Union(std::vector<EventAtom> atoms) {
  if (atoms.empty()) throw InvalidParameterError("event has no atoms");
  std::vector<RealInterval> intervals;
  std::vector<int> categories;
  int missing = 0;
  for (const EventAtom& atom : atoms) {
    if (const auto* interval = std::get_if<RealInterval>(&atom)) {
      if (std::isnan(interval->lo) || std::isnan(interval->hi) ||
          !(interval->lo < interval->hi)) {
        throw InvalidParameterError("interval needs lo < hi");
      }
      intervals.push_back(*interval);
    } else if (std::holds_alternative<MissingAtom>(atom)) {
      ++missing;
    } else {
      const int value = std::get<CategoryAtom>(atom).value;
      if (value < 0) throw InvalidParameterError("negative category");
      categories.push_back(value);
    }
  }
  if (missing > 1) throw InvalidParameterError("Missing atom repeated");
  std::sort(categories.begin(), categories.end());
  if (std::adjacent_find(categories.begin(), categories.end()) !=
      categories.end()) {
    throw InvalidParameterError("category repeated");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const RealInterval& a, const RealInterval& b) {
              return a.lo < b.lo;
            });
  for (size_t k = 1; k < intervals.size(); ++k) {
    if (intervals[k - 1].hi > intervals[k].lo) {
      throw InvalidParameterError("event intervals overlap");
    }
  }
  return OutputEvent(std::move(atoms));
}

bool OutputEvent::ContainsMissing() const {
  return std::any_of(atoms_.begin(), atoms_.end(), [](const EventAtom& a) {
    return std::holds_alternative<MissingAtom>(a);
  });
}

bool OutputEvent::HasRealPart() const {
  return std::any_of(atoms_.begin(), atoms_.end(), [](const EventAtom& a) {
    return std::holds_alternative<RealInterval>(a);
  });
}

bool OutputEvent::HasCategories() const {
  return std::any_of(atoms_.begin(), atoms_.end(), [](const EventAtom& a) {
    return std::holds_alternative<CategoryAtom>(a);
  });
}

bool OutputEvent::Contains(const PerturbedRating& value) const {
  if (value.is_missing()) return ContainsMissing();
  const double v = value.value();
  for (const EventAtom& atom : atoms_) {
    if (const auto* interval = std::get_if<RealInterval>(&atom)) {
      if (v >= interval->lo && v < interval->hi) return true;
    }
  }
  return false;
}

bool OutputEvent::Contains(int category) const {
  for (const EventAtom& atom : atoms_) {
    if (const auto* c = std::get_if<CategoryAtom>(&atom)) {
      if (c->value == category) return true;
    }
  }
  return false;
}

std::string OutputEvent::Label() const {
  std::string out;
  for (size_t k = 0; k < atoms_.size(); ++k) {
    if (k > 0) out += "|";
    out += AtomLabel(atoms_[k]);
  }
  return out;
}

std::string ProductEvent::Label() const {
  std::string out;
  for (size_t k = 0; k < coordinates.size(); ++k) {
    if (k > 0) out += "x";
    out += coordinates[k].Label();
  }
  return out;
}

std::string_view MethodName(CertificationMethod method) {
  return method == CertificationMethod::kExact ? "exact" : "monte_carlo";
}

double ModifiedLaplaceEventProbability(const ContinuousRating& x,
                                       PrivacyBudget epsilon,
                                       const OutputEvent& event) {
  if (event.HasCategories()) {
    throw InvalidParameterError(
        "category atoms are not outputs of the modified Laplace mechanism");
  }
  const double keep = BernoulliKeepProbability(epsilon);
  const double drop = DropProbability(epsilon);
  const double scale = 2.0 / epsilon.epsilon();
  const double missing = event.ContainsMissing() ? 1.0 : 0.0;
  if (x.is_missing()) {
    return keep * missing + drop * RealMass(event, 0.0, scale);
  }
  return keep * RealMass(event, x.value(), scale) + drop * missing;
}

double RandomizedResponseEventProbability(int x, int d, PrivacyBudget epsilon,
                                          const OutputEvent& event) {
  const std::vector<double> pmf = RandomizedResponsePmf(x, d, epsilon);
  double total = 0.0;
  for (const EventAtom& atom : event.atoms()) {
    const auto* c = std::get_if<CategoryAtom>(&atom);
    if (c == nullptr) {
      throw InvalidParameterError(
          "randomized response events may only contain categories");
    }
    if (c->value > d) throw InvalidParameterError("category exceeds d");
    total += pmf[c->value];
  }
  return total;
}

std::pair<double, double> WilsonInterval(int64_t successes, int64_t trials,
                                         double z) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw InvalidParameterError("invalid binomial counts");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denominator = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denominator;
  const double half =
      z / denominator * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string ModifiedLaplaceCase(const ContinuousRating& x,
                                const ContinuousRating& y,
                                const OutputEvent& event) {
  // Row: which input is missing. Column: S real-only, {?}, or mixed.
  int row = 0;
  if (!x.is_missing() && y.is_missing()) {
    row = 1;
  } else if (x.is_missing() && !y.is_missing()) {
    row = 2;
  } else if (x.is_missing() && y.is_missing()) {
    throw InvalidParameterError("both inputs missing: not a distinct pair");
  }
  int column = 0;
  if (event.ContainsMissing()) column = event.HasRealPart() ? 2 : 1;
  static constexpr const char* kNames[9] = {"i",   "ii", "iii", "iv", "v",
                                            "vi",  "vii", "viii", "ix"};
  return kNames[3 * row + column];
}

RatioReport CompareModifiedLaplace(const ContinuousRating& x,
                                   const ContinuousRating& y,
                                   PrivacyBudget epsilon,
                                   const OutputEvent& event) {
  RatioReport report;
  report.case_label = ModifiedLaplaceCase(x, y, event);
  report.x = FormatRating(x);
  report.y = FormatRating(y);
  report.event = event.Label();
  report.numerator = ModifiedLaplaceEventProbability(x, epsilon, event);
  report.denominator = ModifiedLaplaceEventProbability(y, epsilon, event);
  report.bound = std::exp(epsilon.epsilon());
  FinishExact(report);
  return report;
}

std::vector<OutputEvent> ModifiedLaplacePartition(int bins,
                                                  double half_width) {
  if (bins < 1 || !(half_width > 0.0) || !std::isfinite(half_width)) {
    throw InvalidParameterError("partition needs bins >= 1, half_width > 0");
  }
  std::vector<OutputEvent> partition;
  partition.push_back(OutputEvent::Missing());
  partition.push_back(OutputEvent::Interval(-kInf, -half_width));
  const double width = 2.0 * half_width / bins;
  for (int k = 0; k < bins; ++k) {
    const double lo = -half_width + k * width;
    const double hi = k + 1 == bins ? half_width : -half_width + (k + 1) * width;
    partition.push_back(OutputEvent::Interval(lo, hi));
  }
  partition.push_back(OutputEvent::Interval(half_width, kInf));
  return partition;
}

std::vector<std::pair<ContinuousRating, ContinuousRating>>
ModifiedLaplaceGrid() {
  const std::vector<ContinuousRating> values = {
      ContinuousRating::Observed(-1.0), ContinuousRating::Observed(-0.5),
      ContinuousRating::Observed(0.0),  ContinuousRating::Observed(0.5),
      ContinuousRating::Observed(1.0),  ContinuousRating::Missing()};
  std::vector<std::pair<ContinuousRating, ContinuousRating>> grid;
  for (const ContinuousRating& x : values) {
    for (const ContinuousRating& y : values) {
      if (x != y) grid.emplace_back(x, y);
    }
  }
  return grid;
}

std::vector<OutputEvent> RandomizedResponsePartition(int d) {
  ValidateStarScale(d);
  std::vector<OutputEvent> partition;
  for (int j = 0; j <= d; ++j) partition.push_back(OutputEvent::Category(j));
  return partition;
}

std::vector<RatioReport> CertifyModifiedLaplaceEntry(
    PrivacyBudget epsilon,
    std::span<const std::pair<ContinuousRating, ContinuousRating>> grid,
    std::span<const OutputEvent> partition) {
  // The partition must be the Missing atom plus contiguous intervals
  // running from -inf to +inf.
  int missing_cells = 0;
  std::vector<RealInterval> cells;
  for (const OutputEvent& event : partition) {
    if (event.atoms().size() != 1) {
      throw InvalidParameterError("partition cells must be single atoms");
    }
    const EventAtom& atom = event.atoms().front();
    if (std::holds_alternative<MissingAtom>(atom)) {
      ++missing_cells;
    } else if (const auto* interval = std::get_if<RealInterval>(&atom)) {
      cells.push_back(*interval);
    } else {
      throw InvalidParameterError("category cell in a continuous partition");
    }
  }
  if (missing_cells != 1) {
    throw InvalidParameterError("partition must contain the Missing atom once");
  }
  std::sort(cells.begin(), cells.end(),
            [](const RealInterval& a, const RealInterval& b) {
              return a.lo < b.lo;
            });
  if (cells.empty() || cells.front().lo != -kInf || cells.back().hi != kInf) {
    throw InvalidParameterError("partition does not cover the real line");
  }
  for (size_t k = 1; k < cells.size(); ++k) {
    if (cells[k - 1].hi != cells[k].lo) {
      throw InvalidParameterError("partition has a gap or overlap at " +
                                  FormatNumber(cells[k].lo));
    }
  }

  bool real_real = false, real_missing = false, missing_real = false;
  for (const auto& [x, y] : grid) {
    real_real |= !x.is_missing() && !y.is_missing() && x != y;
    real_missing |= !x.is_missing() && y.is_missing();
    missing_real |= x.is_missing() && !y.is_missing();
  }
  if (!(real_real && real_missing && missing_real)) {
    throw InvalidParameterError(
        "grid must contain (real, real), (real, ?) and (?, real) pairs");
  }

  std::vector<OutputEvent> events(partition.begin(), partition.end());
  for (const RealInterval& cell : cells) {
    events.push_back(OutputEvent::Union({MissingAtom{}, cell}));
  }
  events.push_back(OutputEvent::Interval(-kInf, kInf));
  events.push_back(OutputEvent::Union({MissingAtom{}, RealInterval{-kInf, kInf}}));

  std::vector<RatioReport> reports;
  for (const auto& [x, y] : grid) {
    if (x == y) continue;
    for (const OutputEvent& event : events) {
      reports.push_back(CompareModifiedLaplace(x, y, epsilon, event));
    }
  }
  SortWorstFirst(reports);
  return reports;
}

std::vector<RatioReport> CertifyRandomizedResponseEntry(int d,
                                                        PrivacyBudget epsilon) {
  ValidateStarScale(d);
  std::vector<std::vector<double>> pmf;
  for (int i = 0; i <= d; ++i) {
    pmf.push_back(RandomizedResponsePmf(i, d, epsilon));
  }
  const double bound = std::exp(epsilon.epsilon());
  std::vector<RatioReport> reports;
  for (int x = 0; x <= d; ++x) {
    for (int y = 0; y <= d; ++y) {
      if (x == y) continue;
      for (int s = 0; s <= d; ++s) {
        RatioReport report;
        report.case_label = s == x ? "i" : (s == y ? "ii" : "iii");
        report.x = std::to_string(x);
        report.y = std::to_string(y);
        report.event = OutputEvent::Category(s).Label();
        report.numerator = pmf[x][s];
        report.denominator = pmf[y][s];
        report.bound = bound;
        FinishExact(report);
        reports.push_back(std::move(report));
      }
    }
  }
  SortWorstFirst(reports);
  return reports;
}

namespace {

// Digits of `index` in base `radix`, least significant first.
std::vector<int> Digits(int64_t index, int radix, int n) {
  std::vector<int> digits(n);
  for (int k = 0; k < n; ++k) {
    digits[k] = static_cast<int>(index % radix);
    index /= radix;
  }
  return digits;
}

int64_t IntPow(int64_t base, int exponent) {
  int64_t out = 1;
  for (int k = 0; k < exponent; ++k) out *= base;
  return out;
}

RatioReport ComposeRandomizedResponse(int n, int d, PrivacyBudget epsilon) {
  ValidateStarScale(d);
  std::vector<std::vector<double>> pmf;
  for (int i = 0; i <= d; ++i) {
    pmf.push_back(RandomizedResponsePmf(i, d, epsilon));
  }
  const int64_t vectors = IntPow(d + 1, n);
  RatioReport worst;
  worst.ratio = -1.0;
  for (int64_t a = 0; a < vectors; ++a) {
    const std::vector<int> xa = Digits(a, d + 1, n);
    for (int64_t b = 0; b < vectors; ++b) {
      if (a == b) continue;
      const std::vector<int> xb = Digits(b, d + 1, n);
      for (int64_t s = 0; s < vectors; ++s) {
        const std::vector<int> xs = Digits(s, d + 1, n);
        double num = 1.0, den = 1.0;
        for (int k = 0; k < n; ++k) {
          num *= pmf[xa[k]][xs[k]];
          den *= pmf[xb[k]][xs[k]];
        }
        const double ratio = num / den;
        if (ratio > worst.ratio) {
          auto labels = [](const std::vector<int>& v) {
            std::vector<std::string> parts;
            for (int value : v) parts.push_back(std::to_string(value));
            return parts;
          };
          worst.x = JoinVector(labels(xa));
          worst.y = JoinVector(labels(xb));
          ProductEvent event;
          for (int value : xs) {
            event.coordinates.push_back(OutputEvent::Category(value));
          }
          worst.event = event.Label();
          worst.numerator = num;
          worst.denominator = den;
          worst.ratio = ratio;
        }
      }
    }
  }
  worst.case_label = "composition";
  worst.bound = std::exp(n * epsilon.epsilon());
  FinishExact(worst);
  return worst;
}

RatioReport ComposeModifiedLaplace(int n, PrivacyBudget epsilon,
                                   RandomStream& rng, int64_t mc_samples) {
  if (mc_samples < kMinCompositionSamples) {
    throw InvalidParameterError(
        "modified Laplace composition needs at least 10^6 samples, got " +
        std::to_string(mc_samples));
  }
  const std::vector<ContinuousRating> inputs = {
      ContinuousRating::Observed(-1.0), ContinuousRating::Observed(1.0),
      ContinuousRating::Missing()};
  const std::vector<OutputEvent> cells = {
      OutputEvent::Missing(), OutputEvent::Interval(-kInf, -2.0),
      OutputEvent::Interval(-2.0, 0.0), OutputEvent::Interval(0.0, 2.0),
      OutputEvent::Interval(2.0, kInf)};
  const int radix = static_cast<int>(cells.size());
  const int64_t vectors = IntPow(3, n);
  const int64_t product_cells = IntPow(radix, n);

  auto cell_of = [&](const PerturbedRating& value) {
    for (int c = 0; c < radix; ++c) {
      if (cells[c].Contains(value)) return c;
    }
    return radix - 1;
  };

  std::vector<std::vector<int64_t>> counts(
      vectors, std::vector<int64_t>(product_cells, 0));
  std::vector<std::vector<double>> exact(vectors,
                                         std::vector<double>(product_cells));
  for (int64_t v = 0; v < vectors; ++v) {
    const std::vector<int> digits = Digits(v, 3, n);
    std::vector<ContinuousRating> x;
    for (int digit : digits) x.push_back(inputs[digit]);
    for (int64_t c = 0; c < product_cells; ++c) {
      const std::vector<int> cell_digits = Digits(c, radix, n);
      double p = 1.0;
      for (int k = 0; k < n; ++k) {
        p *= ModifiedLaplaceEventProbability(x[k], epsilon,
                                             cells[cell_digits[k]]);
      }
      exact[v][c] = p;
    }
    for (int64_t t = 0; t < mc_samples; ++t) {
      int64_t index = 0, weight = 1;
      for (int k = 0; k < n; ++k) {
        index += weight * cell_of(PerturbModifiedLaplace(x[k], epsilon, rng));
        weight *= radix;
      }
      ++counts[v][index];
    }
  }

  auto vector_label = [&](int64_t v) {
    std::vector<std::string> parts;
    for (int digit : Digits(v, 3, n)) parts.push_back(FormatRating(inputs[digit]));
    return JoinVector(parts);
  };

  const double bound = std::exp(n * epsilon.epsilon());
  const double samples = static_cast<double>(mc_samples);
  RatioReport worst;
  double worst_adjusted = -1.0;
  for (int64_t a = 0; a < vectors; ++a) {
    for (int64_t b = 0; b < vectors; ++b) {
      if (a == b) continue;
      for (int64_t c = 0; c < product_cells; ++c) {
        const auto [lo_a, hi_a] =
            WilsonInterval(counts[a][c], mc_samples, kWilsonZ999);
        const auto [lo_b, hi_b] =
            WilsonInterval(counts[b][c], mc_samples, kWilsonZ999);
        const double adjusted = lo_a / hi_b;
        if (adjusted <= worst_adjusted) continue;
        worst_adjusted = adjusted;
        worst.x = vector_label(a);
        worst.y = vector_label(b);
        ProductEvent event;
        for (int digit : Digits(c, radix, n)) {
          event.coordinates.push_back(cells[digit]);
        }
        worst.event = event.Label();
        worst.numerator = counts[a][c] / samples;
        worst.denominator = counts[b][c] / samples;
        worst.ratio = worst.denominator > 0.0
                          ? worst.numerator / worst.denominator
                          : (worst.numerator > 0.0 ? kInf : 0.0);
        worst.slack = std::max(0.0, worst.ratio - adjusted);
        worst.reference_ratio = exact[a][c] / exact[b][c];
      }
    }
  }
  worst.case_label = "composition";
  worst.bound = bound;
  worst.method = CertificationMethod::kMonteCarlo;
  worst.mc_samples = mc_samples;
  worst.pass = worst_adjusted <= bound &&
               worst.reference_ratio <= bound + kExactRatioTolerance;
  return worst;
}

}  // namespace

RatioReport CertifyVectorComposition(Mechanism mechanism, int n,
                                     PrivacyBudget epsilon, RandomStream& rng,
                                     int64_t mc_samples, int d) {
  if (n < 1 || n > 3) {
    throw InvalidParameterError("composition check supports 1 <= n <= 3");
  }
  if (mechanism == Mechanism::kRandomizedResponse) {
    return ComposeRandomizedResponse(n, d, epsilon);
  }
  return ComposeModifiedLaplace(n, epsilon, rng, mc_samples);
}

namespace {

template <typename Draw, typename Probability>
FrequencyHistogram RunFrequencyTest(std::span<const OutputEvent> events,
                                    int64_t mc_samples, Draw draw,
                                    Probability probability) {
  if (mc_samples < kMinFrequencySamples) {
    throw InvalidParameterError("frequency test needs at least 10^5 samples");
  }
  if (events.empty()) throw InvalidParameterError("no events to test");
  FrequencyHistogram histogram;
  histogram.samples = mc_samples;
  histogram.cells.resize(events.size());
  for (size_t e = 0; e < events.size(); ++e) {
    histogram.cells[e].event = events[e].Label();
    histogram.cells[e].expected = probability(events[e]);
  }
  for (int64_t t = 0; t < mc_samples; ++t) {
    const auto value = draw();
    for (size_t e = 0; e < events.size(); ++e) {
      if (events[e].Contains(value)) ++histogram.cells[e].count;
    }
  }
  const double n = static_cast<double>(mc_samples);
  histogram.pass = true;
  for (FrequencyCell& cell : histogram.cells) {
    cell.frequency = cell.count / n;
    cell.standard_error =
        std::sqrt(std::max(0.0, cell.expected * (1.0 - cell.expected)) / n);
    const double deviation = std::abs(cell.frequency - cell.expected);
    cell.pass = cell.standard_error > 0.0
                    ? deviation <= 4.0 * cell.standard_error
                    : deviation <= 1e-12;
    if (!cell.pass && histogram.pass) {
      histogram.pass = false;
      histogram.failure = "event " + cell.event + ": frequency " +
                          FormatNumber(cell.frequency) + " vs expected " +
                          FormatNumber(cell.expected);
    }
  }
  return histogram;
}

}  // namespace

FrequencyHistogram EmpiricalFrequencyTest(const ContinuousRating& x,
                                          PrivacyBudget epsilon,
                                          std::span<const OutputEvent> events,
                                          int64_t mc_samples,
                                          RandomStream& rng) {
  return RunFrequencyTest(
      events, mc_samples,
      [&] { return PerturbModifiedLaplace(x, epsilon, rng); },
      [&](const OutputEvent& event) {
        return ModifiedLaplaceEventProbability(x, epsilon, event);
      });
}

FrequencyHistogram EmpiricalFrequencyTest(int x, int d, PrivacyBudget epsilon,
                                          std::span<const OutputEvent> events,
                                          int64_t mc_samples,
                                          RandomStream& rng) {
  ValidateCategory(x, d);
  return RunFrequencyTest(
      events, mc_samples,
      [&] { return PerturbRandomizedResponse(x, d, epsilon, rng); },
      [&](const OutputEvent& event) {
        return RandomizedResponseEventProbability(x, d, epsilon, event);
      });
}

void WriteRatioReports(std::ostream& out,
                       std::span<const RatioReport> reports) {
  out << "case,x,y,event,ratio,bound,method,pass\n";
  for (const RatioReport& r : reports) {
    out << r.case_label << ',' << r.x << ',' << r.y << ',' << r.event << ','
        << FormatNumber(r.ratio) << ',' << FormatNumber(r.bound) << ','
        << MethodName(r.method) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

}  // namespace ldp
