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

#ifndef LDP_DP_VERIFY_H_
#define LDP_DP_VERIFY_H_

// Certification of the per-entry and per-vector privacy guarantees.
//
// For a mechanism M and two inputs x, y the certificate checks
//
//   Pr(M(x) in S) <= bound * Pr(M(y) in S)
//
// over a family of output events S. Randomized response has a finite output
// alphabet, so singletons are enumerated exactly. The modified Laplace
// mechanism has a continuous output branch; there the events are the cells
// of a finite partition of the real line, the Missing atom, and unions of
// the Missing atom with each cell. The density ratio of two shifted Laplace
// laws is monotone between the two centers and constant outside them, so
// bin ratios bound the ratio of every interval event built from the bins.
// That is a certification over the chosen events, not a proof.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ldp/mechanisms.h"
#include "ldp/random.h"

namespace ldp {

// Half-open [lo, hi); either end may be infinite.
struct RealInterval {
  double lo;
  double hi;
};
struct MissingAtom {};
struct CategoryAtom {
  int value;
};
using EventAtom = std::variant<RealInterval, MissingAtom, CategoryAtom>;

// Finite union of pairwise disjoint atoms over one output coordinate.
class OutputEvent {
 public:
  static OutputEvent Interval(double lo, double hi);
  static OutputEvent Missing();
  static OutputEvent Category(int value);
  // Throws InvalidParameterError for empty, overlapping or malformed atoms.
  static OutputEvent Union(std::vector<EventAtom> atoms);

  const std::vector<EventAtom>& atoms() const { return atoms_; }
  bool ContainsMissing() const;
  bool HasRealPart() const;
  bool HasCategories() const;
  bool Contains(const PerturbedRating& value) const;
  bool Contains(int category) const;
  // Comma-free label such as "?|[0:0.25)" or "{3}".
  std::string Label() const;

 private:
  explicit OutputEvent(std::vector<EventAtom> atoms)
      : atoms_(std::move(atoms)) {}
  std::vector<EventAtom> atoms_;
};

// Cartesian product of per-coordinate events.
struct ProductEvent {
  std::vector<OutputEvent> coordinates;
  std::string Label() const;
};

enum class CertificationMethod { kExact, kMonteCarlo };
std::string_view MethodName(CertificationMethod method);

struct RatioReport {
  // "i".."ix" for modified Laplace entries, "i".."iii" for randomized
  // response entries, "composition" for vector checks.
  std::string case_label;
  std::string x;
  std::string y;
  std::string event;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  CertificationMethod method = CertificationMethod::kExact;
  int64_t mc_samples = 0;
  // Monte Carlo only: empirical ratio minus the Wilson-adjusted ratio.
  double slack = 0.0;
  // Closed-form ratio of the same event when one is available, else NaN.
  double reference_ratio = 0.0;
  bool pass = false;
};

// Absolute slack on exact ratio comparisons.
inline constexpr double kExactRatioTolerance = 1e-9;
// Two-sided 99.9% normal quantile used for Wilson intervals.
inline constexpr double kWilsonZ999 = 3.2905267314919255;
inline constexpr int64_t kMinCompositionSamples = 1'000'000;
inline constexpr int64_t kMinFrequencySamples = 100'000;

// Pr(M(x) in event) for the modified Laplace mechanism. Category atoms are
// rejected.
double ModifiedLaplaceEventProbability(const ContinuousRating& x,
                                       PrivacyBudget epsilon,
                                       const OutputEvent& event);
// Pr(M(x) in event) for randomized response. Only category atoms allowed.
double RandomizedResponseEventProbability(int x, int d, PrivacyBudget epsilon,
                                          const OutputEvent& event);

// Wilson score interval for a binomial proportion.
std::pair<double, double> WilsonInterval(int64_t successes, int64_t trials,
                                         double z);

// Exact report for one (x, y, S) triple of the modified Laplace mechanism,
// checked against e^eps.
RatioReport CompareModifiedLaplace(const ContinuousRating& x,
                                   const ContinuousRating& y,
                                   PrivacyBudget epsilon,
                                   const OutputEvent& event);

// Which of the nine (x, y, S) shapes a triple falls into.
std::string ModifiedLaplaceCase(const ContinuousRating& x,
                                const ContinuousRating& y,
                                const OutputEvent& event);

// Missing atom, (-inf, -half_width), `bins` equal cells over
// [-half_width, half_width), and [half_width, inf).
std::vector<OutputEvent> ModifiedLaplacePartition(int bins = 64,
                                                  double half_width = 8.0);
// Ordered pairs x != y over {-1, -0.5, 0, 0.5, 1, ?}.
std::vector<std::pair<ContinuousRating, ContinuousRating>>
ModifiedLaplaceGrid();
// Singletons {0}, ..., {d}.
std::vector<OutputEvent> RandomizedResponsePartition(int d);

// Checks every grid pair against every partition cell, the Missing atom
// joined with each real cell, and the whole real line. The partition must
// cover the real line and contain the Missing atom; the grid must contain
// (real, real), (real, ?) and (?, real) pairs. Reports are sorted by
// descending ratio, so the worst case comes first.
std::vector<RatioReport> CertifyModifiedLaplaceEntry(
    PrivacyBudget epsilon,
    std::span<const std::pair<ContinuousRating, ContinuousRating>> grid,
    std::span<const OutputEvent> partition);

// All (x, y, s) with x != y, enumerated exactly; worst case first.
std::vector<RatioReport> CertifyRandomizedResponseEntry(int d,
                                                        PrivacyBudget epsilon);

// Worst ratio over product events for length-n vectors, against e^{n eps}.
// Randomized response is enumerated exactly over all vector pairs and
// singleton product events. The modified Laplace mechanism is sampled
// (mc_samples draws per input vector over {-1, 1, ?}^n) and binned into
// products of {?}, (-inf,-2), [-2,0), [0,2), [2,inf); an event passes when
// the Wilson-adjusted ratio lower(p_x) / upper(p_y) is within the bound.
// Requires 1 <= n <= 3 and, for modified Laplace, mc_samples >= 10^6.
RatioReport CertifyVectorComposition(Mechanism mechanism, int n,
                                     PrivacyBudget epsilon, RandomStream& rng,
                                     int64_t mc_samples, int d = 1);

struct FrequencyCell {
  std::string event;
  double expected = 0.0;
  int64_t count = 0;
  double frequency = 0.0;
  double standard_error = 0.0;
  bool pass = false;
};

struct FrequencyHistogram {
  std::vector<FrequencyCell> cells;
  int64_t samples = 0;
  bool pass = false;
  // Names the first offending event when pass is false.
  std::string failure;
};

// Samples the mechanism mc_samples times and compares each event's
// frequency with its closed-form probability at 4 standard errors.
FrequencyHistogram EmpiricalFrequencyTest(const ContinuousRating& x,
                                          PrivacyBudget epsilon,
                                          std::span<const OutputEvent> events,
                                          int64_t mc_samples,
                                          RandomStream& rng);
FrequencyHistogram EmpiricalFrequencyTest(int x, int d, PrivacyBudget epsilon,
                                          std::span<const OutputEvent> events,
                                          int64_t mc_samples,
                                          RandomStream& rng);

// Writes `case,x,y,event,ratio,bound,method,pass` rows.
void WriteRatioReports(std::ostream& out,
                       std::span<const RatioReport> reports);

}  // namespace ldp

#endif  // LDP_DP_VERIFY_H_
