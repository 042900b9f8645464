// Copyright 2026 The nlq Authors.
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

// Precision / recall / F1 per DBType over (value, db_type) pairs, with a
// support-weighted average row. Counts are kept as exact fractions.

#ifndef NLQ_EVALKIT_H_
#define NLQ_EVALKIT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlq/enrich.h"
#include "nlq/logic.h"

namespace nlq {

class Rational {
 public:
  Rational() = default;
  Rational(int64_t num, int64_t den = 1);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  double ToDouble() const { return double(num_) / double(den_); }
  // "3/4", or "1" for whole numbers.
  std::string ToString() const;
  // Rounded half-up to `digits` decimals, e.g. "0.67".
  std::string Fixed(int digits) const;

  friend Rational operator+(const Rational &a, const Rational &b);
  friend Rational operator*(const Rational &a, const Rational &b);
  friend Rational operator/(const Rational &a, const Rational &b);
  friend bool operator==(const Rational &a, const Rational &b) = default;
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

 private:
  int64_t num_ = 0;
  int64_t den_ = 1;
};

struct GoldPair {
  Value value;
  std::string db_type;
  friend auto operator<=>(const GoldPair &, const GoldPair &) = default;
};

struct GoldAnnotation {
  std::string text;
  std::set<GoldPair> expected;
  // Optional expected query in rule text, for compilation regression.
  std::optional<std::string> query;
};

struct TypeMetrics {
  std::string db_type;
  size_t tp = 0, fp = 0, fn = 0;
  size_t support = 0;  // gold pairs of this type
  Rational precision, recall, f1;
};

struct Metrics {
  std::vector<TypeMetrics> per_type;  // sorted by db_type
  TypeMetrics weighted;               // db_type "weighted avg"
  size_t queries = 0;
  size_t failed_queries = 0;  // pipeline threw; predictions counted as empty
};

// Predicted pairs for one query. A thrown nlq::Error counts as a failed
// query with no predictions.
using Pipeline = std::function<std::set<GoldPair>(const GoldAnnotation &)>;

// Throws kEmptyCorpus on an empty corpus.
Metrics EvaluateCorpus(const std::vector<GoldAnnotation> &corpus,
                       const Pipeline &pipeline);

struct Observation {
  std::set<GoldPair> gold;
  std::set<GoldPair> predicted;
};

// The fold behind EvaluateCorpus. Throws kEmptyCorpus when empty.
Metrics ComputeMetrics(const std::vector<Observation> &observations);

// Every (value, db_type) of every tuple. With `one_value_per_entity` only
// the smallest value of each entity contributes.
std::set<GoldPair> PredictedPairs(const std::vector<EnrichedEntity> &entities,
                                  bool one_value_per_entity = false);

// JSON lines: {"text": ..., "expected": [{"value": ..., "dbtype": ...}],
// "query": ...}. Value strings use the facts-file constant syntax (:bob,
// "\"Night Shift\"", 30, 2015-03-05, bare ids); strings that are not a
// constant, such as unquoted multi-word titles, are text.
// Throws kParse naming the line.
std::vector<GoldAnnotation> ParseGoldCorpus(std::string_view jsonl);

// Aligned table: db_type, precision, recall, f1-score, support.
std::string RenderMetricsTable(const Metrics &metrics);
std::string MetricsJson(const Metrics &metrics);

}  // namespace nlq

#endif  // NLQ_EVALKIT_H_
