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

#include "nlq/evalkit.h"

#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "nlq/error.h"
#include "nlq/text.h"

namespace nlq {

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw Error(ErrorCode::kContract, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::Fixed(int digits) const {
  int64_t scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // round half up on |value|
  const bool negative = num_ < 0;
  const int64_t n = negative ? -num_ : num_;
  const int64_t scaled = (n * scale * 2 + den_) / (den_ * 2);
  std::string whole = std::to_string(scaled / scale);
  std::string frac = std::to_string(scaled % scale);
  frac.insert(0, size_t(digits) - frac.size(), '0');
  std::string out = (negative && scaled != 0 ? "-" : "") + whole;
  if (digits > 0) out += "." + frac;
  return out;
}

Rational operator+(const Rational &a, const Rational &b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational &a, const Rational &b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational &a, const Rational &b) {
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

namespace {

Rational Ratio(size_t num, size_t den) {
  if (den == 0) return Rational(0);
  return Rational(int64_t(num), int64_t(den));
}

void Finish(TypeMetrics *m) {
  m->precision = Ratio(m->tp, m->tp + m->fp);
  m->recall = Ratio(m->tp, m->tp + m->fn);
  Rational sum = m->precision + m->recall;
  m->f1 = sum == Rational(0) ? Rational(0)
                             : Rational(2) * m->precision * m->recall / sum;
}

Value GoldValue(const nlohmann::json &j) {
  if (j.is_number()) return Number{j.get<double>()};
  if (!j.is_string()) {
    throw Error(ErrorCode::kParse, "value must be a string or a number");
  }
  std::string s = j.get<std::string>();
  if (auto v = ParseConstant(s)) return *v;
  return Text{s};
}

}  // namespace

Metrics ComputeMetrics(const std::vector<Observation> &observations) {
  if (observations.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "empty corpus: metrics are undefined");
  }
  std::map<std::string, TypeMetrics> by_type;
  for (const Observation &o : observations) {
    for (const GoldPair &g : o.gold) {
      TypeMetrics &m = by_type[g.db_type];
      ++m.support;
      if (o.predicted.count(g)) {
        ++m.tp;
      } else {
        ++m.fn;
      }
    }
    for (const GoldPair &p : o.predicted) {
      if (!o.gold.count(p)) ++by_type[p.db_type].fp;
    }
  }
  Metrics out;
  out.queries = observations.size();
  out.weighted.db_type = "weighted avg";
  Rational wp, wr, wf;
  size_t total = 0;
  for (auto &[type, m] : by_type) {
    m.db_type = type;
    Finish(&m);
    out.per_type.push_back(m);
    total += m.support;
    wp = wp + Rational(int64_t(m.support)) * m.precision;
    wr = wr + Rational(int64_t(m.support)) * m.recall;
    wf = wf + Rational(int64_t(m.support)) * m.f1;
    out.weighted.tp += m.tp;
    out.weighted.fp += m.fp;
    out.weighted.fn += m.fn;
  }
  out.weighted.support = total;
  if (total > 0) {
    const Rational t(int64_t(total), 1);
    out.weighted.precision = wp / t;
    out.weighted.recall = wr / t;
    out.weighted.f1 = wf / t;
  }
  return out;
}

Metrics EvaluateCorpus(const std::vector<GoldAnnotation> &corpus,
                       const Pipeline &pipeline) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "empty corpus: metrics are undefined");
  }
  std::vector<Observation> observations;
  size_t failed = 0;
  for (const GoldAnnotation &g : corpus) {
    Observation o;
    o.gold = g.expected;
    try {
      o.predicted = pipeline(g);
    } catch (const Error &) {
      ++failed;
    }
    observations.push_back(std::move(o));
  }
  Metrics m = ComputeMetrics(observations);
  m.failed_queries = failed;
  return m;
}

std::set<GoldPair> PredictedPairs(const std::vector<EnrichedEntity> &entities,
                                  bool one_value_per_entity) {
  std::set<GoldPair> out;
  for (const EnrichedEntity &e : entities) {
    if (e.tuples.empty()) continue;
    const Value &first = e.tuples.begin()->value;
    for (const EnrichedTuple &t : e.tuples) {
      if (one_value_per_entity && !(t.value == first)) continue;
      out.insert({t.value, t.db_type});
    }
  }
  return out;
}

std::vector<GoldAnnotation> ParseGoldCorpus(std::string_view jsonl) {
  std::vector<GoldAnnotation> corpus;
  size_t line_no = 0;
  for (const std::string &raw : text::Split(jsonl, '\n')) {
    ++line_no;
    std::string line = text::Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string &why) {
      return Error(ErrorCode::kParse,
                   "corpus line " + std::to_string(line_no) + ": " + why);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw fail(e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
      throw fail("expected an object with a \"text\" string");
    }
    GoldAnnotation g;
    g.text = j["text"].get<std::string>();
    if (j.contains("expected")) {
      if (!j["expected"].is_array()) throw fail("\"expected\" must be an array");
      for (const auto &p : j["expected"]) {
        if (!p.is_object() || !p.contains("value") || !p.contains("dbtype") ||
            !p["dbtype"].is_string()) {
          throw fail("expected items need \"value\" and \"dbtype\"");
        }
        try {
          GoldPair pair{GoldValue(p["value"]), p["dbtype"].get<std::string>()};
          if (!g.expected.insert(pair).second) throw fail("duplicate pair");
        } catch (const Error &e) {
          if (e.code() == ErrorCode::kParse &&
              std::string(e.what()).rfind("corpus line", 0) == 0) {
            throw;
          }
          throw fail(e.what());
        }
      }
    }
    if (j.contains("query")) {
      if (!j["query"].is_string()) throw fail("\"query\" must be a string");
      g.query = j["query"].get<std::string>();
    }
    corpus.push_back(std::move(g));
  }
  return corpus;
}

std::string RenderMetricsTable(const Metrics &metrics) {
  size_t width = std::string("weighted avg").size();
  for (const TypeMetrics &m : metrics.per_type) {
    width = std::max(width, m.db_type.size());
  }
  std::ostringstream out;
  auto pad = [](const std::string &s, size_t w, bool left) {
    std::string fill(w > s.size() ? w - s.size() : 0, ' ');
    return left ? s + fill : fill + s;
  };
  out << pad("", width, true) << "  " << pad("precision", 9, false) << "  "
      << pad("recall", 9, false) << "  " << pad("f1-score", 9, false) << "  "
      << pad("support", 9, false) << "\n\n";
  auto row = [&](const TypeMetrics &m) {
    out << pad(m.db_type, width, true) << "  "
        << pad(m.precision.Fixed(2), 9, false) << "  "
        << pad(m.recall.Fixed(2), 9, false) << "  "
        << pad(m.f1.Fixed(2), 9, false) << "  "
        << pad(std::to_string(m.support), 9, false) << "\n";
  };
  for (const TypeMetrics &m : metrics.per_type) row(m);
  out << "\n";
  row(metrics.weighted);
  return out.str();
}

std::string MetricsJson(const Metrics &metrics) {
  auto record = [](const TypeMetrics &m) {
    nlohmann::ordered_json j;
    j["db_type"] = m.db_type;
    j["precision"] = m.precision.ToDouble();
    j["recall"] = m.recall.ToDouble();
    j["f1"] = m.f1.ToDouble();
    j["support"] = m.support;
    j["exact"] = {{"precision", m.precision.ToString()},
                  {"recall", m.recall.ToString()},
                  {"f1", m.f1.ToString()}};
    j["tp"] = m.tp;
    j["fp"] = m.fp;
    j["fn"] = m.fn;
    return j;
  };
  nlohmann::ordered_json j;
  j["queries"] = metrics.queries;
  j["failed_queries"] = metrics.failed_queries;
  j["per_type"] = nlohmann::ordered_json::array();
  for (const TypeMetrics &m : metrics.per_type) j["per_type"].push_back(record(m));
  j["weighted"] = record(metrics.weighted);
  return j.dump(2) + "\n";
}

}  // namespace nlq
