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


// One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nlq/enrich.h"
#include "nlq/error.h"
#include "nlq/evalkit.h"
#include "nlq/logic.h"
#include "nlq/workspace.h"
#include "support.h"
#include "synthetic.h"

using namespace nlq;
using nlq::testing::Id;

namespace {

using Clock = std::chrono::steady_clock;

double Millis(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

EnrichedTuple T(Value v, std::string db, std::string lex, CompOp op = CompOp::kEq) {
  return EnrichedTuple{std::move(v), std::move(db), std::move(lex), op};
}

std::vector<std::set<EnrichedTuple>> TupleSets(const std::vector<EnrichedEntity> &es) {
  std::vector<std::set<EnrichedTuple>> out;
  for (const EnrichedEntity &e : es) out.push_back(e.tuples);
  return out;
}

const Value kTitle = Text{"Principles of Medicine"};

Workspace Figure2() { return Workspace::Load(nlq::testing::kFigure2 + "/workspace.json"); }

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome Fidelity() {
  Workspace ws = Figure2();
  const DBQuery gold = ParseRules(nlq::testing::kDbqRun);
  ws.Compile(nlq::testing::kNlqRun);  // warm-up
  auto start = Clock::now();
  DBQuery q = ws.Compile(nlq::testing::kNlqRun);
  const double ms = Millis(start);
  Outcome o;
  o.ok = q.rules.size() == 1 && AlphaEquivalent(q, gold) && ms < 100;
  std::ostringstream d;
  d << q.rules.size() << " rule(s), " << (AlphaEquivalent(q, gold) ? "" : "not ")
    << "alpha-equivalent, " << ms << " ms";
  o.detail = d.str();
  return o;
}

Outcome EnrichedEntities() {
  Analysis a = Figure2().Analyze(nlq::testing::kNlqRun);
  const std::set<EnrichedTuple> e0 = {T(Id("book"), "Book", "Context")};
  const std::vector<std::set<EnrichedTuple>> rest = {
      {T(kTitle, "Text", "Text"), T(kTitle, "Title", "Context")},
      {T(Id(":bob"), "Person", "Person"), T(Id(":bob"), "Author", "Context")},
      {T(Id(":alice"), "Person", "Person"), T(Id(":alice"), "Author", "Context")},
      {T(Number{30}, "Number", "Number", CompOp::kLt),
       T(Number{30}, "Price", "Context", CompOp::kLt)}};
  Outcome o;
  const bool solar = a.enrichment.solar.tuples == e0;
  const bool others = TupleSets(a.enrichment.entities) == rest;
  o.ok = solar && others;
  o.detail = std::string("E_e0 ") + (solar ? "match" : "differs") + ", E_e1..E_e4 " +
             (others ? "match" : "differ");
  return o;
}

Outcome OrMerge() {
  Workspace ws = Figure2();
  Outcome o;
  std::vector<std::string> notes;

  Analysis a = ws.Analyze("Find books with title 'Principles of Medicine' written by Bob or "
                          "Alice and whose price is less than 30 dollars");
  const std::vector<std::set<EnrichedTuple>> enew = {
      {T(kTitle, "Text", "Text"), T(kTitle, "Title", "Context")},
      {T(Id(":bob"), "Person", "Person"), T(Id(":bob"), "Author", "Context"),
       T(Id(":alice"), "Person", "Person"), T(Id(":alice"), "Author", "Context")},
      {T(Number{30}, "Number", "Number", CompOp::kLt),
       T(Number{30}, "Price", "Context", CompOp::kLt)}};
  if (TupleSets(a.enrichment.entities) != enew) notes.push_back("E_enew differs");
  const DBQuery two = ParseRules(
      "q(x) :- Book(x), hasTitle(x, y1), Person(y2), writtenBy(x, y2), hasPrice(x, y4), "
      "(y1 = \"Principles of Medicine\"), (y2 = :bob), (y4 < 30).\n"
      "q(x) :- Book(x), hasTitle(x, y1), Person(y3), writtenBy(x, y3), hasPrice(x, y4), "
      "(y1 = \"Principles of Medicine\"), (y3 = :alice), (y4 < 30).");
  if (a.query.rules.size() != 2 || !AlphaEquivalent(a.query, two)) {
    notes.push_back("or-variant query differs");
  }

  Analysis b = ws.Analyze("Find books edited or written by Bob");
  const std::vector<std::set<EnrichedTuple>> enew2 = {
      {T(Id(":bob"), "Person", "Person"), T(Id(":bob"), "Author", "Context"),
       T(Id(":bob"), "Editor", "Context")}};
  if (TupleSets(b.enrichment.entities) != enew2) notes.push_back("E_enew2 differs");
  const DBQuery we = ParseRules(
      "q(x) :- Book(x), Person(y2), writtenBy(x, y2), (y2 = :bob).\n"
      "q(x) :- Book(x), Person(y3), editedBy(x, y3), (y3 = :bob).");
  if (b.query.rules.size() != 2 || !AlphaEquivalent(b.query, we)) {
    notes.push_back("writtenBy/editedBy query differs");
  }

  o.ok = notes.empty();
  for (const std::string &n : notes) o.detail += (o.detail.empty() ? "" : "; ") + n;
  if (o.ok) o.detail = "E_enew, E_enew2 and both two-rule queries match";
  return o;
}

Outcome Widening() {
  Workspace demo = Workspace::Load(nlq::testing::kDemo);
  const DBQuery widened = demo.Compile("Find books written by Alice or Bob and Charlie");
  // Alice or (Bob and Charlie)
  const DBQuery f1 = ParseRules(
      "q(x) :- Book(x), writtenBy(x, a), Person(a), (a = :alice).\n"
      "q(x) :- Book(x), writtenBy(x, b), Person(b), writtenBy(x, c), Person(c), (b = :bob), "
      "(c = :charlie).");
  // (Alice or Bob) and Charlie
  const DBQuery f2 = ParseRules(
      "q(x) :- Book(x), writtenBy(x, a), Person(a), writtenBy(x, c), Person(c), (a = :alice), "
      "(c = :charlie).\n"
      "q(x) :- Book(x), writtenBy(x, b), Person(b), writtenBy(x, c), Person(c), (b = :bob), "
      "(c = :charlie).");
  std::mt19937 rng(20261014);
  const std::vector<std::string> people = {":alice", ":bob", ":charlie"};
  size_t violations = 0, nonempty = 0;
  for (int i = 0; i < 100; ++i) {
    FactStore store;
    const int books = 1 + int(rng() % 6);
    for (const std::string &p : people) {
      if (rng() % 4) store.Add(Fact{"Person", {Id(p)}});
    }
    for (int k = 0; k < books; ++k) {
      const Value book = Id(":w" + std::to_string(k));
      if (rng() % 5) store.Add(Fact{"Book", {book}});
      for (const std::string &p : people) {
        if (rng() % 2) store.Add(Fact{"writtenBy", {book, Id(p)}});
      }
    }
    const std::set<Tuple> all = Evaluate(widened, store);
    for (const DBQuery *f : {&f1, &f2}) {
      const std::set<Tuple> narrow = Evaluate(*f, store);
      if (!narrow.empty()) ++nonempty;
      for (const Tuple &t : narrow) violations += all.count(t) ? 0 : 1;
    }
  }
  Outcome o;
  o.ok = violations == 0 && widened.rules.size() == 3;
  o.detail = std::to_string(violations) + " violations over 100 stores (" +
             std::to_string(nonempty) + " non-empty narrow answers), " +
             std::to_string(widened.rules.size()) + " compiled rules";
  return o;
}

Outcome Oracle() {
  std::mt19937 rng(7);
  auto start = Clock::now();
  size_t mismatches = 0, errors = 0;
  for (int i = 0; i < 200; ++i) {
    nlq::testing::RandomCase c = nlq::testing::MakeRandomCase(rng);
    try {
      if (Evaluate(c.query, c.store) != nlq::testing::OracleEvaluate(c.query, c.store)) {
        ++mismatches;
      }
    } catch (const Error &) {
      ++errors;
    }
  }
  const double ms = Millis(start);
  Outcome o;
  o.ok = mismatches == 0 && errors == 0 && ms < 30000;
  std::ostringstream d;
  d << mismatches << " mismatches, " << errors << " errors over 200 cases, " << ms << " ms";
  o.detail = d.str();
  return o;
}

Outcome Fuzzy() {
  Workspace ws = Workspace::Load(nlq::testing::kDemo);
  size_t probes = 0, hits = 0;
  for (const auto &[lexeme, entities] : ws.index.lexemes()) {
    std::u32string cps = text::Decode(lexeme);
    if (cps.size() < 5) continue;
    for (size_t i = 0; i < cps.size(); ++i) {
      std::u32string typo = cps;
      typo[i] = cps[i] == U'q' ? U'z' : U'q';
      ++probes;
      for (const auto &m : ws.index.Lookup(text::Encode(typo), 0.5)) {
        if (m.lexeme == lexeme && entities.count(m.entity_name)) {
          ++hits;
          break;
        }
      }
    }
  }
  Outcome o;
  o.ok = probes > 0 && hits == probes;
  o.detail = std::to_string(hits) + "/" + std::to_string(probes) + " substituted probes retrieved";
  return o;
}

Outcome Methodology() {
  Metrics m = nlq::testing::EvaluateSynthetic(std::string(NLQ_TEST_DATA) + "/synthetic");
  const auto &expected = nlq::testing::SyntheticExpected();
  bool ok = m.queries == 10 && m.per_type.size() == expected.size();
  for (size_t i = 0; ok && i < expected.size(); ++i) {
    ok = nlq::testing::MatchesRow(m.per_type[i], expected[i]);
  }
  ok = ok && nlq::testing::MatchesRow(m.weighted, nlq::testing::SyntheticWeighted());
  Outcome o;
  o.ok = ok;
  o.detail = "weighted " + m.weighted.precision.ToString() + " / " +
             m.weighted.recall.ToString() + " / " + m.weighted.f1.ToString() + " (" +
             m.weighted.precision.Fixed(2) + " " + m.weighted.recall.Fixed(2) + " " +
             m.weighted.f1.Fixed(2) + ")";
  return o;
}

Outcome Regression() {
  Workspace ws = Workspace::Load(nlq::testing::kDemo);
  auto corpus = ParseGoldCorpus(ReadFile(ws.Resolve(ws.files.corpus)));
  CorpusReport r = EvaluateWorkspace(ws, corpus);
  Outcome o;
  o.ok = r.compiled_checked > 0 && 10 * r.compiled_matched >= 9 * r.compiled_checked;
  o.detail = std::to_string(r.compiled_matched) + "/" + std::to_string(r.compiled_checked) +
             " exact-match compilations";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
      {"running-example fidelity", Fidelity},
      {"enrichment fidelity", EnrichedEntities},
      {"or-merge fidelity", OrMerge},
      {"widening soundness", Widening},
      {"evaluator oracle equivalence", Oracle},
      {"fuzzy matching", Fuzzy},
      {"metrics methodology", Methodology},
      {"bundled corpus regression", Regression},
  };
  int failures = 0;
  for (const auto &[name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.ok ? 0 : 1;
    std::printf("%s  %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
