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


#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nlq/error.h"
#include "nlq/logic.h"
#include "support.h"

using namespace nlq;
using nlq::testing::Id;

namespace {

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::kIo;
}

std::string MessageOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.what();
  }
  return "";
}

DBQuery Q(const std::string &text) { return ParseRules(text); }

}  // namespace

TEST_CASE("constants are typed by spelling") {
  CHECK(ParseConstant(":bob") == Value(Id(":bob")));
  CHECK(ParseConstant("Anatomy") == Value(Id("Anatomy")));
  CHECK(ParseConstant("\"Principles of Medicine\"") == Value(Text{"Principles of Medicine"}));
  CHECK(ParseConstant("\"say \\\"hi\\\" \\\\\"") == Value(Text{"say \"hi\" \\"}));
  CHECK(ParseConstant("30") == Value(Number{30}));
  CHECK(ParseConstant("-2.5") == Value(Number{-2.5}));
  CHECK(ParseConstant("2018-05-01") == Value(Date{2018, 5, 1}));
  CHECK_FALSE(ParseConstant("2018-02-30").has_value());
  CHECK_FALSE(ParseConstant("two words").has_value());
  CHECK_FALSE(ParseConstant("").has_value());
  for (const char *s : {":bob", "\"a \\\"b\\\"\"", "30", "18.5", "2012-03-05"}) {
    CHECK(Render(*ParseConstant(s)) == s);
  }
}

TEST_CASE("load_facts") {
  SUBCASE("two facts") {
    FactStore s = ParseFacts("Book(Anatomy)\nwrittenBy(Anatomy,:bob)");
    CHECK(s.size() == 2);
    CHECK(s.Contains(Fact{"writtenBy", {Id("Anatomy"), Id(":bob")}}));
    CHECK(s.schema().at("writtenBy").arity == 2);
  }
  SUBCASE("empty stream") { CHECK(ParseFacts("").empty()); }
  SUBCASE("comments, blanks and duplicates") {
    FactStore s = ParseFacts("# header\n\nBook(:b1)\n  Book(:b1)  \n# x\n");
    CHECK(s.size() == 1);
  }
  SUBCASE("arity conflict names line 2") {
    auto load = [] { ParseFacts("Book(x,y)\nBook(z)"); };
    CHECK(CodeOf(load) == ErrorCode::kParse);
    CHECK(MessageOf(load).find("line 2") != std::string::npos);
  }
  SUBCASE("malformed lines") {
    for (const char *bad : {"Book(:b1", "Book:b1)", "(x)", "Book()", "Book(a,b,c)",
                            "Book(two words)", "hasTitle(:b1, \"open)"}) {
      CAPTURE(bad);
      CHECK(CodeOf([&] { ParseFacts(std::string("Book(:b0)\n") + bad); }) ==
            ErrorCode::kParse);
      CHECK(MessageOf([&] { ParseFacts(std::string("Book(:b0)\n") + bad); })
                .find("line 2") != std::string::npos);
    }
  }
  SUBCASE("quoted commas and escapes") {
    FactStore s = ParseFacts("hasTitle(:b1, \"War, and \\\"Peace\\\"\")");
    CHECK(s.Contains(Fact{"hasTitle", {Id(":b1"), Text{"War, and \"Peace\""}}}));
  }
  SUBCASE("missing file") {
    CHECK(CodeOf([] { LoadFactsFile("/nonexistent/facts.txt"); }) == ErrorCode::kIo);
  }
}

TEST_CASE("compare") {
  CHECK(Compare(Number{25}, CompOp::kLt, Number{30}));
  CHECK(Compare(Text{"Principles of Medicine"}, CompOp::kEq, Text{"Principles of Medicine"}));
  CHECK_FALSE(Compare(Id(":bob"), CompOp::kLt, Number{30}));
  CHECK(Compare(Date{2018, 5, 1}, CompOp::kGt, Date{2017, 12, 31}));
  CHECK(Compare(Text{"Z"}, CompOp::kLt, Text{"a"}));
  CHECK(Compare(Text{"z"}, CompOp::kLt, Text{"\xC3\xA9"}));  // é after z
  CHECK(Compare(Id(":bob"), CompOp::kEq, Id(":bob")));
  CHECK_FALSE(Compare(Id(":alice"), CompOp::kLt, Id(":bob")));
  CHECK_FALSE(Compare(Number{1}, CompOp::kEq, Text{"1"}));
  CHECK(Compare(Number{30}, CompOp::kGe, Number{30}));
  CHECK_FALSE(Compare(Number{30}, CompOp::kGt, Number{30}));
}

TEST_CASE("evaluate: single atom and union") {
  FactStore s = ParseFacts("Book(Anatomy)\nPerson(:bob)");
  CHECK(Evaluate(Q("q(x) :- Book(x)."), s) == std::set<Tuple>{{Id("Anatomy")}});

  FactStore docs = ParseFacts("writtenBy(d1,:bob)\neditedBy(d2,:bob)");
  DBQuery both = Q("q(x) :- writtenBy(x, y), (y = :bob).\nq(x) :- editedBy(x, y), (y = :bob).");
  CHECK(Evaluate(both, docs) == std::set<Tuple>{{Id("d1")}, {Id("d2")}});
}

TEST_CASE("evaluate: DBQ_run over a 12-fact store agrees with enumeration") {
  FactStore s = ParseFacts(
      "Book(:b1)\nhasTitle(:b1, \"Principles of Medicine\")\nwrittenBy(:b1, :bob)\n"
      "writtenBy(:b1, :alice)\nhasPrice(:b1, 25)\n"
      "Book(:b2)\nhasTitle(:b2, \"Principles of Medicine\")\nwrittenBy(:b2, :bob)\n"
      "hasPrice(:b2, 45)\n"
      "Person(:bob)\nPerson(:alice)\nwrittenBy(:b2, :alice)\n");
  REQUIRE(s.size() == 12);
  DBQuery q = Q(nlq::testing::kDbqRun);
  const std::set<Tuple> oracle = nlq::testing::OracleEvaluate(q, s);
  CHECK(oracle == std::set<Tuple>{{Id(":b1")}});
  CHECK(Evaluate(q, s) == oracle);
}

TEST_CASE("evaluate rejects unsafe queries") {
  FactStore s = ParseFacts("Book(:b1)");
  CHECK(CodeOf([&] { Evaluate(Q("q(x) :- Book(y)."), s); }) == ErrorCode::kContract);
  CHECK(CodeOf([&] { Evaluate(Q("q(x) :- Book(x), (z < 3)."), s); }) == ErrorCode::kContract);
  CHECK(CodeOf([&] { Evaluate(DBQuery{}, s); }) == ErrorCode::kContract);
  DBQuery heads = Q("q(x) :- Book(x).\nq(y) :- Book(y).");
  CHECK(CodeOf([&] { Evaluate(heads, s); }) == ErrorCode::kContract);
}

TEST_CASE("rule text round-trips and alpha-equivalence") {
  const DBQuery q = Q(nlq::testing::kDbqRun);
  REQUIRE(q.rules.size() == 1);
  CHECK(q.rules[0].body.size() == 7);
  CHECK(q.rules[0].comparisons.size() == 4);
  CHECK(ParseRules(ToString(q.rules[0])) == q);
  CHECK(ParseRules("q(x) <- Book(x).") == Q("q(x) :- Book(x)."));

  CHECK(AlphaEquivalent(Q("q(x) :- R(x, y), P(y), (y = :a)."),
                        Q("q(x) :- P(v), R(x, v), (v = :a).")));
  CHECK_FALSE(AlphaEquivalent(Q("q(x) :- R(x, y), P(y)."), Q("q(x) :- R(x, y), P(z).")));
  CHECK_FALSE(AlphaEquivalent(Q("q(x) :- R(x, y), R(x, z)."), Q("q(x) :- R(x, y).")));
  CHECK_FALSE(AlphaEquivalent(Q("q(x) :- R(x, y), (y < 3)."), Q("q(x) :- R(x, y), (y <= 3).")));
  CHECK(AlphaEquivalent(Q("q(x) :- P(x).\nq(x) :- R(x, y)."), Q("q(x) :- R(x, z).\nq(x) :- P(x).")));
  CHECK_FALSE(AlphaEquivalent(Q("q(x) :- P(x).\nq(x) :- R(x, y)."), Q("q(x) :- P(x).")));
  CHECK_FALSE(AlphaEquivalent(Q("q(x) :- R(x, y)."), Q("q(y) :- R(x, y).")));
}

TEST_CASE("evaluate matches the enumeration oracle on random cases") {
  std::mt19937 rng(7);
  for (int i = 0; i < 60; ++i) {
    nlq::testing::RandomCase c = nlq::testing::MakeRandomCase(rng, 60, 5);
    CAPTURE(i);
    CHECK(Evaluate(c.query, c.store) == nlq::testing::OracleEvaluate(c.query, c.store));
  }
}

TEST_CASE("union law, monotonicity and body-order independence") {
  std::mt19937 rng(11);
  for (int i = 0; i < 80; ++i) {
    nlq::testing::RandomCase c = nlq::testing::MakeRandomCase(rng, 80, 5);
    CAPTURE(i);
    std::set<Tuple> united;
    for (const QueryRule &r : c.query.rules) {
      std::set<Tuple> one = Evaluate(DBQuery{{r}}, c.store);
      united.insert(one.begin(), one.end());
    }
    const std::set<Tuple> all = Evaluate(c.query, c.store);
    CHECK(all == united);

    FactStore bigger = c.store;
    nlq::testing::RandomCase extra = nlq::testing::MakeRandomCase(rng, 40, 1);
    for (const Fact &f : extra.store.facts()) bigger.Add(f);
    const std::set<Tuple> more = Evaluate(c.query, bigger);
    CHECK(std::includes(more.begin(), more.end(), all.begin(), all.end()));

    DBQuery shuffled = c.query;
    for (QueryRule &r : shuffled.rules) {
      std::shuffle(r.body.begin(), r.body.end(), rng);
      std::shuffle(r.comparisons.begin(), r.comparisons.end(), rng);
    }
    CHECK(Evaluate(shuffled, c.store) == all);
  }
}
