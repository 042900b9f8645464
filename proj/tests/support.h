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


// Helpers shared by the unit tests.

#ifndef NLQ_TESTS_SUPPORT_H_
#define NLQ_TESTS_SUPPORT_H_

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "nlq/logic.h"
#include "nlq/text.h"

namespace nlq::testing {

inline const std::string kFigure2 = std::string(NLQ_TEST_DATA) + "/figure2";
inline const std::string kDemo = NLQ_DEMO_DATA;

inline const std::string kNlqRun =
    "Find books with title 'Principles of Medicine' co-authored by Bob and "
    "Alice and whose price is less than 30 dollars";

// DBQ_run as printed in the running example.
inline const std::string kDbqRun =
    "q(x) :- Book(x), hasTitle(x, y1), writtenBy(x, y2), Person(y2), "
    "writtenBy(x, y3), Person(y3), hasPrice(x, y4), "
    "(y1 = \"Principles of Medicine\"), (y2 = :bob), (y3 = :alice), "
    "(y4 < 30).";

// Independent of nlq::Compare: typed comparison spelled out per kind.
inline bool OracleCompare(const Value &l, CompOp op, const Value &r) {
  if (l.index() != r.index()) return false;
  auto order = [&](auto a, auto b) {
    switch (op) {
      case CompOp::kEq: return a == b;
      case CompOp::kLt: return a < b;
      case CompOp::kLe: return a <= b;
      case CompOp::kGt: return a > b;
      case CompOp::kGe: return a >= b;
    }
    return false;
  };
  if (auto *a = std::get_if<Number>(&l)) return order(a->value, std::get<Number>(r).value);
  if (auto *a = std::get_if<Text>(&l)) {
    return order(text::Decode(a->value), text::Decode(std::get<Text>(r).value));
  }
  if (auto *a = std::get_if<Date>(&l)) {
    const Date &b = std::get<Date>(r);
    return order(a->year * 10000 + a->month * 100 + a->day,
                 b.year * 10000 + b.month * 100 + b.day);
  }
  return op == CompOp::kEq && std::get<EntityId>(l) == std::get<EntityId>(r);
}

// Full enumeration: every assignment of every rule variable to every
// constant of the active domain.
inline std::set<Tuple> OracleEvaluate(const DBQuery &q, const FactStore &store) {
  std::set<Value> domain;
  for (const Fact &f : store.facts()) domain.insert(f.args.begin(), f.args.end());
  std::vector<Value> dom(domain.begin(), domain.end());
  std::set<Tuple> out;
  for (const QueryRule &rule : q.rules) {
    std::set<std::string> names;
    auto collect = [&](const Atom &a) {
      for (const Term &t : a.args) {
        if (auto *v = std::get_if<Variable>(&t)) names.insert(v->name);
      }
    };
    collect(rule.head);
    for (const Atom &a : rule.body) collect(a);
    std::vector<std::string> vars(names.begin(), names.end());
    std::map<std::string, Value> h;
    auto value_of = [&](const Term &t) -> Value {
      if (auto *v = std::get_if<Variable>(&t)) return h.at(v->name);
      return std::get<Value>(t);
    };
    std::function<void(size_t)> go = [&](size_t i) {
      if (i == vars.size()) {
        for (const Atom &a : rule.body) {
          Fact f{a.predicate, {}};
          for (const Term &t : a.args) f.args.push_back(value_of(t));
          if (!store.Contains(f)) return;
        }
        for (const ComparisonAtom &c : rule.comparisons) {
          if (!OracleCompare(h.at(c.left.name), c.op, c.right)) return;
        }
        Tuple t;
        for (const Term &term : rule.head.args) t.push_back(value_of(term));
        out.insert(t);
        return;
      }
      for (const Value &v : dom) {
        h[vars[i]] = v;
        go(i + 1);
      }
    };
    go(0);
  }
  return out;
}


struct RandomCase {
  FactStore store;
  DBQuery query;
};

// Store of up to `max_facts` facts over six entities and three numbers,
// and a query of one or two rules with up to `max_atoms` body atoms over
// the variables x, y, z, w.
inline RandomCase MakeRandomCase(std::mt19937 &rng, size_t max_facts = 200,
                                 size_t max_atoms = 8) {
  auto pick = [&](size_t n) { return size_t(rng() % n); };
  std::vector<Value> entities, numbers;
  for (int i = 0; i < 6; ++i) entities.push_back(EntityId{":e" + std::to_string(i)});
  for (int i = 1; i <= 3; ++i) numbers.push_back(Number{double(i)});
  struct Pred {
    const char *name;
    size_t arity;
    bool numeric;  // second argument is a number
  };
  const std::vector<Pred> preds = {
      {"P", 1, false}, {"Q", 1, false}, {"R", 2, false}, {"S", 2, false}, {"V", 2, true}};
  RandomCase c;
  const size_t n = pick(max_facts + 1);
  for (size_t i = 0; i < n; ++i) {
    const Pred &p = preds[pick(preds.size())];
    Fact f{p.name, {entities[pick(entities.size())]}};
    if (p.arity == 2) {
      f.args.push_back(p.numeric ? numbers[pick(numbers.size())]
                                 : entities[pick(entities.size())]);
    }
    c.store.Add(f);
  }
  const std::vector<std::string> vars = {"x", "y", "z", "w"};
  const size_t rules = 1 + pick(2);
  for (size_t r = 0; r < rules; ++r) {
    QueryRule rule;
    rule.head = Atom{"q", {Variable{"x"}}};
    const size_t atoms = 1 + pick(max_atoms);
    std::set<std::string> entity_vars, number_vars;
    for (size_t a = 0; a < atoms; ++a) {
      const Pred &p = preds[pick(preds.size())];
      Atom atom{p.name, {}};
      auto term = [&](bool numeric, bool force_x) -> Term {
        if (force_x) return Variable{"x"};
        if (pick(5) == 0) {
          return numeric ? numbers[pick(numbers.size())] : entities[pick(entities.size())];
        }
        return Variable{vars[pick(vars.size())]};
      };
      atom.args.push_back(term(false, a == 0));
      if (p.arity == 2) atom.args.push_back(term(p.numeric, false));
      for (size_t i = 0; i < atom.args.size(); ++i) {
        if (auto *v = std::get_if<Variable>(&atom.args[i])) {
          (i == 1 && p.numeric ? number_vars : entity_vars).insert(v->name);
        }
      }
      rule.body.push_back(atom);
    }
    const CompOp ops[] = {CompOp::kEq, CompOp::kLt, CompOp::kLe, CompOp::kGt, CompOp::kGe};
    const size_t comps = pick(3);
    for (size_t k = 0; k < comps; ++k) {
      std::vector<std::string> bound(entity_vars.begin(), entity_vars.end());
      bound.insert(bound.end(), number_vars.begin(), number_vars.end());
      const std::string &v = bound[pick(bound.size())];
      Value right = pick(2) ? numbers[pick(numbers.size())] : entities[pick(entities.size())];
      rule.comparisons.push_back({Variable{v}, ops[pick(5)], right});
    }
    c.query.rules.push_back(rule);
  }
  return c;
}

inline EntityId Id(const std::string &name) { return EntityId{name}; }

}  // namespace nlq::testing

#endif  // NLQ_TESTS_SUPPORT_H_
