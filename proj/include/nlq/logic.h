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

// Logical database layer: typed constants, atoms, conjunctive queries in
// rule form, a flat-file fact store and exact query evaluation.
//
// A query is a set of rules sharing one head. An answer is a constant tuple t
// such that, for some rule, a mapping from variables to constants embeds every
// body atom in the store, makes every comparison true and maps the head onto
// t. The answer set of a query is the union over its rules.

#ifndef NLQ_LOGIC_H_
#define NLQ_LOGIC_H_

#include <compare>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nlq {

// Entity identifiers keep their spelling verbatim, including a leading ':'
// when present (":bob" and "Anatomy" are both entity ids).
struct EntityId {
  std::string name;
  friend auto operator<=>(const EntityId &, const EntityId &) = default;
};

struct Text {
  std::string value;
  friend auto operator<=>(const Text &, const Text &) = default;
};

struct Number {
  double value = 0;
  friend auto operator<=>(const Number &, const Number &) = default;
};

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
  friend auto operator<=>(const Date &, const Date &) = default;
};

using Value = std::variant<EntityId, Text, Number, Date>;

enum class ValueType { kEntity, kText, kNumber, kDate };

inline ValueType TypeOf(const Value &v) {
  return static_cast<ValueType>(v.index());
}
const char *ValueTypeName(ValueType type);

// Facts-file / rule-text spelling: :bob, "quoted \"text\"", 30, 2018-05-01.
std::string Render(const Value &v);
// Human-facing spelling: text without quotes.
std::string Display(const Value &v);

// Parses one constant using the facts-file typing rules: leading ':' is an
// entity id, double quotes delimit text, decimals are numbers, yyyy-mm-dd is
// a date, and a bare identifier is an entity id. Returns nullopt otherwise.
std::optional<Value> ParseConstant(std::string_view token);
std::optional<Date> ParseIsoDate(std::string_view s);
bool IsValidDate(const Date &d);
// Shortest decimal spelling that parses back to the same double.
std::string FormatNumber(double value);

struct Variable {
  std::string name;
  friend auto operator<=>(const Variable &, const Variable &) = default;
};

using Term = std::variant<Variable, Value>;

inline bool IsVariable(const Term &t) {
  return std::holds_alternative<Variable>(t);
}

enum class CompOp { kEq, kLt, kLe, kGt, kGe };

const char *CompOpSymbol(CompOp op);
std::optional<CompOp> ParseCompOp(std::string_view symbol);

// Numbers compare numerically, dates chronologically and texts by code point.
// Entity ids support only equality. Any cross-type comparison is false.
bool Compare(const Value &left, CompOp op, const Value &right);

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  friend auto operator<=>(const Atom &, const Atom &) = default;
};

struct ComparisonAtom {
  Variable left;
  CompOp op = CompOp::kEq;
  Value right;
  friend auto operator<=>(const ComparisonAtom &,
                          const ComparisonAtom &) = default;
};

struct Fact {
  std::string predicate;
  std::vector<Value> args;
  friend auto operator<=>(const Fact &, const Fact &) = default;
};

struct QueryRule {
  Atom head;
  std::vector<Atom> body;
  std::vector<ComparisonAtom> comparisons;
  friend bool operator==(const QueryRule &, const QueryRule &) = default;
};

struct DBQuery {
  std::vector<QueryRule> rules;
  friend bool operator==(const DBQuery &, const DBQuery &) = default;
};

// Throws kContract unless every head and comparison variable occurs in some
// body atom.
void CheckSafe(const QueryRule &rule);
void CheckSafe(const DBQuery &query);

std::string ToString(const Term &t);
std::string ToString(const Atom &a);
std::string ToString(const ComparisonAtom &c);
std::string ToString(const Fact &f);
// "q(x) :- Book(x), hasTitle(x, y1), (y1 = \"...\")." on one line.
std::string ToString(const QueryRule &rule);

// Parses rule text as produced by ToString, one rule per line ("<-" and ":-"
// are both accepted). Bare identifiers in atom arguments are variables; the
// right side of a comparison is always a constant.
DBQuery ParseRules(std::string_view text);

// Equal up to a consistent renaming of variables and reordering of body atoms
// and comparisons; rules are compared as sets.
bool AlphaEquivalent(const QueryRule &a, const QueryRule &b);
bool AlphaEquivalent(const DBQuery &a, const DBQuery &b);

struct PredicateSchema {
  size_t arity = 0;
  // Types observed at each argument position.
  std::vector<std::set<ValueType>> types;
};

// A set of facts plus the schema inferred from them. Arity is limited to one
// or two arguments.
class FactStore {
 public:
  static constexpr size_t kMaxArity = 2;

  // Returns false when the fact is already present. Throws kContract on an
  // arity conflict or an unsupported arity.
  bool Add(Fact fact);

  const std::set<Fact> &facts() const { return facts_; }
  const std::map<std::string, PredicateSchema> &schema() const {
    return schema_;
  }
  const std::vector<Fact> &FactsFor(const std::string &predicate) const;
  bool Contains(const Fact &fact) const { return facts_.count(fact) > 0; }
  bool HasPredicate(const std::string &predicate) const {
    return schema_.count(predicate) > 0;
  }
  size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

 private:
  std::set<Fact> facts_;
  std::map<std::string, PredicateSchema> schema_;
  std::map<std::string, std::vector<Fact>> by_predicate_;
};

// Parses "Pred(arg, ...)" lines. Blank lines and '#' comments are skipped.
// Throws kParse naming the offending line.
FactStore ParseFacts(std::string_view source);
FactStore LoadFacts(std::istream &in);
FactStore LoadFactsFile(const std::string &path);
Fact ParseFact(std::string_view line);

using Tuple = std::vector<Value>;

// Answer set of the query. Body atoms are joined by backtracking in the given
// order; comparisons are checked as soon as their variable is bound.
std::set<Tuple> Evaluate(const DBQuery &query, const FactStore &store);
std::set<Tuple> Evaluate(const QueryRule &rule, const FactStore &store);

}  // namespace nlq

#endif  // NLQ_LOGIC_H_
