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

#include "nlq/logic.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "nlq/error.h"
#include "nlq/text.h"

namespace nlq {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kContract:
      return "contract violation";
    case ErrorCode::kConfig:
      return "configuration error";
    case ErrorCode::kUnknownDbType:
      return "unknown DBType";
    case ErrorCode::kUnknownOperator:
      return "unknown operator";
    case ErrorCode::kNoSolarClass:
      return "no solar-class";
    case ErrorCode::kIo:
      return "I/O error";
    case ErrorCode::kEmptyCorpus:
      return "empty corpus";
  }
  return "error";
}

const char *ValueTypeName(ValueType type) {
  switch (type) {
    case ValueType::kEntity:
      return "entity";
    case ValueType::kText:
      return "text";
    case ValueType::kNumber:
      return "number";
    case ValueType::kDate:
      return "date";
  }
  return "?";
}

namespace {

bool IsIdentStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool IsIdentChar(char c) {
  return IsIdentStart(c) || (c >= '0' && c <= '9') || c == '-';
}

bool IsBareIdentifier(std::string_view s) {
  if (s.empty() || !IsIdentStart(s[0])) return false;
  return std::all_of(s.begin(), s.end(), IsIdentChar);
}

bool IsEntityChar(char c) {
  return !(c == ',' || c == '(' || c == ')' || c == '"' || c == ' ' ||
           c == '\t' || c == '\r' || c == '\n');
}

std::optional<double> ParseDecimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  size_t i = 0;
  if (s[0] == '+' || s[0] == '-') i = 1;
  size_t digits = 0;
  size_t dots = 0;
  for (size_t j = i; j < s.size(); ++j) {
    if (s[j] >= '0' && s[j] <= '9') {
      ++digits;
    } else if (s[j] == '.') {
      ++dots;
    } else {
      return std::nullopt;
    }
  }
  if (digits == 0 || dots > 1) return std::nullopt;
  // from_chars rejects a leading '+'.
  std::string_view body = s[0] == '+' ? s.substr(1) : s;
  double value = 0;
  auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size()) {
    return std::nullopt;
  }
  return value;
}

std::string EscapeText(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

bool IsValidDate(const Date &d) {
  if (d.year < 1 || d.year > 9999 || d.month < 1 || d.month > 12 || d.day < 1)
    return false;
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30,
                                  31, 31, 30, 31, 30, 31};
  int max_day = kDays[d.month - 1];
  bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
  if (d.month == 2 && leap) max_day = 29;
  return d.day <= max_day;
}

std::optional<Date> ParseIsoDate(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto digits = [&](size_t b, size_t n, int *out) {
    int v = 0;
    for (size_t i = b; i < b + n; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      v = v * 10 + (s[i] - '0');
    }
    *out = v;
    return true;
  };
  Date d;
  if (!digits(0, 4, &d.year) || !digits(5, 2, &d.month) ||
      !digits(8, 2, &d.day)) {
    return std::nullopt;
  }
  if (!IsValidDate(d)) return std::nullopt;
  return d;
}

std::string FormatNumber(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string Render(const Value &v) {
  struct Visitor {
    std::string operator()(const EntityId &e) const { return e.name; }
    std::string operator()(const Text &t) const { return EscapeText(t.value); }
    std::string operator()(const Number &n) const {
      return FormatNumber(n.value);
    }
    std::string operator()(const Date &d) const {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month,
                    d.day);
      return buf;
    }
  };
  return std::visit(Visitor{}, v);
}

std::string Display(const Value &v) {
  if (const auto *t = std::get_if<Text>(&v)) return t->value;
  return Render(v);
}

std::optional<Value> ParseConstant(std::string_view token) {
  if (token.empty()) return std::nullopt;
  if (token[0] == ':') {
    if (token.size() == 1) return std::nullopt;
    if (!std::all_of(token.begin() + 1, token.end(), IsEntityChar)) {
      return std::nullopt;
    }
    return EntityId{std::string(token)};
  }
  if (token[0] == '"') {
    if (token.size() < 2 || token.back() != '"') return std::nullopt;
    std::string out;
    for (size_t i = 1; i + 1 < token.size(); ++i) {
      char c = token[i];
      if (c == '\\') {
        if (i + 2 >= token.size()) return std::nullopt;
        c = token[++i];
        if (c != '"' && c != '\\') return std::nullopt;
      } else if (c == '"') {
        return std::nullopt;
      }
      out.push_back(c);
    }
    return Text{std::move(out)};
  }
  if (auto date = ParseIsoDate(token)) return *date;
  if (auto num = ParseDecimal(token)) return Number{*num};
  if (IsBareIdentifier(token)) return EntityId{std::string(token)};
  return std::nullopt;
}

const char *CompOpSymbol(CompOp op) {
  switch (op) {
    case CompOp::kEq:
      return "=";
    case CompOp::kLt:
      return "<";
    case CompOp::kLe:
      return "<=";
    case CompOp::kGt:
      return ">";
    case CompOp::kGe:
      return ">=";
  }
  return "?";
}

std::optional<CompOp> ParseCompOp(std::string_view symbol) {
  if (symbol == "=" || symbol == "==") return CompOp::kEq;
  if (symbol == "<") return CompOp::kLt;
  if (symbol == "<=" || symbol == "≤") return CompOp::kLe;
  if (symbol == ">") return CompOp::kGt;
  if (symbol == ">=" || symbol == "≥") return CompOp::kGe;
  return std::nullopt;
}

namespace {

template <typename T>
bool Ordered(const T &a, CompOp op, const T &b) {
  switch (op) {
    case CompOp::kEq:
      return a == b;
    case CompOp::kLt:
      return a < b;
    case CompOp::kLe:
      return a < b || a == b;
    case CompOp::kGt:
      return b < a;
    case CompOp::kGe:
      return b < a || a == b;
  }
  return false;
}

}  // namespace

bool Compare(const Value &left, CompOp op, const Value &right) {
  if (left.index() != right.index()) return false;
  switch (TypeOf(left)) {
    case ValueType::kEntity:
      return op == CompOp::kEq &&
             std::get<EntityId>(left) == std::get<EntityId>(right);
    case ValueType::kText:
      // UTF-8 byte order equals code point order.
      return Ordered(std::get<Text>(left).value, op,
                     std::get<Text>(right).value);
    case ValueType::kNumber:
      return Ordered(std::get<Number>(left).value, op,
                     std::get<Number>(right).value);
    case ValueType::kDate: {
      const Date &a = std::get<Date>(left);
      const Date &b = std::get<Date>(right);
      return Ordered(std::tie(a.year, a.month, a.day), op,
                     std::tie(b.year, b.month, b.day));
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing.

std::string ToString(const Term &t) {
  if (const auto *v = std::get_if<Variable>(&t)) return v->name;
  return Render(std::get<Value>(t));
}

std::string ToString(const Atom &a) {
  std::string out = a.predicate + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i > 0) out += ", ";
    out += ToString(a.args[i]);
  }
  return out + ")";
}

std::string ToString(const ComparisonAtom &c) {
  return "(" + c.left.name + " " + CompOpSymbol(c.op) + " " + Render(c.right) +
         ")";
}

std::string ToString(const Fact &f) {
  std::string out = f.predicate + "(";
  for (size_t i = 0; i < f.args.size(); ++i) {
    if (i > 0) out += ",";
    out += Render(f.args[i]);
  }
  return out + ")";
}

std::string ToString(const QueryRule &rule) {
  std::string out = ToString(rule.head) + " :- ";
  bool first = true;
  for (const Atom &a : rule.body) {
    if (!first) out += ", ";
    out += ToString(a);
    first = false;
  }
  for (const ComparisonAtom &c : rule.comparisons) {
    if (!first) out += ", ";
    out += ToString(c);
    first = false;
  }
  return out + ".";
}

// ---------------------------------------------------------------------------
// Safety.

void CheckSafe(const QueryRule &rule) {
  std::set<std::string> bound;
  for (const Atom &a : rule.body) {
    for (const Term &t : a.args) {
      if (const auto *v = std::get_if<Variable>(&t)) bound.insert(v->name);
    }
  }
  for (const Term &t : rule.head.args) {
    if (const auto *v = std::get_if<Variable>(&t)) {
      if (!bound.count(v->name)) {
        throw Error(ErrorCode::kContract, "unsafe rule: head variable '" +
                                              v->name +
                                              "' does not occur in the body: " +
                                              ToString(rule));
      }
    }
  }
  for (const ComparisonAtom &c : rule.comparisons) {
    if (!bound.count(c.left.name)) {
      throw Error(ErrorCode::kContract,
                  "unsafe rule: comparison variable '" + c.left.name +
                      "' does not occur in a body atom: " + ToString(rule));
    }
  }
}

void CheckSafe(const DBQuery &query) {
  if (query.rules.empty()) {
    throw Error(ErrorCode::kContract, "query has no rules");
  }
  for (const QueryRule &r : query.rules) {
    if (!(r.head == query.rules.front().head)) {
      throw Error(ErrorCode::kContract, "rules do not share one head");
    }
    CheckSafe(r);
  }
}

// ---------------------------------------------------------------------------
// Fact store.

bool FactStore::Add(Fact fact) {
  const size_t arity = fact.args.size();
  if (arity == 0 || arity > kMaxArity) {
    throw Error(ErrorCode::kContract, "predicate '" + fact.predicate +
                                          "' has unsupported arity " +
                                          std::to_string(arity));
  }
  auto it = schema_.find(fact.predicate);
  if (it != schema_.end() && it->second.arity != arity) {
    throw Error(ErrorCode::kContract,
                "arity conflict for '" + fact.predicate + "': declared " +
                    std::to_string(it->second.arity) + ", found " +
                    std::to_string(arity));
  }
  if (facts_.count(fact)) return false;
  PredicateSchema &schema = schema_[fact.predicate];
  schema.arity = arity;
  schema.types.resize(arity);
  for (size_t i = 0; i < arity; ++i) schema.types[i].insert(TypeOf(fact.args[i]));
  by_predicate_[fact.predicate].push_back(fact);
  facts_.insert(std::move(fact));
  return true;
}

const std::vector<Fact> &FactStore::FactsFor(
    const std::string &predicate) const {
  static const std::vector<Fact> kNone;
  auto it = by_predicate_.find(predicate);
  return it == by_predicate_.end() ? kNone : it->second;
}

namespace {

// Cursor over one line or one rule text.
class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}

  void SkipSpace() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' ||
                                s_[pos_] == '\r' || s_[pos_] == '\n')) {
      ++pos_;
    }
  }
  bool AtEnd() {
    SkipSpace();
    return pos_ >= s_.size();
  }
  bool Consume(std::string_view token) {
    SkipSpace();
    if (s_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  char Peek() {
    SkipSpace();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  std::string Identifier() {
    SkipSpace();
    size_t start = pos_;
    if (pos_ < s_.size() && IsIdentStart(s_[pos_])) {
      ++pos_;
      while (pos_ < s_.size() &&
             (IsIdentChar(s_[pos_]) && s_[pos_] != '-')) {
        ++pos_;
      }
    }
    return std::string(s_.substr(start, pos_ - start));
  }
  // Raw spelling of one constant or variable, honouring quotes and escapes.
  std::string RawTerm() {
    SkipSpace();
    size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '"') {
      ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\') ++pos_;
        ++pos_;
      }
      if (pos_ < s_.size()) ++pos_;
      return std::string(s_.substr(start, pos_ - start));
    }
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ')' &&
           s_[pos_] != '(' && s_[pos_] != ' ' && s_[pos_] != '\t' &&
           s_[pos_] != '\n' && s_[pos_] != '\r' && s_[pos_] != '<' &&
           s_[pos_] != '>' && s_[pos_] != '=') {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }
  std::string Operator() {
    SkipSpace();
    for (std::string_view op : {"<=", ">=", "==", "≤", "≥", "=", "<",
                                ">"}) {
      if (s_.substr(pos_, op.size()) == op) {
        pos_ += op.size();
        return std::string(op);
      }
    }
    return {};
  }
  size_t pos() const { return pos_; }

 private:
  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

Fact ParseFact(std::string_view line) {
  Scanner sc(line);
  Fact fact;
  fact.predicate = sc.Identifier();
  if (fact.predicate.empty()) {
    throw Error(ErrorCode::kParse, "expected a predicate name");
  }
  if (!sc.Consume("(")) throw Error(ErrorCode::kParse, "expected '('");
  while (true) {
    std::string raw = sc.RawTerm();
    auto value = ParseConstant(raw);
    if (!value) {
      throw Error(ErrorCode::kParse, "invalid constant '" + raw + "'");
    }
    fact.args.push_back(std::move(*value));
    if (sc.Consume(",")) continue;
    if (sc.Consume(")")) break;
    throw Error(ErrorCode::kParse, "expected ',' or ')'");
  }
  sc.Consume(".");
  if (!sc.AtEnd()) {
    throw Error(ErrorCode::kParse, "unexpected text after ')'");
  }
  return fact;
}

FactStore ParseFacts(std::string_view source) {
  FactStore store;
  size_t line_no = 0;
  for (const std::string &raw : text::Split(source, '\n')) {
    ++line_no;
    std::string line = text::Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    try {
      store.Add(ParseFact(line));
    } catch (const Error &e) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return store;
}

FactStore LoadFacts(std::istream &in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseFacts(buf.str());
}

FactStore LoadFactsFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open facts file '" + path + "'");
  try {
    return LoadFacts(in);
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Rule text.

namespace {

Term ParseTerm(const std::string &raw) {
  if (raw.empty()) throw Error(ErrorCode::kParse, "empty term");
  if (raw[0] == '?') return Variable{raw.substr(1)};
  if (IsBareIdentifier(raw)) return Variable{raw};
  auto value = ParseConstant(raw);
  if (!value) throw Error(ErrorCode::kParse, "invalid term '" + raw + "'");
  return *value;
}

Atom ParseAtomText(Scanner &sc) {
  Atom atom;
  atom.predicate = sc.Identifier();
  if (atom.predicate.empty()) {
    throw Error(ErrorCode::kParse, "expected a predicate name at offset " +
                                       std::to_string(sc.pos()));
  }
  if (!sc.Consume("(")) throw Error(ErrorCode::kParse, "expected '('");
  if (sc.Consume(")")) return atom;
  while (true) {
    std::string raw = sc.RawTerm();
    atom.args.push_back(ParseTerm(raw));
    if (sc.Consume(",")) continue;
    if (sc.Consume(")")) break;
    throw Error(ErrorCode::kParse, "expected ',' or ')' at offset " +
                                       std::to_string(sc.pos()));
  }
  return atom;
}

ComparisonAtom ParseComparisonText(Scanner &sc) {
  ComparisonAtom c;
  std::string var = sc.RawTerm();
  if (!var.empty() && var[0] == '?') var = var.substr(1);
  if (!IsBareIdentifier(var)) {
    throw Error(ErrorCode::kParse,
                "comparison must start with a variable, got '" + var + "'");
  }
  c.left = Variable{var};
  auto op = ParseCompOp(sc.Operator());
  if (!op) throw Error(ErrorCode::kParse, "expected a comparison operator");
  c.op = *op;
  std::string raw = sc.RawTerm();
  auto value = ParseConstant(raw);
  if (!value) throw Error(ErrorCode::kParse, "invalid constant '" + raw + "'");
  c.right = std::move(*value);
  if (!sc.Consume(")")) throw Error(ErrorCode::kParse, "expected ')'");
  return c;
}

}  // namespace

DBQuery ParseRules(std::string_view source) {
  DBQuery query;
  Scanner sc(source);
  while (!sc.AtEnd()) {
    QueryRule rule;
    rule.head = ParseAtomText(sc);
    if (!sc.Consume(":-") && !sc.Consume("<-") && !sc.Consume("←")) {
      throw Error(ErrorCode::kParse, "expected ':-' after rule head");
    }
    if (!sc.Consume(".")) {
      while (true) {
        if (sc.Consume("(")) {
          rule.comparisons.push_back(ParseComparisonText(sc));
        } else {
          rule.body.push_back(ParseAtomText(sc));
        }
        if (sc.Consume(",")) continue;
        sc.Consume(".");
        break;
      }
    }
    query.rules.push_back(std::move(rule));
  }
  return query;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence.

namespace {

using Renaming = std::map<std::string, std::string>;

bool MapVariable(const std::string &from, const std::string &to,
                 Renaming *forward, Renaming *backward,
                 std::vector<std::string> *added) {
  auto f = forward->find(from);
  auto b = backward->find(to);
  if (f != forward->end() || b != backward->end()) {
    return f != forward->end() && f->second == to && b != backward->end() &&
           b->second == from;
  }
  (*forward)[from] = to;
  (*backward)[to] = from;
  added->push_back(from);
  return true;
}

void Undo(const std::vector<std::string> &added, Renaming *forward,
          Renaming *backward) {
  for (const std::string &from : added) {
    backward->erase((*forward)[from]);
    forward->erase(from);
  }
}

bool MatchTerms(const std::vector<Term> &a, const std::vector<Term> &b,
                Renaming *forward, Renaming *backward,
                std::vector<std::string> *added) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    const auto *va = std::get_if<Variable>(&a[i]);
    const auto *vb = std::get_if<Variable>(&b[i]);
    if ((va == nullptr) != (vb == nullptr)) return false;
    if (va == nullptr) {
      if (!(std::get<Value>(a[i]) == std::get<Value>(b[i]))) return false;
      continue;
    }
    if (!MapVariable(va->name, vb->name, forward, backward, added)) {
      return false;
    }
  }
  return true;
}

struct RuleShape {
  std::vector<Atom> atoms;
  std::vector<ComparisonAtom> comparisons;
};

RuleShape Dedup(const QueryRule &r) {
  std::set<Atom> atoms(r.body.begin(), r.body.end());
  std::set<ComparisonAtom> comps(r.comparisons.begin(), r.comparisons.end());
  return {{atoms.begin(), atoms.end()}, {comps.begin(), comps.end()}};
}

bool MatchFrom(size_t i, const RuleShape &a, const RuleShape &b,
               std::vector<bool> *used_atoms, std::vector<bool> *used_comps,
               Renaming *forward, Renaming *backward) {
  const size_t n_atoms = a.atoms.size();
  if (i == n_atoms + a.comparisons.size()) return true;
  if (i < n_atoms) {
    const Atom &x = a.atoms[i];
    for (size_t j = 0; j < b.atoms.size(); ++j) {
      if ((*used_atoms)[j] || b.atoms[j].predicate != x.predicate) continue;
      std::vector<std::string> added;
      if (MatchTerms(x.args, b.atoms[j].args, forward, backward, &added)) {
        (*used_atoms)[j] = true;
        if (MatchFrom(i + 1, a, b, used_atoms, used_comps, forward, backward))
          return true;
        (*used_atoms)[j] = false;
      }
      Undo(added, forward, backward);
    }
    return false;
  }
  const ComparisonAtom &x = a.comparisons[i - n_atoms];
  for (size_t j = 0; j < b.comparisons.size(); ++j) {
    const ComparisonAtom &y = b.comparisons[j];
    if ((*used_comps)[j] || x.op != y.op || !(x.right == y.right)) continue;
    std::vector<std::string> added;
    if (MapVariable(x.left.name, y.left.name, forward, backward, &added)) {
      (*used_comps)[j] = true;
      if (MatchFrom(i + 1, a, b, used_atoms, used_comps, forward, backward))
        return true;
      (*used_comps)[j] = false;
    }
    Undo(added, forward, backward);
  }
  return false;
}

}  // namespace

bool AlphaEquivalent(const QueryRule &ra, const QueryRule &rb) {
  if (ra.head.predicate != rb.head.predicate) return false;
  RuleShape a = Dedup(ra);
  RuleShape b = Dedup(rb);
  if (a.atoms.size() != b.atoms.size() ||
      a.comparisons.size() != b.comparisons.size()) {
    return false;
  }
  Renaming forward;
  Renaming backward;
  std::vector<std::string> added;
  if (!MatchTerms(ra.head.args, rb.head.args, &forward, &backward, &added)) {
    return false;
  }
  std::vector<bool> used_atoms(b.atoms.size(), false);
  std::vector<bool> used_comps(b.comparisons.size(), false);
  return MatchFrom(0, a, b, &used_atoms, &used_comps, &forward, &backward);
}

bool AlphaEquivalent(const DBQuery &a, const DBQuery &b) {
  if (a.rules.size() != b.rules.size()) return false;
  std::vector<bool> used(b.rules.size(), false);
  for (const QueryRule &r : a.rules) {
    bool found = false;
    for (size_t j = 0; j < b.rules.size() && !found; ++j) {
      if (!used[j] && AlphaEquivalent(r, b.rules[j])) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace {

// A rule with variables replaced by dense slot numbers.
struct CompiledRule {
  struct Arg {
    int slot = -1;  // -1 for constants
    Value constant;
  };
  struct Body {
    const std::string *predicate;
    std::vector<Arg> args;
    // Comparisons whose variable becomes bound by this atom.
    std::vector<const ComparisonAtom *> checks;
    std::vector<int> check_slots;
  };
  std::vector<Body> body;
  std::vector<Arg> head;
  size_t slots = 0;
};

CompiledRule Compile(const QueryRule &rule) {
  CompiledRule out;
  std::map<std::string, int> slots;
  auto slot_of = [&](const std::string &name) {
    auto [it, inserted] = slots.emplace(name, static_cast<int>(slots.size()));
    return it->second;
  };
  std::set<std::string> bound;
  std::vector<bool> placed(rule.comparisons.size(), false);
  for (const Atom &atom : rule.body) {
    CompiledRule::Body b;
    b.predicate = &atom.predicate;
    for (const Term &t : atom.args) {
      CompiledRule::Arg arg;
      if (const auto *v = std::get_if<Variable>(&t)) {
        arg.slot = slot_of(v->name);
        bound.insert(v->name);
      } else {
        arg.constant = std::get<Value>(t);
      }
      b.args.push_back(std::move(arg));
    }
    for (size_t i = 0; i < rule.comparisons.size(); ++i) {
      if (!placed[i] && bound.count(rule.comparisons[i].left.name)) {
        placed[i] = true;
        b.checks.push_back(&rule.comparisons[i]);
        b.check_slots.push_back(slot_of(rule.comparisons[i].left.name));
      }
    }
    out.body.push_back(std::move(b));
  }
  for (const Term &t : rule.head.args) {
    CompiledRule::Arg arg;
    if (const auto *v = std::get_if<Variable>(&t)) {
      arg.slot = slot_of(v->name);
    } else {
      arg.constant = std::get<Value>(t);
    }
    out.head.push_back(std::move(arg));
  }
  out.slots = slots.size();
  return out;
}

class Joiner {
 public:
  Joiner(const CompiledRule &rule, const FactStore &store,
         std::set<Tuple> *answers)
      : rule_(rule), store_(store), answers_(answers),
        binding_(rule.slots) {}

  void Run(size_t depth) {
    if (depth == rule_.body.size()) {
      Tuple t;
      t.reserve(rule_.head.size());
      for (const auto &arg : rule_.head) {
        t.push_back(arg.slot < 0 ? arg.constant : *binding_[arg.slot]);
      }
      answers_->insert(std::move(t));
      return;
    }
    const CompiledRule::Body &atom = rule_.body[depth];
    for (const Fact &fact : store_.FactsFor(*atom.predicate)) {
      if (fact.args.size() != atom.args.size()) continue;
      std::vector<int> newly_bound;
      bool ok = true;
      for (size_t i = 0; i < atom.args.size() && ok; ++i) {
        const auto &arg = atom.args[i];
        if (arg.slot < 0) {
          ok = arg.constant == fact.args[i];
        } else if (binding_[arg.slot]) {
          ok = *binding_[arg.slot] == fact.args[i];
        } else {
          binding_[arg.slot] = fact.args[i];
          newly_bound.push_back(arg.slot);
        }
      }
      for (size_t i = 0; i < atom.checks.size() && ok; ++i) {
        ok = Compare(*binding_[atom.check_slots[i]], atom.checks[i]->op,
                     atom.checks[i]->right);
      }
      if (ok) Run(depth + 1);
      for (int slot : newly_bound) binding_[slot].reset();
    }
  }

 private:
  const CompiledRule &rule_;
  const FactStore &store_;
  std::set<Tuple> *answers_;
  std::vector<std::optional<Value>> binding_;
};

}  // namespace

std::set<Tuple> Evaluate(const QueryRule &rule, const FactStore &store) {
  CheckSafe(rule);
  std::set<Tuple> answers;
  CompiledRule compiled = Compile(rule);
  Joiner(compiled, store, &answers).Run(0);
  return answers;
}

std::set<Tuple> Evaluate(const DBQuery &query, const FactStore &store) {
  CheckSafe(query);
  std::set<Tuple> answers;
  for (const QueryRule &rule : query.rules) {
    CompiledRule compiled = Compile(rule);
    Joiner(compiled, store, &answers).Run(0);
  }
  return answers;
}

}  // namespace nlq
