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

// Local grammars for values that are not stored in lexicons: numbers, quoted
// titles and dates. Rules are token-sequence patterns loaded from a registry
// file, so new grammars need no code.
//
// Pattern syntax, one element per whitespace-separated word:
//   /regex/   token surface fully matches the ECMAScript regex
//   QUOTED    a quoted token
//   MONTH     an English month name or abbreviation
//   word      the literal word, case-insensitive

#ifndef NLQ_GRAMMAR_H_
#define NLQ_GRAMMAR_H_

#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "nlq/logic.h"
#include "nlq/parse.h"

namespace nlq {

enum class ValueFormat {
  kDecimal,  // number
  kText,     // quoted text without its quotes
  kIsoDate,  // yyyy-mm-dd
  kWordDate, // month name, day and year in any order
};

struct GrammarElement {
  enum class Kind { kRegex, kQuoted, kMonth, kLiteral };
  Kind kind = Kind::kLiteral;
  std::string source;
  std::regex regex;
};

struct GrammarRule {
  std::string name;
  std::string pattern;
  std::vector<GrammarElement> elements;
  std::string lex_type;  // Number, Text or Date
  ValueFormat format = ValueFormat::kDecimal;
};

// Throws kConfig on a bad pattern, lex type or format tag.
GrammarRule MakeGrammarRule(std::string name, std::string_view pattern,
                            std::string lex_type, std::string_view format);

class GrammarRegistry {
 public:
  void Add(GrammarRule rule) { rules_.push_back(std::move(rule)); }
  const std::vector<GrammarRule> &rules() const { return rules_; }

  // Numbers, quoted text, ISO dates, "Month D, YYYY" and "D Month YYYY".
  static GrammarRegistry Default();
  // name <TAB> pattern <TAB> lex_type <TAB> format, '#' comments.
  static GrammarRegistry Parse(std::string_view source);

 private:
  std::vector<GrammarRule> rules_;
};

// Text of the registry file equivalent to GrammarRegistry::Default().
std::string_view DefaultGrammarSource();

struct GrammarMatch {
  size_t first_token = 0;
  size_t end_token = 0;  // exclusive
  size_t start = 0;      // byte offsets
  size_t end = 0;
  std::string rule;
  std::string lex_type;
  Value value;
};

// Left-to-right, non-overlapping matches for every rule; matches from
// different rules may overlap, except that a match lying strictly inside a
// longer one is dropped. Candidates whose value does not parse are skipped.
// Ordered by start offset, then rule order.
std::vector<GrammarMatch> RunGrammars(const std::vector<Token> &tokens,
                                      const GrammarRegistry &registry);

// Parses the matched tokens according to `format`.
std::optional<Value> ParseGrammarValue(ValueFormat format,
                                       const std::vector<Token> &tokens,
                                       size_t first, size_t end);

}  // namespace nlq

#endif  // NLQ_GRAMMAR_H_
