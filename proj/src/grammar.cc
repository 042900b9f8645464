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

#include "nlq/grammar.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "nlq/error.h"
#include "nlq/text.h"

namespace nlq {

namespace {

const std::map<std::string, int> &Months() {
  static const std::map<std::string, int> kMonths = {
      {"january", 1}, {"jan", 1},   {"february", 2}, {"feb", 2},
      {"march", 3},   {"mar", 3},   {"april", 4},    {"apr", 4},
      {"may", 5},     {"june", 6},  {"jun", 6},      {"july", 7},
      {"jul", 7},     {"august", 8}, {"aug", 8},     {"september", 9},
      {"sep", 9},     {"sept", 9},  {"october", 10}, {"oct", 10},
      {"november", 11}, {"nov", 11}, {"december", 12}, {"dec", 12}};
  return kMonths;
}

bool AllDigits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool Matches(const GrammarElement &e, const Token &t) {
  switch (e.kind) {
    case GrammarElement::Kind::kQuoted:
      return t.quoted;
    case GrammarElement::Kind::kMonth:
      return !t.quoted && Months().count(t.lemma) > 0;
    case GrammarElement::Kind::kLiteral:
      return !t.quoted && t.lemma == e.source;
    case GrammarElement::Kind::kRegex:
      return !t.quoted && std::regex_match(t.surface, e.regex);
  }
  return false;
}

}  // namespace

GrammarRule MakeGrammarRule(std::string name, std::string_view pattern,
                            std::string lex_type, std::string_view format) {
  GrammarRule rule;
  rule.name = std::move(name);
  rule.pattern = std::string(pattern);
  if (lex_type != "Number" && lex_type != "Text" && lex_type != "Date") {
    throw Error(ErrorCode::kConfig, "grammar '" + rule.name +
                                        "': lex type must be Number, Text or "
                                        "Date, got '" + lex_type + "'");
  }
  rule.lex_type = std::move(lex_type);
  if (format == "decimal") {
    rule.format = ValueFormat::kDecimal;
  } else if (format == "text") {
    rule.format = ValueFormat::kText;
  } else if (format == "iso-date") {
    rule.format = ValueFormat::kIsoDate;
  } else if (format == "word-date") {
    rule.format = ValueFormat::kWordDate;
  } else {
    throw Error(ErrorCode::kConfig, "grammar '" + rule.name +
                                        "': unknown value format '" +
                                        std::string(format) + "'");
  }
  std::istringstream in{std::string(pattern)};
  for (std::string word; in >> word;) {
    GrammarElement e;
    e.source = word;
    if (word.size() >= 2 && word.front() == '/' && word.back() == '/') {
      e.kind = GrammarElement::Kind::kRegex;
      try {
        e.regex = std::regex(word.substr(1, word.size() - 2),
                             std::regex::ECMAScript | std::regex::optimize);
      } catch (const std::regex_error &err) {
        throw Error(ErrorCode::kConfig, "grammar '" + rule.name +
                                            "': bad regex " + word + ": " +
                                            err.what());
      }
    } else if (word == "QUOTED") {
      e.kind = GrammarElement::Kind::kQuoted;
    } else if (word == "MONTH") {
      e.kind = GrammarElement::Kind::kMonth;
    } else {
      e.kind = GrammarElement::Kind::kLiteral;
      e.source = text::Normalize(word);
    }
    rule.elements.push_back(std::move(e));
  }
  if (rule.elements.empty()) {
    throw Error(ErrorCode::kConfig, "grammar '" + rule.name + "': empty pattern");
  }
  return rule;
}

std::string_view DefaultGrammarSource() {
  return "# name\tpattern\tlex_type\tformat\n"
         "number\t/[+-]?[0-9]+(\\.[0-9]+)?/\tNumber\tdecimal\n"
         "quoted_text\tQUOTED\tText\ttext\n"
         "iso_date\t/[0-9]{4}-[0-9]{2}-[0-9]{2}/\tDate\tiso-date\n"
         "month_day_year\tMONTH /[0-9]{1,2}/ , /[0-9]{4}/\tDate\tword-date\n"
         "month_day_year_nocomma\tMONTH /[0-9]{1,2}/ /[0-9]{4}/\tDate\tword-date\n"
         "day_month_year\t/[0-9]{1,2}/ MONTH /[0-9]{4}/\tDate\tword-date\n";
}

GrammarRegistry GrammarRegistry::Default() {
  return Parse(DefaultGrammarSource());
}

GrammarRegistry GrammarRegistry::Parse(std::string_view source) {
  GrammarRegistry registry;
  size_t line_no = 0;
  for (const std::string &raw : text::Split(source, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::vector<std::string> f = text::Split(line, '\t');
    if (f.size() < 4) {
      throw Error(ErrorCode::kConfig, "grammar registry line " +
                                          std::to_string(line_no) +
                                          ": expected 4 tab-separated fields");
    }
    try {
      registry.Add(MakeGrammarRule(text::Trim(f[0]), text::Trim(f[1]),
                                   text::Trim(f[2]), text::Trim(f[3])));
    } catch (const Error &e) {
      throw Error(ErrorCode::kConfig, "grammar registry line " +
                                          std::to_string(line_no) + ": " +
                                          e.what());
    }
  }
  return registry;
}

std::optional<Value> ParseGrammarValue(ValueFormat format,
                                       const std::vector<Token> &tokens,
                                       size_t first, size_t end) {
  switch (format) {
    case ValueFormat::kDecimal: {
      // the first numeric token; unit words around it are not part of it
      for (size_t i = first; i < end; ++i) {
        if (tokens[i].quoted) continue;
        auto v = ParseConstant(tokens[i].surface);
        if (v && TypeOf(*v) == ValueType::kNumber) return v;
      }
      return std::nullopt;
    }
    case ValueFormat::kText: {
      if (end != first + 1 || !tokens[first].quoted) return std::nullopt;
      std::string inner = text::Trim(tokens[first].Unquoted());
      if (inner.empty()) return std::nullopt;
      return Text{inner};
    }
    case ValueFormat::kIsoDate: {
      if (end != first + 1) return std::nullopt;
      auto d = ParseIsoDate(tokens[first].surface);
      if (!d) return std::nullopt;
      return *d;
    }
    case ValueFormat::kWordDate: {
      Date d;
      for (size_t i = first; i < end; ++i) {
        const Token &t = tokens[i];
        if (auto m = Months().find(t.lemma); m != Months().end()) {
          d.month = m->second;
        } else if (AllDigits(t.surface) && t.surface.size() == 4) {
          d.year = std::stoi(t.surface);
        } else if (AllDigits(t.surface) && t.surface.size() <= 2) {
          d.day = std::stoi(t.surface);
        }
      }
      if (!IsValidDate(d)) return std::nullopt;
      return d;
    }
  }
  return std::nullopt;
}

std::vector<GrammarMatch> RunGrammars(const std::vector<Token> &tokens,
                                      const GrammarRegistry &registry) {
  std::vector<GrammarMatch> matches;
  for (const GrammarRule &rule : registry.rules()) {
    const size_t len = rule.elements.size();
    for (size_t i = 0; i + len <= tokens.size();) {
      bool ok = true;
      for (size_t k = 0; k < len && ok; ++k) {
        ok = Matches(rule.elements[k], tokens[i + k]);
      }
      std::optional<Value> value;
      if (ok) value = ParseGrammarValue(rule.format, tokens, i, i + len);
      if (!value) {
        ++i;
        continue;
      }
      GrammarMatch m;
      m.first_token = i;
      m.end_token = i + len;
      m.start = tokens[i].start;
      m.end = tokens[i + len - 1].end;
      m.rule = rule.name;
      m.lex_type = rule.lex_type;
      m.value = std::move(*value);
      matches.push_back(std::move(m));
      i += len;
    }
  }
  std::vector<GrammarMatch> kept;
  for (const GrammarMatch &m : matches) {
    bool inside = std::any_of(matches.begin(), matches.end(),
                              [&](const GrammarMatch &o) {
                                return o.first_token <= m.first_token &&
                                       m.end_token <= o.end_token &&
                                       (o.end_token - o.first_token) >
                                           (m.end_token - m.first_token);
                              });
    if (!inside) kept.push_back(m);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const GrammarMatch &a, const GrammarMatch &b) {
                     return a.start < b.start;
                   });
  return kept;
}

}  // namespace nlq
