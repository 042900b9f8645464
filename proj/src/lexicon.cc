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

#include "nlq/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nlq/error.h"
#include "nlq/text.h"

namespace nlq {

Lexicon MergeLexicons(const std::vector<Lexicon> &parts) {
  std::map<std::string, std::set<std::string>> merged;
  for (const Lexicon &lexicon : parts) {
    for (const LexiconEntry &e : lexicon) {
      merged[e.entity_name].insert(e.lexemes.begin(), e.lexemes.end());
    }
  }
  Lexicon out;
  for (auto &[name, lexemes] : merged) {
    if (!lexemes.empty()) out.push_back({name, std::move(lexemes)});
  }
  return out;
}

// ---------------------------------------------------------------------------

void AuxTable::Add(AuxRecord record) {
  auto [b, e] = by_name_.equal_range(record.entity_name);
  for (auto it = b; it != e; ++it) {
    if (records_[it->second].lex_type == record.lex_type) {
      throw Error(ErrorCode::kConfig, "duplicate AuxSt record (" +
                                          record.entity_name + ", " +
                                          record.lex_type + ")");
    }
  }
  by_name_.emplace(record.entity_name, records_.size());
  records_.push_back(std::move(record));
}

std::vector<AuxRecord> AuxTable::Records(const std::string &entity_name) const {
  std::vector<AuxRecord> out;
  auto [b, e] = by_name_.equal_range(entity_name);
  for (auto it = b; it != e; ++it) out.push_back(records_[it->second]);
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::string> AuxTable::LexTypes(const std::string &entity_name) const {
  std::set<std::string> out;
  for (const AuxRecord &r : Records(entity_name)) out.insert(r.lex_type);
  return out;
}

std::set<std::string> AuxTable::DbTypes(const std::string &entity_name) const {
  std::set<std::string> out;
  for (const AuxRecord &r : Records(entity_name)) out.insert(r.db_type);
  return out;
}

bool AuxTable::Contains(const std::string &entity_name) const {
  return by_name_.count(entity_name) > 0;
}

void BindingTable::Add(PredicateBinding binding) {
  if (binding.arity < 1 || binding.arity > FactStore::kMaxArity) {
    throw Error(ErrorCode::kConfig,
                "binding for '" + binding.db_type + "' has arity " +
                    std::to_string(binding.arity));
  }
  if (binding.entity_position >= binding.arity) {
    throw Error(ErrorCode::kConfig, "binding for '" + binding.db_type +
                                        "': entity position out of range");
  }
  std::string key = binding.db_type;
  if (!bindings_.emplace(key, std::move(binding)).second) {
    throw Error(ErrorCode::kConfig, "duplicate binding for '" + key + "'");
  }
}

const PredicateBinding &BindingTable::PredE(const std::string &db_type) const {
  const PredicateBinding *b = Find(db_type);
  if (b == nullptr) {
    throw Error(ErrorCode::kUnknownDbType,
                "no predicate bound to DBType '" + db_type + "'");
  }
  return *b;
}

const PredicateBinding *BindingTable::Find(const std::string &db_type) const {
  auto it = bindings_.find(db_type);
  return it == bindings_.end() ? nullptr : &it->second;
}

void OperatorDictionary::Add(OperatorEntry entry) {
  ops_[entry.entity_name] = entry.comparator;
}

std::optional<CompOp> OperatorDictionary::Find(
    const std::string &entity_name) const {
  auto it = ops_.find(entity_name);
  if (it == ops_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Trigrams.

std::set<std::u32string> Trigrams(std::string_view normalized) {
  std::u32string padded = U"  " + text::Decode(normalized) + U"  ";
  std::set<std::u32string> grams;
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    grams.insert(padded.substr(i, 3));
  }
  return grams;
}

double TrigramSimilarity(std::string_view a, std::string_view b) {
  std::set<std::u32string> ga = Trigrams(a);
  std::set<std::u32string> gb = Trigrams(b);
  size_t shared = 0;
  for (const auto &g : ga) shared += gb.count(g);
  return 2.0 * static_cast<double>(shared) /
         static_cast<double>(ga.size() + gb.size());
}

InverseIndex::InverseIndex(const Lexicon &lexicon) {
  for (const LexiconEntry &entry : lexicon) {
    for (const std::string &raw : entry.lexemes) {
      std::string lexeme = text::Normalize(raw);
      if (lexeme.empty()) continue;
      exact_[lexeme].insert(entry.entity_name);
    }
  }
  for (const auto &[lexeme, names] : exact_) {
    std::set<std::u32string> grams = Trigrams(lexeme);
    trigram_count_[lexeme] = grams.size();
    for (const auto &g : grams) trigrams_[g].insert(lexeme);
    size_t words = 1 + static_cast<size_t>(
                           std::count(lexeme.begin(), lexeme.end(), ' '));
    max_words_ = std::max(max_words_, words);
  }
}

std::set<std::string> InverseIndex::ExactEntities(
    const std::string &lexeme) const {
  auto it = exact_.find(lexeme);
  return it == exact_.end() ? std::set<std::string>{} : it->second;
}

std::vector<LookupMatch> InverseIndex::Lookup(std::string_view span,
                                              double threshold) const {
  std::string query = text::Normalize(span);
  std::vector<LookupMatch> out;
  if (query.empty()) return out;
  if (auto it = exact_.find(query); it != exact_.end()) {
    for (const std::string &name : it->second) {
      out.push_back({name, query, 1.0});
    }
    return out;
  }
  std::set<std::u32string> grams = Trigrams(query);
  std::map<std::string, size_t> shared;
  for (const auto &g : grams) {
    auto it = trigrams_.find(g);
    if (it == trigrams_.end()) continue;
    for (const std::string &lexeme : it->second) ++shared[lexeme];
  }
  // Scores are ratios of small integers; the tolerance keeps exact ties such
  // as 0.5 from being lost to rounding.
  constexpr double kEps = 1e-12;
  for (const auto &[lexeme, count] : shared) {
    double score = 2.0 * static_cast<double>(count) /
                   static_cast<double>(grams.size() + trigram_count_.at(lexeme));
    if (score + kEps < threshold) continue;
    for (const std::string &name : exact_.at(lexeme)) {
      out.push_back({name, lexeme, score});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LookupMatch &a, const LookupMatch &b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.lexeme != b.lexeme) return a.lexeme < b.lexeme;
              return a.entity_name < b.entity_name;
            });
  return out;
}

// ---------------------------------------------------------------------------
// Generation.

namespace {

std::optional<LexemeTemplate> ParseTemplate(std::string_view name) {
  if (name == "full") return LexemeTemplate::kFull;
  if (name == "tokens") return LexemeTemplate::kTokens;
  if (name == "first") return LexemeTemplate::kFirst;
  if (name == "last") return LexemeTemplate::kLast;
  if (name == "reversed") return LexemeTemplate::kReversed;
  if (name == "id") return LexemeTemplate::kId;
  return std::nullopt;
}

std::vector<std::string> Words(std::string_view s) {
  std::vector<std::string> words;
  for (const std::string &w : text::Split(text::Normalize(s), ' ')) {
    if (!w.empty()) words.push_back(w);
  }
  return words;
}

void ApplyTemplate(LexemeTemplate t, const std::string &name,
                   std::set<std::string> *out) {
  std::vector<std::string> words = Words(name);
  if (words.empty()) return;
  switch (t) {
    case LexemeTemplate::kFull:
    case LexemeTemplate::kId:
      out->insert(text::Normalize(name));
      break;
    case LexemeTemplate::kTokens:
      out->insert(words.begin(), words.end());
      break;
    case LexemeTemplate::kFirst:
      out->insert(words.front());
      break;
    case LexemeTemplate::kLast:
      out->insert(words.back());
      break;
    case LexemeTemplate::kReversed: {
      std::string joined;
      for (auto it = words.rbegin(); it != words.rend(); ++it) {
        if (!joined.empty()) joined += ' ';
        joined += *it;
      }
      out->insert(joined);
      break;
    }
  }
}

std::string IdToName(const std::string &id) {
  std::string s = id.size() > 1 && id[0] == ':' ? id.substr(1) : id;
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

}  // namespace

std::vector<GenerationRule> ParseGenerationConfig(std::string_view source) {
  std::vector<GenerationRule> rules;
  size_t line_no = 0;
  for (const std::string &raw : text::Split(source, '\n')) {
    ++line_no;
    std::string line = text::Trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::vector<std::string> fields;
    for (std::string f; in >> f;) fields.push_back(f);
    auto fail = [&](const std::string &why) {
      return Error(ErrorCode::kConfig, "generation config line " +
                                           std::to_string(line_no) + ": " +
                                           why);
    };
    if (fields.size() < 3) throw fail("expected class, name predicate and templates");
    GenerationRule rule;
    rule.class_predicate = fields[0];
    if (fields[1] != "-") rule.name_predicate = fields[1];
    for (size_t i = 2; i < fields.size(); ++i) {
      auto t = ParseTemplate(fields[i]);
      if (!t) throw fail("unknown template '" + fields[i] + "'");
      rule.templates.push_back(*t);
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

Lexicon GenerateLexicons(const FactStore &store,
                         const std::vector<GenerationRule> &rules) {
  if (store.empty()) return {};
  auto require = [&](const std::string &pred, size_t arity) {
    auto it = store.schema().find(pred);
    if (it == store.schema().end()) {
      throw Error(ErrorCode::kConfig,
                  "generation config references unknown predicate '" + pred +
                      "'");
    }
    if (it->second.arity != arity) {
      throw Error(ErrorCode::kConfig, "generation config predicate '" + pred +
                                          "' must have arity " +
                                          std::to_string(arity));
    }
  };
  std::map<std::string, std::set<std::string>> lexemes;
  for (const GenerationRule &rule : rules) {
    require(rule.class_predicate, 1);
    if (!rule.name_predicate.empty()) require(rule.name_predicate, 2);
    std::map<std::string, std::vector<std::string>> names;
    if (!rule.name_predicate.empty()) {
      for (const Fact &f : store.FactsFor(rule.name_predicate)) {
        if (const auto *id = std::get_if<EntityId>(&f.args[0])) {
          names[id->name].push_back(Display(f.args[1]));
        }
      }
    }
    for (const Fact &f : store.FactsFor(rule.class_predicate)) {
      const auto *id = std::get_if<EntityId>(&f.args[0]);
      if (id == nullptr) continue;
      std::set<std::string> &out = lexemes[id->name];
      auto found = names.find(id->name);
      for (LexemeTemplate t : rule.templates) {
        if (t == LexemeTemplate::kId) {
          ApplyTemplate(t, IdToName(id->name), &out);
        } else if (found != names.end()) {
          for (const std::string &n : found->second) ApplyTemplate(t, n, &out);
        }
      }
      if (out.empty()) ApplyTemplate(LexemeTemplate::kId, IdToName(id->name), &out);
    }
  }
  Lexicon out;
  for (auto &[name, set] : lexemes) out.push_back({name, std::move(set)});
  return out;
}

// ---------------------------------------------------------------------------
// Table files.

namespace {

// Calls `row` with the tab-separated fields of every non-comment line.
template <typename Fn>
void ForEachRow(std::string_view source, const char *table, size_t min_fields,
                Fn &&row) {
  size_t line_no = 0;
  for (const std::string &raw : text::Split(source, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::Trim(line).empty() || text::Trim(line)[0] == '#') continue;
    std::vector<std::string> fields = text::Split(line, '\t');
    for (std::string &f : fields) f = text::Trim(f);
    if (fields.size() < min_fields) {
      throw Error(ErrorCode::kConfig,
                  std::string(table) + " line " + std::to_string(line_no) +
                      ": expected " + std::to_string(min_fields) +
                      " tab-separated fields");
    }
    try {
      row(fields);
    } catch (const Error &e) {
      throw Error(ErrorCode::kConfig, std::string(table) + " line " +
                                          std::to_string(line_no) + ": " +
                                          e.what());
    }
  }
}

size_t ParseIndex(const std::string &s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) {
        return c >= '0' && c <= '9';
      })) {
    throw Error(ErrorCode::kConfig, "expected a non-negative integer, got '" +
                                        s + "'");
  }
  return static_cast<size_t>(std::stoul(s));
}

}  // namespace

Lexicon ParseLexiconTsv(std::string_view source) {
  std::map<std::string, std::set<std::string>> entries;
  ForEachRow(source, "lexicon", 2, [&](const std::vector<std::string> &f) {
    std::string lexeme = text::Normalize(f[1]);
    if (f[0].empty() || lexeme.empty()) {
      throw Error(ErrorCode::kConfig, "empty entity name or lexeme");
    }
    entries[f[0]].insert(lexeme);
  });
  Lexicon out;
  for (auto &[name, set] : entries) out.push_back({name, std::move(set)});
  return out;
}

AuxTable ParseAuxTsv(std::string_view source) {
  AuxTable table;
  ForEachRow(source, "auxst", 3, [&](const std::vector<std::string> &f) {
    table.Add({f[0], f[1], f[2]});
  });
  return table;
}

BindingTable ParseBindingsTsv(std::string_view source) {
  BindingTable table;
  ForEachRow(source, "bindings", 4, [&](const std::vector<std::string> &f) {
    table.Add({f[0], f[1], ParseIndex(f[2]), ParseIndex(f[3])});
  });
  return table;
}

OperatorDictionary ParseOperatorsTsv(std::string_view source) {
  OperatorDictionary dict;
  ForEachRow(source, "operators", 2, [&](const std::vector<std::string> &f) {
    auto op = ParseCompOp(f[1]);
    if (!op) throw Error(ErrorCode::kConfig, "unknown comparator '" + f[1] + "'");
    dict.Add({f[0], *op});
  });
  return dict;
}

void WriteLexiconTsv(const Lexicon &lexicon, std::ostream &out) {
  for (const LexiconEntry &e : MergeLexicons({lexicon})) {
    for (const std::string &lexeme : e.lexemes) {
      out << e.entity_name << '\t' << lexeme << '\n';
    }
  }
}

std::string IndexManifest(const InverseIndex &index) {
  // FNV-1a over the sorted (lexeme, entity) pairs.
  uint64_t hash = 1469598103934665603ULL;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      hash ^= c;
      hash *= 1099511628211ULL;
    }
    hash ^= 0xFF;
    hash *= 1099511628211ULL;
  };
  std::set<std::string> entities;
  size_t pairs = 0;
  for (const auto &[lexeme, names] : index.lexemes()) {
    for (const std::string &n : names) {
      mix(lexeme);
      mix(n);
      entities.insert(n);
      ++pairs;
    }
  }
  char digest[17];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(hash));
  nlohmann::ordered_json j;
  j["format"] = "nlq-index/1";
  j["entities"] = entities.size();
  j["lexemes"] = index.lexemes().size();
  j["pairs"] = pairs;
  j["trigrams"] = index.trigrams().size();
  j["max_words"] = index.max_words();
  j["checksum"] = digest;
  return j.dump(2) + "\n";
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace nlq
