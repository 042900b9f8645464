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

// Lexicons, the inverse index over their lexemes, and the auxiliary tables
// that type entity names (AuxSt), map database types to predicates and map
// operator names to comparators.

#ifndef NLQ_LEXICON_H_
#define NLQ_LEXICON_H_

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlq/logic.h"

namespace nlq {

// Lexical type carried by context entities.
inline constexpr std::string_view kContextType = "Context";
inline constexpr std::string_view kOperatorType = "Operator";

struct LexiconEntry {
  std::string entity_name;
  std::set<std::string> lexemes;  // normalized
  friend bool operator==(const LexiconEntry &, const LexiconEntry &) = default;
};

using Lexicon = std::vector<LexiconEntry>;

// Merges entries with the same entity name and sorts by name.
Lexicon MergeLexicons(const std::vector<Lexicon> &parts);

struct AuxRecord {
  std::string entity_name;
  std::string lex_type;
  std::string db_type;
  friend auto operator<=>(const AuxRecord &, const AuxRecord &) = default;
};

// ltype/dbtype lookups. Several records per name are kept: ambiguity is
// never resolved here.
class AuxTable {
 public:
  // Throws kConfig when (entity_name, lex_type) is already present.
  void Add(AuxRecord record);

  std::vector<AuxRecord> Records(const std::string &entity_name) const;
  std::set<std::string> LexTypes(const std::string &entity_name) const;
  std::set<std::string> DbTypes(const std::string &entity_name) const;
  bool Contains(const std::string &entity_name) const;
  const std::vector<AuxRecord> &all() const { return records_; }

 private:
  std::vector<AuxRecord> records_;
  std::multimap<std::string, size_t> by_name_;
};

struct PredicateBinding {
  std::string db_type;
  std::string predicate;
  size_t arity = 1;
  size_t entity_position = 0;  // 0-based
  friend bool operator==(const PredicateBinding &,
                         const PredicateBinding &) = default;
};

class BindingTable {
 public:
  // Throws kConfig on a duplicate DBType or entity_position >= arity.
  void Add(PredicateBinding binding);
  // Throws kUnknownDbType for an undeclared type.
  const PredicateBinding &PredE(const std::string &db_type) const;
  const PredicateBinding *Find(const std::string &db_type) const;
  const std::map<std::string, PredicateBinding> &all() const {
    return bindings_;
  }

 private:
  std::map<std::string, PredicateBinding> bindings_;
};

struct OperatorEntry {
  std::string entity_name;
  CompOp comparator = CompOp::kEq;
};

class OperatorDictionary {
 public:
  void Add(OperatorEntry entry);
  std::optional<CompOp> Find(const std::string &entity_name) const;
  bool Contains(const std::string &entity_name) const {
    return ops_.count(entity_name) > 0;
  }

 private:
  std::map<std::string, CompOp> ops_;
};

// Character trigrams over the code points of `normalized`, padded with two
// spaces on each side.
std::set<std::u32string> Trigrams(std::string_view normalized);

// Dice coefficient 2|A∩B| / (|A|+|B|) over padded trigram sets. Symmetric and
// 1.0 for identical strings.
double TrigramSimilarity(std::string_view a, std::string_view b);

struct LookupMatch {
  std::string entity_name;
  std::string lexeme;
  double score = 0;
  friend bool operator==(const LookupMatch &, const LookupMatch &) = default;
};

// Exact lexeme table plus a trigram table for fuzzy lookup. Immutable once
// built; contents depend only on the set of (entity, lexeme) pairs.
class InverseIndex {
 public:
  static constexpr double kDefaultThreshold = 0.7;

  InverseIndex() = default;
  explicit InverseIndex(const Lexicon &lexicon);

  // Exact hits score 1.0 and suppress fuzzy results. Otherwise every lexeme
  // scoring at least `threshold` is returned. Sorted by descending score,
  // then lexeme, then entity.
  std::vector<LookupMatch> Lookup(std::string_view span,
                                  double threshold) const;

  std::set<std::string> ExactEntities(const std::string &lexeme) const;

  const std::map<std::string, std::set<std::string>> &lexemes() const {
    return exact_;
  }
  const std::map<std::u32string, std::set<std::string>> &trigrams() const {
    return trigrams_;
  }
  // Largest number of space-separated words in any lexeme.
  size_t max_words() const { return max_words_; }
  bool empty() const { return exact_.empty(); }

 private:
  std::map<std::string, std::set<std::string>> exact_;
  std::map<std::u32string, std::set<std::string>> trigrams_;
  std::map<std::string, size_t> trigram_count_;
  size_t max_words_ = 0;
};

// Lexeme templates applied to the name values of one class of entities.
enum class LexemeTemplate {
  kFull,      // whole name
  kTokens,    // each word of the name
  kFirst,     // first word
  kLast,      // last word
  kReversed,  // words in reverse order
  kId,        // entity id without ':' and with '_' read as a space
};

struct GenerationRule {
  std::string class_predicate;  // unary
  std::string name_predicate;   // binary (entity, name) or empty
  std::vector<LexemeTemplate> templates;
};

// "<class_predicate> <name_predicate|-> <template>..." per line.
std::vector<GenerationRule> ParseGenerationConfig(std::string_view source);

// One entry per entity id found in a configured class predicate. Throws
// kConfig when a non-empty store lacks a configured predicate.
Lexicon GenerateLexicons(const FactStore &store,
                         const std::vector<GenerationRule> &rules);

// Table loaders; each throws kConfig naming the line on malformed input.
Lexicon ParseLexiconTsv(std::string_view source);
AuxTable ParseAuxTsv(std::string_view source);
BindingTable ParseBindingsTsv(std::string_view source);
OperatorDictionary ParseOperatorsTsv(std::string_view source);

void WriteLexiconTsv(const Lexicon &lexicon, std::ostream &out);
// Regenerable summary of an index (counts plus a content checksum), JSON.
std::string IndexManifest(const InverseIndex &index);

// Reads a whole file; throws kIo.
std::string ReadFile(const std::string &path);

}  // namespace nlq

#endif  // NLQ_LEXICON_H_
