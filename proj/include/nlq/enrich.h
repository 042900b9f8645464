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

// Entity extraction and enrichment.
//
// A simple entity is a detected span abstracted as (V, T, m): candidate
// values, their lexical types, and the mapping from each value to its types.
// Simple entities are classified as reference, operator or context entities
// and then evolve into enriched entities: relations over
// [EntityValue, DBType, LexType, op]. Ambiguity is never resolved here; every
// candidate value and type survives as its own tuple.

#ifndef NLQ_ENRICH_H_
#define NLQ_ENRICH_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlq/error.h"
#include "nlq/grammar.h"
#include "nlq/lexicon.h"
#include "nlq/logic.h"
#include "nlq/parse.h"

namespace nlq {

struct SimpleEntity {
  std::set<Value> values;                      // V
  std::set<std::string> lex_types;             // T
  std::map<Value, std::set<std::string>> mapping;  // m
  size_t start = 0;  // byte span in the query text
  size_t end = 0;
  std::string surface;
  // Which detectors contributed, e.g. "lexicon", "fuzzy", "grammar:number".
  std::set<std::string> sources;

  // Adds v with the given types to V, T and m.
  void Add(const Value &v, const std::set<std::string> &types);
  // Union of V, T and m; the span becomes the hull of both.
  void MergeFrom(const SimpleEntity &other);
};

enum class EntityClass { kReference, kOperator, kContext, kSolar };

const char *EntityClassName(EntityClass c);

struct EnrichedTuple {
  Value value;
  std::string db_type;
  std::string lex_type;
  CompOp op = CompOp::kEq;
  friend auto operator<=>(const EnrichedTuple &, const EnrichedTuple &) =
      default;
};

struct EnrichedEntity {
  std::set<EnrichedTuple> tuples;
  size_t start = 0;  // span of the reference it grew from
  size_t end = 0;
  std::vector<size_t> provenance;  // indices of contributing simple entities
};

// Tuple-set equality, ignoring provenance.
bool SameTuples(const EnrichedEntity &a, const EnrichedEntity &b);

// Lexical value types produced by grammars; they have no AuxSt record and
// type themselves.
bool IsLexicalValueType(std::string_view type);

struct ExtractionOptions {
  double fuzzy_threshold = InverseIndex::kDefaultThreshold;
  // Fuzzy lookup is skipped for spans shorter than this many code points.
  size_t min_fuzzy_length = 4;
};

// Lexicon and grammar detections are computed independently; detections
// with overlapping spans are replaced by one entity holding their union.
// Output is ordered by span start.
std::vector<SimpleEntity> ExtractEntities(std::string_view text,
                                          const std::vector<Token> &tokens,
                                          const InverseIndex &index,
                                          const GrammarRegistry &grammars,
                                          const AuxTable &aux,
                                          const OperatorDictionary &operators,
                                          const ExtractionOptions &options,
                                          Diagnostics *diagnostics);

// Operator > Context > Reference. Solar is assigned separately.
EntityClass Classify(const SimpleEntity &entity,
                     const OperatorDictionary &operators,
                     Diagnostics *diagnostics = nullptr);

// (v, dbtype, ltype, =) for every AuxSt record of every value; values
// without a record type themselves.
EnrichedEntity Extend(const SimpleEntity &entity, const AuxTable &aux);

// contextEnrichment: for each reference value v its own typed tuples, plus
// (v, dbtype(u), ltype(u), op) for every context value u.
EnrichedEntity ContextEnrichment(const SimpleEntity &context,
                                 const SimpleEntity &reference, CompOp op,
                                 const AuxTable &aux);

// Installs the operator's comparator on every tuple. Throws kUnknownOperator
// when no value of `op_entity` is in the dictionary.
EnrichedEntity OperatorEnrichment(const SimpleEntity &op_entity,
                                  const EnrichedEntity &reference,
                                  const OperatorDictionary &operators);

enum class Connective { kAnd, kOr };

// Entities of one class linked by conj edges, with the coordinating words
// found between them.
struct ConjunctionGroup {
  std::vector<size_t> members;  // entity indices, in text order
  bool has_and = false;
  bool has_or = false;
  // Mixed and/or widens to or.
  Connective effective() const {
    return has_or ? Connective::kOr : Connective::kAnd;
  }
};

// Groups entities of the same class whose LexTypes intersect and whose
// nodes are joined by conj edges.
std::vector<ConjunctionGroup> FindConjunctions(
    const std::vector<SimpleEntity> &entities,
    const std::vector<EntityClass> &classes, const DependencyTree &tree);

// Or-groups (including widened mixed groups) merge into the union of their
// tuple sets; and-groups and ungrouped entities stay separate. `groups`
// index into `entities`. Output keeps text order.
std::vector<EnrichedEntity> ApplyConjunctions(
    const std::vector<EnrichedEntity> &entities,
    const std::vector<ConjunctionGroup> &groups);

struct Attachment {
  // reference index -> context entity indices (more than one for an
  // and-linked context group).
  std::map<size_t, std::vector<size_t>> contexts;
  // reference index -> operator entity index.
  std::map<size_t, size_t> operators;
  // Context groups joined by "or", merged before enrichment.
  std::vector<ConjunctionGroup> context_groups;
};

// An operator attaches to the nearest reference to its right within four
// tokens. A context attaches to the nearest unclaimed reference after it,
// looking past operators but stopping at another context; failing that, to
// the nearest preceding reference if that one is unclaimed. Attachments
// propagate to every member of the reference's conjunction group.
Attachment Attach(const std::vector<SimpleEntity> &entities,
                  const std::vector<EntityClass> &classes,
                  const std::vector<ConjunctionGroup> &groups,
                  const DependencyTree &tree, Diagnostics *diagnostics);

struct EnrichmentTables {
  const AuxTable &aux;
  const OperatorDictionary &operators;
};

struct Enrichment {
  std::vector<EntityClass> classes;
  std::vector<ConjunctionGroup> groups;
  Attachment attachment;
  EnrichedEntity solar;
  std::vector<EnrichedEntity> entities;  // non-solar, text order
};

// Runs attachment, context and operator enrichment and the conjunction rules
// over classified entities. `solar` indexes the solar-class entity.
Enrichment Enrich(const std::vector<SimpleEntity> &entities,
                  std::vector<EntityClass> classes, size_t solar,
                  const DependencyTree &tree, const EnrichmentTables &tables,
                  Diagnostics *diagnostics);

std::string ToString(const EnrichedTuple &t);
std::string ToString(const EnrichedEntity &e);

}  // namespace nlq

#endif  // NLQ_ENRICH_H_
