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

// Query generation from enriched entities, and renderers for the result.

#ifndef NLQ_QUERYGEN_H_
#define NLQ_QUERYGEN_H_

#include <optional>
#include <string>
#include <vector>

#include "nlq/enrich.h"
#include "nlq/error.h"
#include "nlq/lexicon.h"
#include "nlq/logic.h"
#include "nlq/parse.h"

namespace nlq {

// The solar variable.
inline const Variable kSolarVariable{"x"};

// y1, y2, ... in allocation order.
class VariableFactory {
 public:
  Variable Next() { return Variable{"y" + std::to_string(++count_)}; }
  size_t count() const { return count_; }

 private:
  size_t count_ = 0;
};

// The atom over PredE(db_type) with `entity` at the bound position and the
// solar variable elsewhere. Lexical value types without a binding produce no
// atom; any other unbound type throws kUnknownDbType.
std::optional<Atom> BuildAtom(const std::string &db_type,
                              const Variable &entity,
                              const BindingTable &bindings);

// (entity op value)
ComparisonAtom BuildAtomOp(const Value &value, const Variable &entity,
                           CompOp op);

// One conjunct list to be appended to a rule body.
struct Part {
  std::vector<Atom> atoms;
  std::vector<ComparisonAtom> comparisons;
};

// Splits an enriched entity into parts: each Context tuple with each
// same-valued non-context tuple it types, then every remaining tuple alone.
// Lists that would contain no relational atom are dropped.
std::vector<Part> BuildParts(const EnrichedEntity &entity,
                             VariableFactory &variables,
                             const BindingTable &bindings,
                             Diagnostics *diagnostics);

// Appends a part to a rule, skipping atoms already present.
QueryRule BuildNewQuery(const QueryRule &rule, const Part &part);

// Starts from q(x) :- A0 over the solar-class and multiplies the rule set by
// the parts of every other entity, in order.
DBQuery EntitiesToQueries(const EnrichedEntity &solar,
                          const std::vector<EnrichedEntity> &entities,
                          const BindingTable &bindings,
                          Diagnostics *diagnostics);

// The context entity naming the class the query asks for: one with a value
// typed by a unary predicate, preferring the object of the leading verb (or
// the root itself), else the earliest. Throws kNoSolarClass.
size_t SelectSolar(const std::vector<SimpleEntity> &entities,
                   const std::vector<EntityClass> &classes,
                   const DependencyTree &tree, const AuxTable &aux,
                   const BindingTable &bindings);

enum class QueryFormat { kDatalog, kSparql, kJson };

// Throws kConfig for an unknown name.
QueryFormat ParseQueryFormat(std::string_view name);

// One rule per line.
std::string RenderDatalog(const DBQuery &query);
// One SELECT; several rules become a UNION of groups.
std::string RenderSparql(const DBQuery &query);
std::string RenderJson(const DBQuery &query);
std::string Render(const DBQuery &query, QueryFormat format);

}  // namespace nlq

#endif  // NLQ_QUERYGEN_H_
