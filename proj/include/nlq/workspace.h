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

// A loaded workspace and the end-to-end pipeline over it:
// tokenize -> parse -> extract -> classify -> solar -> enrich -> query.

#ifndef NLQ_WORKSPACE_H_
#define NLQ_WORKSPACE_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nlq/enrich.h"
#include "nlq/error.h"
#include "nlq/evalkit.h"
#include "nlq/grammar.h"
#include "nlq/lexicon.h"
#include "nlq/logic.h"
#include "nlq/parse.h"
#include "nlq/querygen.h"

namespace nlq {

struct WorkspaceFiles {
  std::string facts = "facts.txt";
  std::vector<std::string> lexicons = {"lexicon.tsv", "contexts.tsv"};
  std::string auxst = "auxst.tsv";
  std::string bindings = "bindings.tsv";
  std::string operators = "operators.tsv";
  std::string grammars;  // empty: built-in registry
  std::string lexgen = "lexgen.conf";
  std::string corpus = "corpus.jsonl";
};

struct Analysis {
  std::string text;
  std::vector<Token> tokens;
  DependencyTree tree;
  std::vector<SimpleEntity> entities;
  std::vector<EntityClass> classes;
  size_t solar = 0;
  Enrichment enrichment;
  DBQuery query;
  // Parts of each non-solar enriched entity.
  std::vector<std::vector<Part>> parts;
  Diagnostics diagnostics;

  // Every enriched entity, solar first.
  std::vector<EnrichedEntity> AllEnriched() const;
  // Tokens, tree, entities, enriched entities and Parts decisions.
  std::string ExplainJson() const;
};

class Workspace {
 public:
  Workspace() = default;

  // `path` is a directory, optionally holding workspace.json, or the path of
  // a workspace.json manifest. Relative paths resolve against its directory.
  // Throws kIo / kConfig / kParse.
  static Workspace Load(const std::string &path);

  FactStore store;
  Lexicon lexicon;
  InverseIndex index;
  AuxTable aux;
  BindingTable bindings;
  OperatorDictionary operators;
  GrammarRegistry grammars = GrammarRegistry::Default();
  ExtractionOptions extraction;
  std::string root;  // directory the files were loaded from
  WorkspaceFiles files;

  // Builds the index from `lexicon`; call after editing it.
  void Reindex() { index = InverseIndex(lexicon); }

  // Runs the pipeline. A supplied tree replaces the built-in parse; it is
  // aligned to `text` first. Throws kNoSolarClass and other pipeline errors.
  Analysis Analyze(std::string_view text,
                   const DependencyTree *tree = nullptr) const;

  DBQuery Compile(std::string_view text) const { return Analyze(text).query; }

  std::set<GoldPair> Predict(std::string_view text,
                             bool one_value_per_entity = false) const;

  std::string Resolve(const std::string &file) const;
};

struct CorpusReport {
  Metrics metrics;
  size_t compiled_checked = 0;  // items carrying an expected query
  size_t compiled_matched = 0;  // alpha-equivalent to it
  std::vector<std::string> mismatches;  // text of items that did not match
};

// Entity metrics plus the exact-match rate of compiled queries.
CorpusReport EvaluateWorkspace(const Workspace &workspace,
                               const std::vector<GoldAnnotation> &corpus,
                               bool one_value_per_entity = false);

std::string RenderReport(const CorpusReport &report);
std::string ReportJson(const CorpusReport &report);

// Sorted answer lines, values in facts syntax, comma separated.
std::vector<std::string> FormatAnswers(const std::set<Tuple> &answers);

}  // namespace nlq

#endif  // NLQ_WORKSPACE_H_
