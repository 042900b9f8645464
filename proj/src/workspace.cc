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

#include "nlq/workspace.h"

#include <filesystem>

#include "json.hpp"

namespace nlq {

namespace fs = std::filesystem;

namespace {

using json = nlohmann::ordered_json;

json TupleJson(const EnrichedTuple &t) {
  return json{{"value", Render(t.value)},
              {"db_type", t.db_type},
              {"lex_type", t.lex_type},
              {"op", CompOpSymbol(t.op)}};
}

json EnrichedJson(const EnrichedEntity &e) {
  json j;
  j["span"] = {e.start, e.end};
  j["from"] = e.provenance;
  j["tuples"] = json::array();
  for (const EnrichedTuple &t : e.tuples) j["tuples"].push_back(TupleJson(t));
  return j;
}

std::string ReadIfPresent(const std::string &path, bool required) {
  if (!required && !fs::exists(path)) return "";
  return ReadFile(path);
}

}  // namespace

std::vector<EnrichedEntity> Analysis::AllEnriched() const {
  std::vector<EnrichedEntity> out = {enrichment.solar};
  out.insert(out.end(), enrichment.entities.begin(), enrichment.entities.end());
  return out;
}

std::string Analysis::ExplainJson() const {
  json j;
  j["text"] = text;
  j["tokens"] = json::array();
  for (const Token &t : tokens) {
    j["tokens"].push_back({{"i", t.index}, {"surface", t.surface},
                           {"span", {t.start, t.end}}});
  }
  j["tree"] = json::array();
  for (size_t i = 0; i < tree.size(); ++i) {
    const DependencyNode &n = tree.node(i);
    j["tree"].push_back({{"i", i}, {"form", n.token.surface}, {"pos", n.pos},
                         {"head", n.head}, {"label", n.label}});
  }
  j["entities"] = json::array();
  for (size_t i = 0; i < entities.size(); ++i) {
    const SimpleEntity &e = entities[i];
    json values = json::array();
    for (const auto &[v, types] : e.mapping) {
      values.push_back({{"value", Render(v)}, {"types", types}});
    }
    j["entities"].push_back({{"i", i},
                             {"surface", e.surface},
                             {"span", {e.start, e.end}},
                             {"class", EntityClassName(classes[i])},
                             {"sources", e.sources},
                             {"values", values}});
  }
  j["groups"] = json::array();
  for (const ConjunctionGroup &g : enrichment.groups) {
    j["groups"].push_back(
        {{"members", g.members},
         {"connective", g.effective() == Connective::kOr ? "or" : "and"}});
  }
  j["solar"] = EnrichedJson(enrichment.solar);
  j["enriched"] = json::array();
  for (const EnrichedEntity &e : enrichment.entities) {
    j["enriched"].push_back(EnrichedJson(e));
  }
  j["parts"] = json::array();
  for (const std::vector<Part> &entity_parts : parts) {
    json lists = json::array();
    for (const Part &p : entity_parts) {
      json l = json::array();
      for (const Atom &a : p.atoms) l.push_back(ToString(a));
      for (const ComparisonAtom &c : p.comparisons) l.push_back(ToString(c));
      lists.push_back(l);
    }
    j["parts"].push_back(lists);
  }
  j["rules"] = json::array();
  for (const QueryRule &r : query.rules) j["rules"].push_back(ToString(r));
  j["diagnostics"] = diagnostics.messages();
  return j.dump();
}

std::string Workspace::Resolve(const std::string &file) const {
  if (file.empty()) return file;
  fs::path p(file);
  if (p.is_absolute() || root.empty()) return p.string();
  return (fs::path(root) / p).string();
}

Workspace Workspace::Load(const std::string &path) {
  Workspace ws;
  fs::path manifest;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    ws.root = path;
    manifest = fs::path(path) / "workspace.json";
  } else if (fs::exists(path, ec)) {
    manifest = path;
    ws.root = fs::path(path).parent_path().string();
  } else {
    throw Error(ErrorCode::kIo, "workspace not found: " + path);
  }
  if (fs::exists(manifest)) {
    json j;
    try {
      j = json::parse(ReadFile(manifest.string()));
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kConfig,
                  manifest.string() + ": " + std::string(e.what()));
    }
    auto str = [&](const char *key, std::string *out) {
      if (!j.contains(key)) return;
      if (!j[key].is_string()) {
        throw Error(ErrorCode::kConfig, manifest.string() + ": \"" + key +
                                            "\" must be a string");
      }
      *out = j[key].get<std::string>();
    };
    str("facts", &ws.files.facts);
    str("auxst", &ws.files.auxst);
    str("bindings", &ws.files.bindings);
    str("operators", &ws.files.operators);
    str("grammars", &ws.files.grammars);
    str("lexgen", &ws.files.lexgen);
    str("corpus", &ws.files.corpus);
    if (j.contains("lexicons")) {
      if (!j["lexicons"].is_array()) {
        throw Error(ErrorCode::kConfig,
                    manifest.string() + ": \"lexicons\" must be an array");
      }
      ws.files.lexicons.clear();
      for (const auto &l : j["lexicons"]) {
        ws.files.lexicons.push_back(l.get<std::string>());
      }
    }
    if (j.contains("fuzzy")) {
      if (!j["fuzzy"].is_number() || j["fuzzy"].get<double>() < 0 ||
          j["fuzzy"].get<double>() > 1) {
        throw Error(ErrorCode::kConfig,
                    manifest.string() + ": \"fuzzy\" must be a number in [0, 1]");
      }
      ws.extraction.fuzzy_threshold = j["fuzzy"].get<double>();
    }
  }

  ws.store = LoadFactsFile(ws.Resolve(ws.files.facts));
  std::vector<Lexicon> parts;
  for (const std::string &l : ws.files.lexicons) {
    parts.push_back(ParseLexiconTsv(ReadFile(ws.Resolve(l))));
  }
  ws.lexicon = MergeLexicons(parts);
  ws.aux = ParseAuxTsv(ReadFile(ws.Resolve(ws.files.auxst)));
  ws.bindings = ParseBindingsTsv(ReadFile(ws.Resolve(ws.files.bindings)));
  ws.operators =
      ParseOperatorsTsv(ReadIfPresent(ws.Resolve(ws.files.operators), false));
  if (!ws.files.grammars.empty()) {
    ws.grammars = GrammarRegistry::Parse(ReadFile(ws.Resolve(ws.files.grammars)));
  }
  ws.Reindex();
  return ws;
}

Analysis Workspace::Analyze(std::string_view text,
                            const DependencyTree *tree) const {
  Analysis a;
  a.text = std::string(text);
  a.tokens = Tokenize(text);
  if (tree) {
    a.tree = *tree;
    a.tree.AlignTo(text);
  } else {
    a.tree = ShallowParse(a.tokens);
  }
  a.entities = ExtractEntities(text, a.tokens, index, grammars, aux, operators,
                               extraction, &a.diagnostics);
  for (const SimpleEntity &e : a.entities) {
    a.classes.push_back(Classify(e, operators, &a.diagnostics));
  }
  a.solar = SelectSolar(a.entities, a.classes, a.tree, aux, bindings);
  a.enrichment = Enrich(a.entities, a.classes, a.solar, a.tree,
                        EnrichmentTables{aux, operators}, &a.diagnostics);
  a.classes = a.enrichment.classes;
  a.query = EntitiesToQueries(a.enrichment.solar, a.enrichment.entities,
                              bindings, &a.diagnostics);
  // Parts decisions, replayed with the same variable sequence.
  VariableFactory vars;
  Diagnostics scratch;
  for (const EnrichedEntity &e : a.enrichment.entities) {
    a.parts.push_back(BuildParts(e, vars, bindings, &scratch));
  }
  return a;
}

std::set<GoldPair> Workspace::Predict(std::string_view text,
                                      bool one_value_per_entity) const {
  Analysis a = Analyze(text);
  return PredictedPairs(a.AllEnriched(), one_value_per_entity);
}

CorpusReport EvaluateWorkspace(const Workspace &workspace,
                               const std::vector<GoldAnnotation> &corpus,
                               bool one_value_per_entity) {
  CorpusReport report;
  report.metrics = EvaluateCorpus(corpus, [&](const GoldAnnotation &g) {
    return workspace.Predict(g.text, one_value_per_entity);
  });
  for (const GoldAnnotation &g : corpus) {
    if (!g.query) continue;
    ++report.compiled_checked;
    bool match = false;
    try {
      match = AlphaEquivalent(workspace.Compile(g.text), ParseRules(*g.query));
    } catch (const Error &) {
      match = false;
    }
    if (match) {
      ++report.compiled_matched;
    } else {
      report.mismatches.push_back(g.text);
    }
  }
  return report;
}

std::string RenderReport(const CorpusReport &report) {
  std::string out = RenderMetricsTable(report.metrics);
  if (report.compiled_checked > 0) {
    out += "\nexact-match compilation: " + std::to_string(report.compiled_matched) +
           "/" + std::to_string(report.compiled_checked) + " (" +
           Rational(int64_t(report.compiled_matched),
                    int64_t(report.compiled_checked))
               .Fixed(2) +
           ")\n";
  }
  return out;
}

std::string ReportJson(const CorpusReport &report) {
  json j = json::parse(MetricsJson(report.metrics));
  j["compilation"] = {{"checked", report.compiled_checked},
                      {"matched", report.compiled_matched},
                      {"mismatches", report.mismatches}};
  return j.dump(2) + "\n";
}

std::vector<std::string> FormatAnswers(const std::set<Tuple> &answers) {
  std::vector<std::string> out;
  for (const Tuple &t : answers) {
    std::string line;
    for (size_t i = 0; i < t.size(); ++i) {
      if (i > 0) line += ", ";
      line += Render(t[i]);
    }
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace nlq
