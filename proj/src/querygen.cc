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

#include "nlq/querygen.h"

#include <algorithm>

#include "json.hpp"

namespace nlq {

namespace {

bool HasAtom(const std::string &db_type, const BindingTable &bindings) {
  if (bindings.Find(db_type)) return true;
  if (IsLexicalValueType(db_type)) return false;
  bindings.PredE(db_type);  // throws kUnknownDbType
  return true;
}

std::string EntityName(const Value &v) {
  if (const auto *e = std::get_if<EntityId>(&v)) return e->name;
  return Render(v);
}

std::string SparqlIri(const std::string &name) {
  if (!name.empty() && name[0] == ':') return name;
  return ":" + name;
}

std::string SparqlValue(const Value &v) {
  switch (TypeOf(v)) {
    case ValueType::kEntity:
      return SparqlIri(std::get<EntityId>(v).name);
    case ValueType::kText:
      return Render(v);
    case ValueType::kNumber:
      return Render(v);
    case ValueType::kDate:
      return "\"" + Render(v) + "\"^^xsd:date";
  }
  return Render(v);
}

std::string SparqlTerm(const Term &t) {
  if (const auto *var = std::get_if<Variable>(&t)) return "?" + var->name;
  return SparqlValue(std::get<Value>(t));
}

std::string SparqlGroup(const QueryRule &rule) {
  std::vector<std::string> parts;
  for (const Atom &a : rule.body) {
    if (a.args.size() == 1) {
      parts.push_back(SparqlTerm(a.args[0]) + " a " + SparqlIri(a.predicate));
    } else {
      parts.push_back(SparqlTerm(a.args[0]) + " " + SparqlIri(a.predicate) +
                      " " + SparqlTerm(a.args[1]));
    }
  }
  std::string out = "{ ";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += " . ";
    out += parts[i];
  }
  for (const ComparisonAtom &c : rule.comparisons) {
    out += " FILTER (?" + c.left.name + " " + CompOpSymbol(c.op) + " " +
           SparqlValue(c.right) + ")";
  }
  return out + " }";
}

nlohmann::ordered_json JsonValue(const Value &v) {
  nlohmann::ordered_json j;
  j["type"] = ValueTypeName(TypeOf(v));
  switch (TypeOf(v)) {
    case ValueType::kNumber:
      j["value"] = std::get<Number>(v).value;
      break;
    case ValueType::kText:
      j["value"] = std::get<Text>(v).value;
      break;
    default:
      j["value"] = Render(v);
  }
  return j;
}

nlohmann::ordered_json JsonAtom(const Atom &a) {
  nlohmann::ordered_json j;
  j["predicate"] = a.predicate;
  j["args"] = nlohmann::ordered_json::array();
  for (const Term &t : a.args) {
    if (const auto *var = std::get_if<Variable>(&t)) {
      j["args"].push_back({{"var", var->name}});
    } else {
      j["args"].push_back(JsonValue(std::get<Value>(t)));
    }
  }
  return j;
}

}  // namespace

std::optional<Atom> BuildAtom(const std::string &db_type,
                              const Variable &entity,
                              const BindingTable &bindings) {
  const PredicateBinding *b = bindings.Find(db_type);
  if (b == nullptr) {
    if (IsLexicalValueType(db_type)) return std::nullopt;
    b = &bindings.PredE(db_type);
  }
  Atom atom;
  atom.predicate = b->predicate;
  for (size_t i = 0; i < b->arity; ++i) {
    atom.args.push_back(i == b->entity_position ? entity : kSolarVariable);
  }
  return atom;
}

ComparisonAtom BuildAtomOp(const Value &value, const Variable &entity,
                           CompOp op) {
  return ComparisonAtom{entity, op, value};
}

std::vector<Part> BuildParts(const EnrichedEntity &entity,
                             VariableFactory &variables,
                             const BindingTable &bindings,
                             Diagnostics *diagnostics) {
  const std::string context(kContextType);
  std::vector<Part> parts;
  std::set<EnrichedTuple> treated;
  auto emit = [&](const std::vector<const EnrichedTuple *> &typed,
                  const EnrichedTuple &t) {
    bool relational = false;
    for (const EnrichedTuple *p : typed) {
      relational = HasAtom(p->db_type, bindings) || relational;
    }
    if (!relational) {
      if (diagnostics) {
        diagnostics->Add("tuple " + ToString(t) +
                         " yields no relational atom; dropped");
      }
      return;
    }
    Variable y = variables.Next();
    Part part;
    for (const EnrichedTuple *p : typed) {
      if (auto a = BuildAtom(p->db_type, y, bindings)) {
        part.atoms.push_back(std::move(*a));
      }
    }
    part.comparisons.push_back(BuildAtomOp(t.value, y, t.op));
    parts.push_back(std::move(part));
  };

  for (const EnrichedTuple &t : entity.tuples) {
    if (t.lex_type != context) continue;
    // one list per typed reading of the value
    bool paired = false;
    for (const EnrichedTuple &u : entity.tuples) {
      if (u.value == t.value && u.lex_type != context) {
        treated.insert(u);
        emit({&u, &t}, t);
        paired = true;
      }
    }
    treated.insert(t);
    if (!paired) emit({&t}, t);
  }
  for (const EnrichedTuple &t : entity.tuples) {
    if (treated.count(t)) continue;
    emit({&t}, t);
  }
  return parts;
}

QueryRule BuildNewQuery(const QueryRule &rule, const Part &part) {
  QueryRule out = rule;
  for (const Atom &a : part.atoms) {
    if (std::find(out.body.begin(), out.body.end(), a) == out.body.end()) {
      out.body.push_back(a);
    }
  }
  for (const ComparisonAtom &c : part.comparisons) {
    if (std::find(out.comparisons.begin(), out.comparisons.end(), c) ==
        out.comparisons.end()) {
      out.comparisons.push_back(c);
    }
  }
  return out;
}

DBQuery EntitiesToQueries(const EnrichedEntity &solar,
                          const std::vector<EnrichedEntity> &entities,
                          const BindingTable &bindings,
                          Diagnostics *diagnostics) {
  std::vector<const EnrichedTuple *> unary;
  for (const EnrichedTuple &t : solar.tuples) {
    const PredicateBinding *b = bindings.Find(t.db_type);
    if (b && b->arity == 1) unary.push_back(&t);
  }
  if (unary.empty()) {
    throw Error(ErrorCode::kNoSolarClass,
                "solar entity " + ToString(solar) +
                    " has no DBType bound to a unary predicate");
  }
  if (unary.size() > 1 && diagnostics) {
    diagnostics->Add("solar entity has several class types; using " +
                     unary.front()->db_type);
  }
  QueryRule initial;
  initial.head = Atom{"q", {kSolarVariable}};
  initial.body.push_back(*BuildAtom(unary.front()->db_type, kSolarVariable, bindings));

  std::vector<QueryRule> rules = {initial};
  VariableFactory variables;
  for (const EnrichedEntity &e : entities) {
    std::vector<Part> parts = BuildParts(e, variables, bindings, diagnostics);
    if (parts.empty()) {
      if (diagnostics) {
        diagnostics->Add("entity " + ToString(e) + " contributes no atoms; skipped");
      }
      continue;
    }
    std::vector<QueryRule> next;
    for (const QueryRule &q : rules) {
      for (const Part &l : parts) next.push_back(BuildNewQuery(q, l));
    }
    rules = std::move(next);
  }
  DBQuery query;
  for (QueryRule &r : rules) {
    if (std::find(query.rules.begin(), query.rules.end(), r) == query.rules.end()) {
      query.rules.push_back(std::move(r));
    }
  }
  CheckSafe(query);
  return query;
}

size_t SelectSolar(const std::vector<SimpleEntity> &entities,
                   const std::vector<EntityClass> &classes,
                   const DependencyTree &tree, const AuxTable &aux,
                   const BindingTable &bindings) {
  std::optional<size_t> earliest, object;
  for (size_t i = 0; i < entities.size(); ++i) {
    if (classes[i] != EntityClass::kContext &&
        classes[i] != EntityClass::kSolar) {
      continue;
    }
    bool is_class = false;
    for (const Value &v : entities[i].values) {
      for (const AuxRecord &r : aux.Records(EntityName(v))) {
        const PredicateBinding *b = bindings.Find(r.db_type);
        if (b && b->arity == 1) is_class = true;
      }
    }
    if (!is_class) continue;
    if (!earliest) earliest = i;
    if (object || tree.empty()) continue;
    for (size_t k : tree.NodesInSpan(entities[i].start, entities[i].end)) {
      const DependencyNode &n = tree.node(k);
      bool is_root = k == tree.root();
      bool of_root = n.head == tree.root() &&
                     (n.label == "dobj" || n.label == "obj");
      if (is_root || of_root) object = i;
    }
  }
  if (object) return *object;
  if (earliest) return *earliest;
  throw Error(ErrorCode::kNoSolarClass,
              "no context entity names a class bound to a unary predicate");
}

QueryFormat ParseQueryFormat(std::string_view name) {
  if (name == "datalog") return QueryFormat::kDatalog;
  if (name == "sparql") return QueryFormat::kSparql;
  if (name == "json") return QueryFormat::kJson;
  throw Error(ErrorCode::kConfig, "unknown query format '" + std::string(name) +
                                      "' (datalog, sparql, json)");
}

std::string RenderDatalog(const DBQuery &query) {
  std::string out;
  for (const QueryRule &r : query.rules) out += ToString(r) + "\n";
  return out;
}

std::string RenderSparql(const DBQuery &query) {
  bool dates = false;
  for (const QueryRule &r : query.rules) {
    for (const ComparisonAtom &c : r.comparisons) {
      dates = dates || TypeOf(c.right) == ValueType::kDate;
    }
  }
  std::string out = "PREFIX : <http://example.org/nlq#>\n";
  if (dates) out += "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\n";
  out += "SELECT DISTINCT ?x WHERE ";
  if (query.rules.size() == 1) {
    out += SparqlGroup(query.rules[0]);
  } else {
    out += "{ ";
    for (size_t i = 0; i < query.rules.size(); ++i) {
      if (i > 0) out += " UNION ";
      out += SparqlGroup(query.rules[i]);
    }
    out += " }";
  }
  return out + "\n";
}

std::string RenderJson(const DBQuery &query) {
  nlohmann::ordered_json j;
  j["rules"] = nlohmann::ordered_json::array();
  for (const QueryRule &r : query.rules) {
    nlohmann::ordered_json rule;
    rule["head"] = JsonAtom(r.head);
    rule["body"] = nlohmann::ordered_json::array();
    for (const Atom &a : r.body) rule["body"].push_back(JsonAtom(a));
    rule["comparisons"] = nlohmann::ordered_json::array();
    for (const ComparisonAtom &c : r.comparisons) {
      rule["comparisons"].push_back({{"var", c.left.name},
                                     {"op", CompOpSymbol(c.op)},
                                     {"value", JsonValue(c.right)}});
    }
    j["rules"].push_back(std::move(rule));
  }
  return j.dump(2) + "\n";
}

std::string Render(const DBQuery &query, QueryFormat format) {
  switch (format) {
    case QueryFormat::kDatalog:
      return RenderDatalog(query);
    case QueryFormat::kSparql:
      return RenderSparql(query);
    case QueryFormat::kJson:
      return RenderJson(query);
  }
  return RenderDatalog(query);
}

}  // namespace nlq
