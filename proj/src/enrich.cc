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

#include "nlq/enrich.h"

#include <algorithm>
#include <numeric>

#include "nlq/text.h"

namespace nlq {

namespace {

constexpr double kEps = 1e-12;
// Largest token distance between an operator and its reference.
constexpr size_t kOperatorReach = 4;

struct Detection {
  SimpleEntity entity;
  size_t first = 0;  // token range
  size_t end = 0;
  double score = 1.0;
};

bool Overlaps(size_t a0, size_t a1, size_t b0, size_t b1) {
  return a0 < b1 && b0 < a1;
}

size_t CodepointCount(std::string_view s) {
  return text::Decode(s).size();
}

std::string Name(const Value &v) {
  if (const auto *e = std::get_if<EntityId>(&v)) return e->name;
  return Render(v);
}

// Builds a lexicon detection from the entity names behind a lexeme hit.
std::optional<Detection> FromNames(const std::set<std::string> &names,
                                   const std::vector<Token> &tokens,
                                   size_t first, size_t end, double score,
                                   const char *source, const AuxTable &aux,
                                   const OperatorDictionary &operators,
                                   Diagnostics *diagnostics) {
  Detection d;
  d.first = first;
  d.end = end;
  d.score = score;
  d.entity.start = tokens[first].start;
  d.entity.end = tokens[end - 1].end;
  d.entity.sources.insert(source);
  for (const std::string &name : names) {
    if (aux.Contains(name)) {
      d.entity.Add(EntityId{name}, aux.LexTypes(name));
    } else if (operators.Contains(name)) {
      d.entity.Add(EntityId{name}, {std::string(kOperatorType)});
    } else if (diagnostics) {
      diagnostics->Add("lexicon value " + name +
                       " has no AuxSt record; dropped");
    }
  }
  if (d.entity.values.empty()) return std::nullopt;
  return d;
}

std::vector<Detection> LexiconDetections(std::string_view text,
                                         const std::vector<Token> &tokens,
                                         const InverseIndex &index,
                                         const AuxTable &aux,
                                         const OperatorDictionary &operators,
                                         const ExtractionOptions &options,
                                         Diagnostics *diagnostics) {
  struct Gram {
    size_t first, end;
    std::string norm;
  };
  std::vector<Gram> grams;
  const size_t max_len = std::max<size_t>(index.max_words(), 1);
  for (size_t i = 0; i < tokens.size(); ++i) {
    for (size_t j = i; j < tokens.size() && j - i < max_len; ++j) {
      if (tokens[j].punct || tokens[j].quoted) break;
      std::string_view span =
          text.substr(tokens[i].start, tokens[j].end - tokens[i].start);
      grams.push_back({i, j + 1, text::Normalize(span)});
    }
  }

  std::vector<Detection> exact;
  for (const Gram &g : grams) {
    std::set<std::string> names = index.ExactEntities(g.norm);
    if (names.empty()) continue;
    if (auto d = FromNames(names, tokens, g.first, g.end, 1.0, "lexicon", aux,
                           operators, diagnostics)) {
      exact.push_back(std::move(*d));
    }
  }
  std::vector<Detection> out;
  for (const Detection &d : exact) {
    bool inside = std::any_of(exact.begin(), exact.end(), [&](const Detection &o) {
      return o.first <= d.first && d.end <= o.end &&
             (o.end - o.first) > (d.end - d.first);
    });
    if (!inside) out.push_back(d);
  }

  std::vector<Detection> fuzzy;
  for (const Gram &g : grams) {
    bool near_exact = std::any_of(exact.begin(), exact.end(), [&](const Detection &o) {
      return Overlaps(g.first, g.end, o.first, o.end);
    });
    if (near_exact || CodepointCount(g.norm) < options.min_fuzzy_length) {
      continue;
    }
    std::vector<LookupMatch> hits = index.Lookup(g.norm, options.fuzzy_threshold);
    if (hits.empty()) continue;
    std::set<std::string> names;
    for (const LookupMatch &h : hits) {
      if (h.score + kEps >= hits.front().score) names.insert(h.entity_name);
    }
    if (auto d = FromNames(names, tokens, g.first, g.end, hits.front().score,
                           "fuzzy", aux, operators, diagnostics)) {
      fuzzy.push_back(std::move(*d));
    }
  }
  std::stable_sort(fuzzy.begin(), fuzzy.end(),
                   [](const Detection &a, const Detection &b) {
                     if (a.score != b.score) return a.score > b.score;
                     if (a.end - a.first != b.end - b.first) {
                       return a.end - a.first > b.end - b.first;
                     }
                     return a.first < b.first;
                   });
  std::vector<Detection> accepted;
  for (const Detection &d : fuzzy) {
    bool clash = std::any_of(accepted.begin(), accepted.end(), [&](const Detection &o) {
      return Overlaps(d.first, d.end, o.first, o.end);
    });
    if (!clash) accepted.push_back(d);
  }
  out.insert(out.end(), accepted.begin(), accepted.end());
  return out;
}

// Node range [lo, hi] covered by an entity; nullopt when nothing aligns.
std::optional<std::pair<size_t, size_t>> NodeRange(const DependencyTree &tree,
                                                   const SimpleEntity &e) {
  std::vector<size_t> nodes = tree.NodesInSpan(e.start, e.end);
  if (nodes.empty()) return std::nullopt;
  auto [lo, hi] = std::minmax_element(nodes.begin(), nodes.end());
  return std::make_pair(*lo, *hi);
}

bool Intersects(const std::set<std::string> &a, const std::set<std::string> &b) {
  for (const std::string &s : a) {
    if (b.count(s)) return true;
  }
  return false;
}

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  size_t Find(size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void Join(size_t a, size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<size_t> parent_;
};

// Tuples of one value: its AuxSt records, or its own lexical types.
void AddOwnTuples(const SimpleEntity &e, const Value &v, const AuxTable &aux,
                  CompOp op, EnrichedEntity *out) {
  const std::string name = Name(v);
  if (std::holds_alternative<EntityId>(v) && aux.Contains(name)) {
    for (const AuxRecord &r : aux.Records(name)) {
      out->tuples.insert({v, r.db_type, r.lex_type, op});
    }
    return;
  }
  auto it = e.mapping.find(v);
  if (it == e.mapping.end()) return;
  for (const std::string &t : it->second) out->tuples.insert({v, t, t, op});
}

const ConjunctionGroup *GroupOf(const std::vector<ConjunctionGroup> &groups,
                                size_t entity) {
  for (const ConjunctionGroup &g : groups) {
    if (std::find(g.members.begin(), g.members.end(), entity) != g.members.end()) {
      return &g;
    }
  }
  return nullptr;
}

std::vector<size_t> MembersOf(const std::vector<ConjunctionGroup> &groups,
                              size_t entity) {
  if (const ConjunctionGroup *g = GroupOf(groups, entity)) return g->members;
  return {entity};
}

EnrichedEntity MergeEnriched(const std::vector<const EnrichedEntity *> &parts) {
  EnrichedEntity out;
  out.start = parts.front()->start;
  out.end = parts.front()->end;
  for (const EnrichedEntity *p : parts) {
    out.tuples.insert(p->tuples.begin(), p->tuples.end());
    out.start = std::min(out.start, p->start);
    out.end = std::max(out.end, p->end);
    out.provenance.insert(out.provenance.end(), p->provenance.begin(),
                          p->provenance.end());
  }
  std::sort(out.provenance.begin(), out.provenance.end());
  out.provenance.erase(std::unique(out.provenance.begin(), out.provenance.end()),
                       out.provenance.end());
  return out;
}

}  // namespace

void SimpleEntity::Add(const Value &v, const std::set<std::string> &types) {
  values.insert(v);
  lex_types.insert(types.begin(), types.end());
  mapping[v].insert(types.begin(), types.end());
}

void SimpleEntity::MergeFrom(const SimpleEntity &other) {
  for (const auto &[v, types] : other.mapping) Add(v, types);
  for (const Value &v : other.values) values.insert(v);
  sources.insert(other.sources.begin(), other.sources.end());
  start = std::min(start, other.start);
  end = std::max(end, other.end);
}

const char *EntityClassName(EntityClass c) {
  switch (c) {
    case EntityClass::kReference:
      return "reference";
    case EntityClass::kOperator:
      return "operator";
    case EntityClass::kContext:
      return "context";
    case EntityClass::kSolar:
      return "solar";
  }
  return "?";
}

bool SameTuples(const EnrichedEntity &a, const EnrichedEntity &b) {
  return a.tuples == b.tuples;
}

bool IsLexicalValueType(std::string_view type) {
  return type == "Number" || type == "Text" || type == "Date";
}

std::vector<SimpleEntity> ExtractEntities(std::string_view text,
                                          const std::vector<Token> &tokens,
                                          const InverseIndex &index,
                                          const GrammarRegistry &grammars,
                                          const AuxTable &aux,
                                          const OperatorDictionary &operators,
                                          const ExtractionOptions &options,
                                          Diagnostics *diagnostics) {
  std::vector<Detection> all = LexiconDetections(text, tokens, index, aux,
                                                 operators, options, diagnostics);
  for (const GrammarMatch &m : RunGrammars(tokens, grammars)) {
    Detection d;
    d.first = m.first_token;
    d.end = m.end_token;
    d.entity.start = m.start;
    d.entity.end = m.end;
    d.entity.sources.insert("grammar:" + m.rule);
    d.entity.Add(m.value, {m.lex_type});
    all.push_back(std::move(d));
  }
  std::stable_sort(all.begin(), all.end(), [](const Detection &a, const Detection &b) {
    if (a.entity.start != b.entity.start) return a.entity.start < b.entity.start;
    return a.entity.end > b.entity.end;
  });

  std::vector<SimpleEntity> out;
  for (const Detection &d : all) {
    if (!out.empty() && d.entity.start < out.back().end) {
      out.back().MergeFrom(d.entity);
    } else {
      out.push_back(d.entity);
    }
  }
  for (SimpleEntity &e : out) {
    e.surface = std::string(text.substr(e.start, e.end - e.start));
  }
  return out;
}

EntityClass Classify(const SimpleEntity &entity,
                     const OperatorDictionary &operators,
                     Diagnostics *diagnostics) {
  bool op = false, context = false, other = false;
  for (const Value &v : entity.values) {
    auto it = entity.mapping.find(v);
    const bool typed_context =
        it != entity.mapping.end() && it->second.count(std::string(kContextType));
    if (std::holds_alternative<EntityId>(v) && operators.Contains(Name(v))) {
      op = true;
      if (typed_context && diagnostics) {
        diagnostics->Add("value " + Render(v) +
                         " is both an operator and a context; read as operator");
      }
      continue;
    }
    if (typed_context) {
      context = true;
    } else {
      other = true;
    }
  }
  if (diagnostics && (int(op) + int(context) + int(other)) > 1) {
    diagnostics->Add("entity '" + entity.surface +
                     "' mixes value classes; classified by precedence");
  }
  if (op) return EntityClass::kOperator;
  if (context) return EntityClass::kContext;
  return EntityClass::kReference;
}

EnrichedEntity Extend(const SimpleEntity &entity, const AuxTable &aux) {
  EnrichedEntity out;
  out.start = entity.start;
  out.end = entity.end;
  for (const Value &v : entity.values) {
    AddOwnTuples(entity, v, aux, CompOp::kEq, &out);
  }
  return out;
}

EnrichedEntity ContextEnrichment(const SimpleEntity &context,
                                 const SimpleEntity &reference, CompOp op,
                                 const AuxTable &aux) {
  EnrichedEntity out;
  out.start = reference.start;
  out.end = reference.end;
  for (const Value &v : reference.values) {
    AddOwnTuples(reference, v, aux, op, &out);
    for (const Value &u : context.values) {
      for (const AuxRecord &r : aux.Records(Name(u))) {
        out.tuples.insert({v, r.db_type, r.lex_type, op});
      }
    }
  }
  return out;
}

EnrichedEntity OperatorEnrichment(const SimpleEntity &op_entity,
                                  const EnrichedEntity &reference,
                                  const OperatorDictionary &operators) {
  std::optional<CompOp> op;
  for (const Value &v : op_entity.values) {
    if (!std::holds_alternative<EntityId>(v)) continue;
    if ((op = operators.Find(Name(v)))) break;
  }
  if (!op) {
    throw Error(ErrorCode::kUnknownOperator,
                "operator entity '" + op_entity.surface +
                    "' has no comparator in the operator dictionary");
  }
  EnrichedEntity out;
  out.start = reference.start;
  out.end = reference.end;
  out.provenance = reference.provenance;
  for (EnrichedTuple t : reference.tuples) {
    t.op = *op;
    out.tuples.insert(std::move(t));
  }
  return out;
}

std::vector<ConjunctionGroup> FindConjunctions(
    const std::vector<SimpleEntity> &entities,
    const std::vector<EntityClass> &classes, const DependencyTree &tree) {
  const size_t n = entities.size();
  std::vector<std::vector<size_t>> nodes(n);
  std::vector<int> owner(tree.size(), -1);
  for (size_t i = 0; i < n; ++i) {
    nodes[i] = tree.NodesInSpan(entities[i].start, entities[i].end);
    for (size_t k : nodes[i]) {
      if (owner[k] < 0) owner[k] = int(i);
    }
  }
  UnionFind uf(n);
  std::vector<bool> linked(n, false);
  for (size_t k = 0; k < tree.size(); ++k) {
    const DependencyNode &node = tree.node(k);
    if (node.label != "conj" || node.head == k) continue;
    int a = owner[node.head], b = owner[k];
    if (a < 0 || b < 0 || a == b) continue;
    if (classes[a] != classes[b]) continue;
    if (classes[a] != EntityClass::kReference && classes[a] != EntityClass::kContext) {
      continue;
    }
    if (!Intersects(entities[a].lex_types, entities[b].lex_types)) continue;
    uf.Join(a, b);
    linked[a] = linked[b] = true;
  }
  std::map<size_t, ConjunctionGroup> by_root;
  for (size_t i = 0; i < n; ++i) {
    if (linked[i]) by_root[uf.Find(i)].members.push_back(i);
  }
  std::vector<ConjunctionGroup> groups;
  for (auto &[root, g] : by_root) {
    std::vector<size_t> member_nodes;
    size_t lo = SIZE_MAX, hi = 0;
    for (size_t m : g.members) {
      for (size_t k : nodes[m]) {
        member_nodes.push_back(k);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
    }
    for (size_t k = 0; k < tree.size(); ++k) {
      const DependencyNode &node = tree.node(k);
      if (node.label != "cc" || k < lo || k > hi) continue;
      if (std::find(member_nodes.begin(), member_nodes.end(), node.head) ==
          member_nodes.end()) {
        continue;
      }
      if (node.token.lemma == "or") g.has_or = true;
      if (node.token.lemma == "and") g.has_and = true;
    }
    if (!g.has_or) g.has_and = true;  // comma-only lists read as "and"
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<EnrichedEntity> ApplyConjunctions(
    const std::vector<EnrichedEntity> &entities,
    const std::vector<ConjunctionGroup> &groups) {
  std::vector<EnrichedEntity> out;
  std::vector<bool> used(entities.size(), false);
  for (size_t i = 0; i < entities.size(); ++i) {
    if (used[i]) continue;
    const ConjunctionGroup *g = GroupOf(groups, i);
    if (!g || g->effective() == Connective::kAnd) {
      used[i] = true;
      out.push_back(entities[i]);
      continue;
    }
    std::vector<const EnrichedEntity *> parts;
    for (size_t m : g->members) {
      if (m < entities.size() && !used[m]) {
        used[m] = true;
        parts.push_back(&entities[m]);
      }
    }
    out.push_back(MergeEnriched(parts));
  }
  return out;
}

Attachment Attach(const std::vector<SimpleEntity> &entities,
                  const std::vector<EntityClass> &classes,
                  const std::vector<ConjunctionGroup> &groups,
                  const DependencyTree &tree, Diagnostics *diagnostics) {
  Attachment out;
  const size_t n = entities.size();
  std::vector<std::optional<std::pair<size_t, size_t>>> range(n);
  for (size_t i = 0; i < n; ++i) range[i] = NodeRange(tree, entities[i]);

  auto note = [&](const std::string &msg) {
    if (diagnostics) diagnostics->Add(msg);
  };

  for (size_t i = 0; i < n; ++i) {
    if (classes[i] != EntityClass::kOperator) continue;
    std::optional<size_t> target;
    for (size_t j = i + 1; j < n; ++j) {
      if (classes[j] != EntityClass::kReference) continue;
      if (range[i] && range[j] &&
          range[j]->first > range[i]->second + kOperatorReach) {
        break;
      }
      target = j;
      break;
    }
    if (!target) {
      note("operator '" + entities[i].surface +
           "' has no reference within reach; dropped");
      continue;
    }
    for (size_t m : MembersOf(groups, *target)) {
      if (out.operators.count(m)) {
        note("reference '" + entities[m].surface +
             "' already has an operator; keeping the first");
        continue;
      }
      out.operators[m] = i;
    }
  }

  // Context units: an or-group of contexts acts as one merged context.
  std::vector<bool> seen(n, false);
  std::vector<bool> claimed(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (classes[i] != EntityClass::kContext || seen[i]) continue;
    std::vector<size_t> unit = MembersOf(groups, i);
    for (size_t m : unit) seen[m] = true;
    if (const ConjunctionGroup *g = GroupOf(groups, i);
        g && g->effective() == Connective::kOr) {
      out.context_groups.push_back(*g);
    }
    const size_t last = unit.back();

    std::optional<size_t> target;
    for (size_t j = last + 1; j < n; ++j) {
      if (classes[j] == EntityClass::kOperator) continue;
      if (classes[j] == EntityClass::kContext || classes[j] == EntityClass::kSolar) {
        break;
      }
      if (!claimed[j]) target = j;
      break;
    }
    if (!target) {
      for (size_t j = unit.front(); j-- > 0;) {
        if (classes[j] != EntityClass::kReference) continue;
        if (!claimed[j]) target = j;
        break;
      }
    }
    if (!target) {
      for (size_t m : unit) {
        note("context '" + entities[m].surface +
             "' has no unclaimed reference; dropped");
      }
      continue;
    }
    for (size_t r : MembersOf(groups, *target)) {
      claimed[r] = true;
      out.contexts[r] = unit;
    }
  }
  return out;
}

Enrichment Enrich(const std::vector<SimpleEntity> &entities,
                  std::vector<EntityClass> classes, size_t solar,
                  const DependencyTree &tree, const EnrichmentTables &tables,
                  Diagnostics *diagnostics) {
  Enrichment out;
  classes.at(solar) = EntityClass::kSolar;
  out.classes = classes;
  out.groups = FindConjunctions(entities, classes, tree);
  out.attachment = Attach(entities, classes, out.groups, tree, diagnostics);
  out.solar = Extend(entities[solar], tables.aux);
  out.solar.provenance = {solar};
  if (diagnostics) {
    for (size_t i = 0; i < entities.size(); ++i) {
      if (classes[i] != EntityClass::kReference) continue;
      for (const Value &v : entities[i].values) {
        if (!std::holds_alternative<EntityId>(v)) continue;
        std::set<std::string> types = tables.aux.DbTypes(Name(v));
        if (types.size() < 2) continue;
        std::string list;
        for (const std::string &t : types) list += (list.empty() ? "" : ", ") + t;
        diagnostics->Add("value " + Render(v) + " has several database types (" + list +
                         "); every reading is kept");
      }
    }
  }

  auto merged_context = [&](const std::vector<size_t> &unit) {
    SimpleEntity c = entities[unit.front()];
    for (size_t k = 1; k < unit.size(); ++k) c.MergeFrom(entities[unit[k]]);
    return c;
  };
  auto unit_is_or = [&](const std::vector<size_t> &unit) {
    for (const ConjunctionGroup &g : out.attachment.context_groups) {
      if (g.members == unit) return true;
    }
    return false;
  };

  // One enriched entity per (reference, context alternative); an and-linked
  // context group yields one per member context.
  std::vector<EnrichedEntity> per_ref;
  std::vector<ConjunctionGroup> regroup;
  std::map<std::pair<const ConjunctionGroup *, size_t>, size_t> slot;
  for (size_t i = 0; i < entities.size(); ++i) {
    if (classes[i] != EntityClass::kReference) continue;
    std::vector<EnrichedEntity> variants;
    auto ctx = out.attachment.contexts.find(i);
    if (ctx == out.attachment.contexts.end()) {
      variants.push_back(Extend(entities[i], tables.aux));
      variants.back().provenance = {i};
    } else if (unit_is_or(ctx->second) || ctx->second.size() == 1) {
      variants.push_back(ContextEnrichment(merged_context(ctx->second),
                                           entities[i], CompOp::kEq, tables.aux));
      variants.back().provenance = ctx->second;
      variants.back().provenance.push_back(i);
    } else {
      for (size_t c : ctx->second) {
        variants.push_back(
            ContextEnrichment(entities[c], entities[i], CompOp::kEq, tables.aux));
        variants.back().provenance = {c, i};
      }
    }
    auto op = out.attachment.operators.find(i);
    for (size_t v = 0; v < variants.size(); ++v) {
      EnrichedEntity e = variants[v];
      if (op != out.attachment.operators.end()) {
        e = OperatorEnrichment(entities[op->second], e, tables.operators);
        e.provenance.push_back(op->second);
      }
      std::sort(e.provenance.begin(), e.provenance.end());
      const size_t index = per_ref.size();
      per_ref.push_back(std::move(e));
      const ConjunctionGroup *g = GroupOf(out.groups, i);
      if (!g) continue;
      auto key = std::make_pair(g, v);
      auto it = slot.find(key);
      if (it == slot.end()) {
        slot[key] = regroup.size();
        ConjunctionGroup copy = *g;
        copy.members = {index};
        regroup.push_back(std::move(copy));
      } else {
        regroup[it->second].members.push_back(index);
      }
    }
  }
  out.entities = ApplyConjunctions(per_ref, regroup);
  std::stable_sort(out.entities.begin(), out.entities.end(),
                   [](const EnrichedEntity &a, const EnrichedEntity &b) {
                     return a.start < b.start;
                   });
  return out;
}

std::string ToString(const EnrichedTuple &t) {
  return "(" + Render(t.value) + ", " + t.db_type + ", " + t.lex_type + ", " +
         CompOpSymbol(t.op) + ")";
}

std::string ToString(const EnrichedEntity &e) {
  std::string out = "{";
  bool first = true;
  for (const EnrichedTuple &t : e.tuples) {
    if (!first) out += ", ";
    first = false;
    out += ToString(t);
  }
  return out + "}";
}

}  // namespace nlq
