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

// Tokenization and dependency structure. Downstream code only consumes
// linear order, preposition linkage and conjunction (cc/conj) links, so a
// deterministic shallow parser is enough; trees from external parsers can be
// loaded from CoNLL-U instead.

#ifndef NLQ_PARSE_H_
#define NLQ_PARSE_H_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace nlq {

struct Token {
  std::string surface;
  std::string lemma;  // lowercased surface
  size_t start = 0;   // UTF-8 byte offsets, end exclusive
  size_t end = 0;
  size_t index = 0;
  bool quoted = false;  // a whole quoted region, quotes included
  bool punct = false;

  // Surface without the enclosing quotes of a quoted token.
  std::string Unquoted() const;
};

// Whitespace/punctuation segmentation. Hyphenated words stay whole and a
// quoted region becomes a single token.
std::vector<Token> Tokenize(std::string_view text);

struct DependencyNode {
  Token token;
  std::string pos;
  size_t head = 0;  // the root points to itself
  std::string label;
};

class DependencyTree {
 public:
  DependencyTree() = default;
  explicit DependencyTree(std::vector<DependencyNode> nodes);

  const std::vector<DependencyNode> &nodes() const { return nodes_; }
  size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  size_t root() const { return root_; }
  const DependencyNode &node(size_t i) const { return nodes_[i]; }
  std::vector<size_t> Children(size_t i) const;

  // Nodes whose byte range intersects [start, end).
  std::vector<size_t> NodesInSpan(size_t start, size_t end) const;

  // Throws kParse unless there is exactly one root and heads form a tree.
  void Validate() const;

  // Recomputes token offsets by locating each form, in order, in `text`.
  // Throws kParse when a form cannot be found.
  void AlignTo(std::string_view text);

 private:
  std::vector<DependencyNode> nodes_;
  size_t root_ = 0;
};

// Heuristic parse: a leading verb is the root and its first noun the direct
// object; with/by/of/whose-style words link to the preceding word and govern
// the following one; and/or and commas conjoin their neighbours. Falls back
// to a flat tree if the heuristics ever produce a cycle.
DependencyTree ShallowParse(const std::vector<Token> &tokens);

// Reads the first sentence of a CoNLL-U file (ID, FORM, LEMMA, UPOS, HEAD,
// DEPREL are used). Offsets assume single-space separated forms until
// AlignTo is called. Throws kParse with the line number on malformed rows.
DependencyTree ParseConllu(std::string_view source);
DependencyTree LoadDependencyTree(std::istream &in);

}  // namespace nlq

#endif  // NLQ_PARSE_H_
