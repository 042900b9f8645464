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

#include "nlq/parse.h"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "nlq/error.h"
#include "nlq/text.h"

namespace nlq {

std::string Token::Unquoted() const {
  if (!quoted) return surface;
  size_t open = text::SequenceLength(surface, 0);
  // The closing quote is the last code point.
  size_t close = surface.size();
  do {
    --close;
  } while (close > open &&
           (static_cast<unsigned char>(surface[close]) & 0xC0) == 0x80);
  return surface.substr(open, close - open);
}

namespace {

bool MatchingQuote(char32_t open, char32_t close) {
  switch (open) {
    case '"':
      return close == '"' || close == 0x201D;
    case 0x201C:
      return close == 0x201D || close == '"';
    case '\'':
      return close == '\'' || close == 0x2019;
    case 0x2018:
      return close == 0x2019 || close == '\'';
    default:
      return false;
  }
}

// Returns the end offset of a quoted region opening at `pos`, if any.
std::optional<size_t> QuotedRegionEnd(std::string_view s, size_t pos) {
  char32_t open = text::DecodeAt(s, pos);
  size_t i = pos + text::SequenceLength(s, pos);
  size_t content_start = i;
  while (i < s.size()) {
    char32_t cp = text::DecodeAt(s, i);
    size_t len = text::SequenceLength(s, i);
    if (MatchingQuote(open, cp)) {
      size_t after = i + len;
      bool word_follows =
          after < s.size() && text::IsAlnum(text::DecodeAt(s, after));
      // An apostrophe inside a word ("Alice's") does not close the region.
      bool word_before = i > content_start &&
                         text::IsAlnum(text::DecodeAt(s, i - 1));
      bool apostrophe = (cp == '\'' || cp == 0x2019) && word_before &&
                        word_follows;
      if (!apostrophe && !word_follows) {
        if (i == content_start) return std::nullopt;
        return after;
      }
    }
    i += len;
  }
  return std::nullopt;
}

char32_t PrevCodepoint(std::string_view s, size_t pos) {
  if (pos == 0) return ' ';
  size_t i = pos - 1;
  while (i > 0 && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) --i;
  return text::DecodeAt(s, i);
}

}  // namespace

std::vector<Token> Tokenize(std::string_view s) {
  std::vector<Token> tokens;
  size_t pos = 0;
  auto emit = [&](size_t start, size_t end, bool quoted, bool punct) {
    Token t;
    t.surface = std::string(s.substr(start, end - start));
    t.lemma = text::Normalize(t.surface);
    t.start = start;
    t.end = end;
    t.index = tokens.size();
    t.quoted = quoted;
    t.punct = punct;
    tokens.push_back(std::move(t));
  };
  while (pos < s.size()) {
    char32_t cp = text::DecodeAt(s, pos);
    size_t len = text::SequenceLength(s, pos);
    if (text::IsSpace(cp)) {
      pos += len;
      continue;
    }
    if (text::IsOpeningQuote(cp) && !text::IsAlnum(PrevCodepoint(s, pos))) {
      if (auto end = QuotedRegionEnd(s, pos)) {
        emit(pos, *end, true, false);
        pos = *end;
        continue;
      }
    }
    bool signed_number = (cp == '-' || cp == '+') && pos + 1 < s.size() &&
                         text::IsDigit(static_cast<unsigned char>(s[pos + 1])) &&
                         !text::IsAlnum(PrevCodepoint(s, pos));
    if (text::IsAlnum(cp) || signed_number) {
      size_t start = pos;
      pos += len;
      while (pos < s.size()) {
        char32_t c = text::DecodeAt(s, pos);
        size_t l = text::SequenceLength(s, pos);
        if (text::IsAlnum(c)) {
          pos += l;
          continue;
        }
        // Joiners stay inside a word when a letter or digit follows:
        // co-authored, O'Brien, 3.5, 2018-05-01.
        bool joiner = c == '-' || c == '\'' || c == 0x2019 || c == '.' ||
                      c == '_';
        if (joiner && pos + l < s.size() &&
            text::IsAlnum(text::DecodeAt(s, pos + l))) {
          if (c == '.' && !(text::IsDigit(text::DecodeAt(s, pos - 1)) &&
                            text::IsDigit(text::DecodeAt(s, pos + l)))) {
            break;
          }
          pos += l;
          continue;
        }
        break;
      }
      emit(start, pos, false, false);
      continue;
    }
    emit(pos, pos + len, false, true);
    pos += len;
  }
  return tokens;
}

// ---------------------------------------------------------------------------

DependencyTree::DependencyTree(std::vector<DependencyNode> nodes)
    : nodes_(std::move(nodes)) {
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].head == i) {
      root_ = i;
      break;
    }
  }
}

std::vector<size_t> DependencyTree::Children(size_t i) const {
  std::vector<size_t> out;
  for (size_t j = 0; j < nodes_.size(); ++j) {
    if (j != i && nodes_[j].head == i) out.push_back(j);
  }
  return out;
}

std::vector<size_t> DependencyTree::NodesInSpan(size_t start,
                                                size_t end) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const Token &t = nodes_[i].token;
    if (t.start < end && start < t.end) out.push_back(i);
  }
  return out;
}

void DependencyTree::Validate() const {
  if (nodes_.empty()) throw Error(ErrorCode::kParse, "empty dependency tree");
  size_t roots = 0;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].head >= nodes_.size()) {
      throw Error(ErrorCode::kParse,
                  "node " + std::to_string(i + 1) + " has an invalid head");
    }
    if (nodes_[i].head == i) ++roots;
  }
  if (roots != 1) {
    throw Error(ErrorCode::kParse, roots == 0 ? "dependency tree has no root"
                                              : "dependency tree has " +
                                                    std::to_string(roots) +
                                                    " roots");
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    size_t cur = i;
    for (size_t steps = 0; nodes_[cur].head != cur; ++steps) {
      if (steps > nodes_.size()) {
        throw Error(ErrorCode::kParse,
                    "cycle in head links at node " + std::to_string(i + 1));
      }
      cur = nodes_[cur].head;
    }
  }
}

void DependencyTree::AlignTo(std::string_view text) {
  size_t pos = 0;
  for (DependencyNode &n : nodes_) {
    const std::string &form = n.token.surface;
    size_t found = text.find(form, pos);
    if (found == std::string_view::npos) {
      throw Error(ErrorCode::kParse, "token '" + form +
                                         "' not found in the query text");
    }
    n.token.start = found;
    n.token.end = found + form.size();
    pos = n.token.end;
  }
}

// ---------------------------------------------------------------------------
// Shallow parser.

namespace {

const std::set<std::string> kLeadingVerbs = {
    "find",   "show",     "list",   "give", "get",    "return", "search",
    "display", "retrieve", "fetch", "select", "which", "what",  "who"};
const std::set<std::string> kDeterminers = {"the", "a", "an", "all",
                                            "any", "some", "every"};
const std::set<std::string> kLinkers = {"with", "by", "of", "whose",
                                        "which", "who", "that", "having"};
const std::set<std::string> kConjunctions = {"and", "or"};

bool IsContent(const Token &t) {
  return !t.punct && !kDeterminers.count(t.lemma);
}

}  // namespace

DependencyTree ShallowParse(const std::vector<Token> &tokens) {
  const size_t n = tokens.size();
  std::vector<DependencyNode> nodes(n);
  if (n == 0) return DependencyTree(std::move(nodes));

  size_t root = 0;
  while (root < n && !IsContent(tokens[root])) ++root;
  if (root == n) root = 0;

  auto prev_content = [&](size_t i) -> size_t {
    for (size_t j = i; j-- > 0;) {
      if (IsContent(tokens[j]) && !kConjunctions.count(tokens[j].lemma))
        return j;
    }
    return root;
  };
  auto next_content = [&](size_t i) -> std::optional<size_t> {
    for (size_t j = i + 1; j < n; ++j) {
      if (IsContent(tokens[j])) return j;
    }
    return std::nullopt;
  };

  for (size_t i = 0; i < n; ++i) {
    nodes[i].token = tokens[i];
    nodes[i].pos = tokens[i].punct ? "PUNCT" : "X";
    nodes[i].head = i < root ? root : prev_content(i);
    nodes[i].label = "dep";
  }
  nodes[root].head = root;
  nodes[root].label = "ROOT";

  if (kLeadingVerbs.count(tokens[root].lemma)) {
    nodes[root].pos = "VERB";
    if (auto obj = next_content(root)) {
      nodes[*obj].head = root;
      nodes[*obj].label = "dobj";
      nodes[*obj].pos = "NOUN";
    }
  }

  for (size_t i = 0; i < n; ++i) {
    const Token &t = tokens[i];
    if (i == root) continue;
    if (t.punct) {
      nodes[i].head = prev_content(i);
      nodes[i].label = "punct";
      nodes[i].pos = "PUNCT";
      if (t.lemma == ",") {
        auto right = next_content(i);
        bool conj_follows =
            right && kConjunctions.count(tokens[*right].lemma) > 0;
        if (right && !conj_follows && *right != root) {
          nodes[*right].head = prev_content(i);
          nodes[*right].label = "conj";
        }
      }
    } else if (kDeterminers.count(t.lemma)) {
      nodes[i].pos = "DET";
      nodes[i].label = "det";
      if (auto next = next_content(i)) nodes[i].head = *next;
    } else if (kConjunctions.count(t.lemma)) {
      size_t left = prev_content(i);
      nodes[i].head = left;
      nodes[i].label = "cc";
      nodes[i].pos = "CCONJ";
      if (auto right = next_content(i); right && *right != root) {
        nodes[*right].head = left;
        nodes[*right].label = "conj";
      }
    } else if (kLinkers.count(t.lemma)) {
      nodes[i].head = prev_content(i);
      nodes[i].label = "prep";
      nodes[i].pos = "ADP";
      if (auto obj = next_content(i);
          obj && *obj != root && !kConjunctions.count(tokens[*obj].lemma)) {
        nodes[*obj].head = i;
        nodes[*obj].label = "pobj";
      }
    }
  }

  DependencyTree tree(std::move(nodes));
  try {
    tree.Validate();
  } catch (const Error &) {
    std::vector<DependencyNode> flat;
    for (size_t i = 0; i < n; ++i) {
      DependencyNode node;
      node.token = tokens[i];
      node.head = root;
      node.label = i == root ? "ROOT" : "dep";
      flat.push_back(std::move(node));
    }
    return DependencyTree(std::move(flat));
  }
  return tree;
}

// ---------------------------------------------------------------------------
// CoNLL-U.

DependencyTree ParseConllu(std::string_view source) {
  std::vector<DependencyNode> nodes;
  std::vector<size_t> heads;  // 1-based, 0 = root
  std::vector<size_t> rows;
  size_t line_no = 0;
  bool started = false;
  for (const std::string &raw : text::Split(source, '\n')) {
    ++line_no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::Trim(line).empty()) {
      if (started) break;
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> cols = text::Split(line, '\t');
    auto fail = [&](const std::string &why) {
      return Error(ErrorCode::kParse,
                   "CoNLL-U line " + std::to_string(line_no) + ": " + why);
    };
    if (cols.size() < 8) throw fail("expected at least 8 tab-separated columns");
    const std::string &id = cols[0];
    // Multiword ranges (1-2) and empty nodes (1.1) carry no tree structure.
    if (id.find('-') != std::string::npos || id.find('.') != std::string::npos)
      continue;
    started = true;
    auto number = [&](const std::string &s, const char *what) {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) {
            return c >= '0' && c <= '9';
          })) {
        throw fail(std::string("invalid ") + what + " '" + s + "'");
      }
      return static_cast<size_t>(std::stoul(s));
    };
    size_t index = number(id, "ID");
    if (index != nodes.size() + 1) throw fail("IDs must be consecutive from 1");
    if (cols[1].empty()) throw fail("empty FORM");
    DependencyNode node;
    node.token.surface = cols[1];
    node.token.lemma = text::Normalize(cols[1]);
    node.token.index = nodes.size();
    node.pos = cols[3];
    node.label = cols[7];
    node.token.punct = cols[3] == "PUNCT";
    heads.push_back(number(cols[6], "HEAD"));
    rows.push_back(line_no);
    nodes.push_back(std::move(node));
  }
  if (nodes.empty()) throw Error(ErrorCode::kParse, "CoNLL-U input has no tokens");

  size_t offset = 0;
  size_t roots = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (heads[i] > nodes.size()) {
      throw Error(ErrorCode::kParse, "CoNLL-U line " + std::to_string(rows[i]) +
                                         ": HEAD out of range");
    }
    if (heads[i] == 0) ++roots;
    nodes[i].head = heads[i] == 0 ? i : heads[i] - 1;
    Token &t = nodes[i].token;
    t.start = offset;
    t.end = offset + t.surface.size();
    offset = t.end + 1;
    if (heads[i] != 0 && heads[i] - 1 == i) {
      throw Error(ErrorCode::kParse, "CoNLL-U line " + std::to_string(rows[i]) +
                                         ": token is its own head");
    }
  }
  if (roots == 0) throw Error(ErrorCode::kParse, "CoNLL-U sentence has no root");
  if (roots > 1) {
    throw Error(ErrorCode::kParse, "CoNLL-U sentence has " +
                                       std::to_string(roots) + " roots");
  }
  for (size_t i = 0; i < nodes.size(); ++i) {
    size_t cur = i;
    for (size_t steps = 0; nodes[cur].head != cur; ++steps) {
      if (steps > nodes.size()) {
        throw Error(ErrorCode::kParse, "CoNLL-U line " + std::to_string(rows[i]) +
                                           ": cycle in HEAD links");
      }
      cur = nodes[cur].head;
    }
  }
  return DependencyTree(std::move(nodes));
}

DependencyTree LoadDependencyTree(std::istream &in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConllu(buf.str());
}

}  // namespace nlq
