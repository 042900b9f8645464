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

// UTF-8 helpers shared by the tokenizer, the lexicon and the file readers.

#ifndef NLQ_TEXT_H_
#define NLQ_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nlq::text {

// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::u32string Decode(std::string_view utf8);
std::string Encode(std::u32string_view codepoints);
void AppendUtf8(char32_t cp, std::string *out);

// Length in bytes of the UTF-8 sequence starting at s[pos] (1 for invalid).
size_t SequenceLength(std::string_view s, size_t pos);
char32_t DecodeAt(std::string_view s, size_t pos);

// Simple case folding covering Latin-1, Latin Extended-A, Greek and
// Cyrillic. Diacritics are preserved.
char32_t ToLower(char32_t cp);
std::string ToLower(std::string_view utf8);

bool IsSpace(char32_t cp);
bool IsAlpha(char32_t cp);
bool IsDigit(char32_t cp);
inline bool IsAlnum(char32_t cp) { return IsAlpha(cp) || IsDigit(cp); }

bool IsOpeningQuote(char32_t cp);
bool IsClosingQuote(char32_t cp);
// Maps typographic quotes onto their straight counterparts.
char32_t UnifyQuote(char32_t cp);

// Lowercases, unifies quotes and collapses whitespace runs to one space.
std::string Normalize(std::string_view utf8);

std::string Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);

}  // namespace nlq::text

#endif  // NLQ_TEXT_H_
