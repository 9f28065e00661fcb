// Copyright 2026 The Riddle Arena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARENA_CORPUS_PARSER_H_
#define ARENA_CORPUS_PARSER_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace arena {

// Document tree of a parsed textbook. The root is a book whose children are
// chapters; a chapter holds paragraphs and sections; a section holds
// paragraphs. Paragraphs are leaves and the only nodes with text.
struct BookNode {
  enum class Kind { kBook, kChapter, kSection, kParagraph };

  Kind kind = Kind::kBook;
  std::string title;
  std::string text;
  std::vector<BookNode> children;
};

// Parses the h1/h2/p markup subset: h1 opens a chapter, h2 a section, p a
// paragraph. Text of any other element is flattened into the surrounding
// paragraph; script and style content is dropped; h3-h6 text leads the next
// paragraph. Loose text outside p becomes a synthetic paragraph, and content
// before the first h1 goes into an untitled chapter.
//
// Throws ParseError (byte offset) on unbalanced or overlapping tags, headings
// nested in headings or paragraphs, nested paragraphs, and documents with no
// content.
BookNode parse_book(std::string_view markup, std::string_view book_name);

struct Passage {
  std::string id;  // "book/chapter/section/passage"
  std::string source_book;
  std::vector<std::string> heading_path;
  std::string text;
  std::size_t word_count = 0;

  friend bool operator==(const Passage&, const Passage&) = default;
};

inline constexpr std::size_t kDefaultMaxPassageWords = 200;
inline constexpr std::size_t kMinPassageWords = 20;

// Greedily merges consecutive paragraphs of each section (and of each
// chapter's leading paragraphs) while the merged word count stays within
// max_words. Paragraphs are never split, so one longer than max_words forms an
// oversized passage. Chapters are numbered from 1; section 0 holds a chapter's
// leading paragraphs. Throws Error if max_words < 20.
std::vector<Passage> segment_passages(const BookNode& tree,
                                      std::size_t max_words = kDefaultMaxPassageWords);

nlohmann::json passage_to_json(const Passage& p);
Passage passage_from_json(const nlohmann::json& j);

// Newline-delimited JSON, one passage per line.
void write_passages_jsonl(std::ostream& out, const std::vector<Passage>& passages);
std::vector<Passage> read_passages_jsonl(std::istream& in);

}  // namespace arena

#endif  // ARENA_CORPUS_PARSER_H_
