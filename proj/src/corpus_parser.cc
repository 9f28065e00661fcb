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

#include "arena/corpus_parser.h"

#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_set>

#include "arena/error.h"
#include "arena/text_norm.h"

namespace arena {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f';
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Collapses whitespace runs to one space and trims.
std::string collapse(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (is_space(c)) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

void append_code_point(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes the common named entities and numeric references; anything else is
// kept literally.
std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const std::string_view name = s.substr(i + 1, semi - i - 1);
    std::optional<unsigned long> cp;
    if (name == "amp") cp = '&';
    else if (name == "lt") cp = '<';
    else if (name == "gt") cp = '>';
    else if (name == "quot") cp = '"';
    else if (name == "apos") cp = '\'';
    else if (name == "nbsp") cp = ' ';
    else if (name.size() > 1 && name[0] == '#') {
      try {
        std::size_t used = 0;
        const bool hex = name[1] == 'x' || name[1] == 'X';
        const std::string digits(name.substr(hex ? 2 : 1));
        const unsigned long v = std::stoul(digits, &used, hex ? 16 : 10);
        if (used == digits.size()) cp = v;
      } catch (const std::exception&) {
      }
    }
    if (!cp) {
      out.push_back('&');
      continue;
    }
    append_code_point(out, *cp);
    i = semi;
  }
  return out;
}

const std::unordered_set<std::string>& void_elements() {
  static const std::unordered_set<std::string> v = {
      "area", "base", "br", "col", "embed", "hr", "img", "input",
      "link", "meta", "param", "source", "track", "wbr"};
  return v;
}

const std::unordered_set<std::string>& inline_elements() {
  static const std::unordered_set<std::string> v = {
      "a", "abbr", "b", "cite", "code", "em", "i", "mark", "q", "s",
      "small", "span", "strong", "sub", "sup", "u", "var", "kbd"};
  return v;
}

int heading_level(std::string_view name) {
  if (name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6')
    return name[1] - '0';
  return 0;
}

class BookBuilder {
 public:
  explicit BookBuilder(std::string_view book_name) {
    root_.kind = BookNode::Kind::kBook;
    root_.title = std::string(book_name);
  }

  void parse(std::string_view doc) {
    std::size_t i = 0;
    while (i < doc.size()) {
      if (doc[i] != '<') {
        const auto next = doc.find('<', i);
        const auto end = next == std::string_view::npos ? doc.size() : next;
        on_text(decode_entities(doc.substr(i, end - i)));
        i = end;
        continue;
      }
      if (doc.compare(i, 4, "<!--") == 0) {
        const auto end = doc.find("-->", i + 4);
        if (end == std::string_view::npos) throw ParseError(i, "unterminated comment");
        i = end + 3;
        continue;
      }
      const bool closing = i + 1 < doc.size() && doc[i + 1] == '/';
      const std::size_t name_start = i + (closing ? 2 : 1);
      if (name_start < doc.size() && (doc[name_start] == '!' || doc[name_start] == '?')) {
        const auto end = doc.find('>', name_start);
        if (end == std::string_view::npos) throw ParseError(i, "unterminated declaration");
        i = end + 1;
        continue;
      }
      if (name_start >= doc.size() ||
          !std::isalpha(static_cast<unsigned char>(doc[name_start]))) {
        on_text("<");  // a bare '<' in running text
        ++i;
        continue;
      }
      std::size_t j = name_start;
      while (j < doc.size() && (std::isalnum(static_cast<unsigned char>(doc[j])) ||
                                doc[j] == '-' || doc[j] == ':'))
        ++j;
      const std::string name = ascii_lower(doc.substr(name_start, j - name_start));
      // Scan to the closing '>' while honouring quoted attribute values.
      char quote = 0;
      while (j < doc.size() && (quote || doc[j] != '>')) {
        if (quote && doc[j] == quote) quote = 0;
        else if (!quote && (doc[j] == '"' || doc[j] == '\'')) quote = doc[j];
        ++j;
      }
      if (j >= doc.size()) throw ParseError(i, "unterminated tag <" + name);
      const bool self_closing = !closing && j > name_start && doc[j - 1] == '/';
      const std::size_t tag_offset = i;
      i = j + 1;

      if (closing) {
        on_end(name, tag_offset);
      } else if (name == "script" || name == "style") {
        if (self_closing) continue;
        const std::string lowered = ascii_lower(doc.substr(i));
        const auto end = lowered.find("</" + name);
        if (end == std::string::npos)
          throw ParseError(tag_offset, "unclosed <" + name + ">");
        const auto close = doc.find('>', i + end);
        if (close == std::string_view::npos)
          throw ParseError(i + end, "unterminated tag </" + name);
        i = close + 1;
      } else if (void_elements().count(name) || self_closing) {
        on_text(" ");
      } else {
        on_start(name, tag_offset);
      }
    }
    if (!stack_.empty())
      throw ParseError(stack_.back().offset, "unclosed <" + stack_.back().name + ">");
    flush_loose();
    if (!lead_.empty()) {
      add_paragraph(lead_);
      lead_.clear();
    }
    if (root_.children.empty()) throw ParseError(doc.size(), "document has no content");
  }

  BookNode take() { return std::move(root_); }

 private:
  struct Open {
    std::string name;
    std::size_t offset;
  };

  void on_text(const std::string& text) {
    if (in_heading_) {
      heading_text_ += text;
    } else if (paragraph_depth_ > 0) {
      para_text_ += text;
    } else {
      loose_text_ += text;
    }
  }

  void on_start(const std::string& name, std::size_t offset) {
    const int level = heading_level(name);
    if (level == 1 || level == 2) {
      if (in_heading_) throw ParseError(offset, "<" + name + "> inside a heading");
      if (paragraph_depth_ > 0) throw ParseError(offset, "<" + name + "> inside a paragraph");
      flush_loose();
      flush_lead();
      in_heading_ = true;
      heading_level_ = level;
      heading_text_.clear();
    } else if (level >= 3) {
      if (in_heading_) throw ParseError(offset, "<" + name + "> inside a heading");
      if (paragraph_depth_ == 0) {
        flush_loose();
        flush_lead();
        in_heading_ = true;
        heading_level_ = level;
        heading_text_.clear();
      }
    } else if (name == "p") {
      if (in_heading_) throw ParseError(offset, "<p> inside a heading");
      if (paragraph_depth_ > 0) throw ParseError(offset, "nested <p>");
      flush_loose();
      para_text_ = lead_ + " ";
      lead_.clear();
      paragraph_depth_ = 1;
    } else if (!inline_elements().count(name)) {
      on_text(" ");
    }
    stack_.push_back({name, offset});
  }

  void on_end(const std::string& name, std::size_t offset) {
    if (stack_.empty())
      throw ParseError(offset, "</" + name + "> without an open element");
    if (stack_.back().name != name)
      throw ParseError(offset, "</" + name + "> closes <" + stack_.back().name +
                                   "> opened at " + std::to_string(stack_.back().offset));
    stack_.pop_back();

    const int level = heading_level(name);
    if (in_heading_ && level == heading_level_) {
      in_heading_ = false;
      const std::string title = collapse(heading_text_);
      if (level == 1) {
        BookNode chapter;
        chapter.kind = BookNode::Kind::kChapter;
        chapter.title = title;
        root_.children.push_back(std::move(chapter));
        section_open_ = false;
      } else if (level == 2) {
        BookNode section;
        section.kind = BookNode::Kind::kSection;
        section.title = title;
        current_chapter().children.push_back(std::move(section));
        section_open_ = true;
      } else {
        lead_ = title;
      }
    } else if (name == "p" && paragraph_depth_ > 0) {
      paragraph_depth_ = 0;
      add_paragraph(para_text_);
      para_text_.clear();
    } else if (!inline_elements().count(name)) {
      on_text(" ");
    }
  }

  BookNode& current_chapter() {
    if (root_.children.empty()) {
      BookNode chapter;
      chapter.kind = BookNode::Kind::kChapter;
      root_.children.push_back(std::move(chapter));
      section_open_ = false;
    }
    return root_.children.back();
  }

  void add_paragraph(std::string_view raw) {
    std::string text = collapse(raw);
    if (text.empty()) return;
    BookNode para;
    para.kind = BookNode::Kind::kParagraph;
    para.text = std::move(text);
    BookNode& chapter = current_chapter();
    if (section_open_) {
      chapter.children.back().children.push_back(std::move(para));
    } else {
      chapter.children.push_back(std::move(para));
    }
  }

  void flush_loose() {
    if (collapse(loose_text_).empty()) {
      loose_text_.clear();
      return;
    }
    add_paragraph(lead_ + " " + loose_text_);
    lead_.clear();
    loose_text_.clear();
  }

  void flush_lead() {
    if (lead_.empty()) return;
    add_paragraph(lead_);
    lead_.clear();
  }

  BookNode root_;
  std::vector<Open> stack_;
  bool in_heading_ = false;
  int heading_level_ = 0;
  std::string heading_text_;
  int paragraph_depth_ = 0;
  std::string para_text_;
  std::string loose_text_;
  std::string lead_;  // pending h3+ text for the next paragraph
  bool section_open_ = false;
};

std::size_t word_count(std::string_view text) { return split_words(text).size(); }

}  // namespace

BookNode parse_book(std::string_view markup, std::string_view book_name) {
  BookBuilder builder(book_name);
  builder.parse(markup);
  return builder.take();
}

std::vector<Passage> segment_passages(const BookNode& tree, std::size_t max_words) {
  if (max_words < kMinPassageWords)
    throw Error("max_words must be at least " + std::to_string(kMinPassageWords));

  std::vector<Passage> out;
  auto emit_group = [&](const std::vector<const BookNode*>& paragraphs,
                        std::size_t chapter_no, std::size_t section_no,
                        const std::vector<std::string>& path) {
    std::size_t passage_no = 0;
    Passage cur;
    auto flush = [&] {
      if (cur.word_count == 0) return;
      ++passage_no;
      cur.id = tree.title + "/" + std::to_string(chapter_no) + "/" +
               std::to_string(section_no) + "/" + std::to_string(passage_no);
      cur.source_book = tree.title;
      cur.heading_path = path;
      out.push_back(std::move(cur));
      cur = Passage{};
    };
    for (const BookNode* p : paragraphs) {
      const std::size_t words = word_count(p->text);
      if (words == 0) continue;
      if (cur.word_count > 0 && cur.word_count + words > max_words) flush();
      if (!cur.text.empty()) cur.text.push_back(' ');
      cur.text += p->text;
      cur.word_count += words;
    }
    flush();
  };

  std::size_t chapter_no = 0;
  for (const BookNode& chapter : tree.children) {
    if (chapter.kind != BookNode::Kind::kChapter) continue;
    ++chapter_no;
    std::vector<std::string> chapter_path;
    if (!chapter.title.empty()) chapter_path.push_back(chapter.title);

    std::vector<const BookNode*> leading;
    for (const BookNode& child : chapter.children)
      if (child.kind == BookNode::Kind::kParagraph) leading.push_back(&child);
    emit_group(leading, chapter_no, 0, chapter_path);

    std::size_t section_no = 0;
    for (const BookNode& child : chapter.children) {
      if (child.kind != BookNode::Kind::kSection) continue;
      ++section_no;
      std::vector<const BookNode*> paragraphs;
      for (const BookNode& p : child.children) paragraphs.push_back(&p);
      auto path = chapter_path;
      if (!child.title.empty()) path.push_back(child.title);
      emit_group(paragraphs, chapter_no, section_no, path);
    }
  }
  return out;
}

nlohmann::json passage_to_json(const Passage& p) {
  return {{"id", p.id},
          {"source_book", p.source_book},
          {"heading_path", p.heading_path},
          {"text", p.text},
          {"word_count", p.word_count}};
}

Passage passage_from_json(const nlohmann::json& j) {
  Passage p;
  p.id = j.at("id").get<std::string>();
  p.source_book = j.at("source_book").get<std::string>();
  p.heading_path = j.at("heading_path").get<std::vector<std::string>>();
  p.text = j.at("text").get<std::string>();
  p.word_count = j.at("word_count").get<std::size_t>();
  if (p.text.empty()) throw Error("passage " + p.id + " has empty text");
  return p;
}

void write_passages_jsonl(std::ostream& out, const std::vector<Passage>& passages) {
  for (const auto& p : passages) out << passage_to_json(p).dump() << '\n';
}

std::vector<Passage> read_passages_jsonl(std::istream& in) {
  std::vector<Passage> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(passage_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("bad passage line: ") + e.what());
    }
  }
  return out;
}

}  // namespace arena
