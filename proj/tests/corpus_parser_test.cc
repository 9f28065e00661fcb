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

#include <random>
#include <set>
#include <sstream>

#include "arena/error.h"
#include "arena/text_norm.h"
#include "corpus_fixture.h"
#include "gtest/gtest.h"

namespace arena {
namespace {

using Kind = BookNode::Kind;

TEST(ParseBook, ChapterSectionParagraph) {
  auto book = parse_book("<h1>Waves</h1><p>One.</p><h2>Types</h2><p>Two.</p>", "phys");
  EXPECT_EQ(book.kind, Kind::kBook);
  EXPECT_EQ(book.title, "phys");
  ASSERT_EQ(book.children.size(), 1u);
  const auto& chapter = book.children[0];
  EXPECT_EQ(chapter.kind, Kind::kChapter);
  EXPECT_EQ(chapter.title, "Waves");
  ASSERT_EQ(chapter.children.size(), 2u);
  EXPECT_EQ(chapter.children[0].kind, Kind::kParagraph);
  EXPECT_EQ(chapter.children[0].text, "One.");
  EXPECT_EQ(chapter.children[1].kind, Kind::kSection);
  EXPECT_EQ(chapter.children[1].title, "Types");
  ASSERT_EQ(chapter.children[1].children.size(), 1u);
  EXPECT_EQ(chapter.children[1].children[0].text, "Two.");
}

TEST(ParseBook, OrphanParagraphGetsSyntheticChapter) {
  auto book = parse_book("<p>Orphan</p>", "b");
  ASSERT_EQ(book.children.size(), 1u);
  EXPECT_EQ(book.children[0].kind, Kind::kChapter);
  EXPECT_TRUE(book.children[0].title.empty());
  ASSERT_EQ(book.children[0].children.size(), 1u);
  EXPECT_EQ(book.children[0].children[0].text, "Orphan");
}

TEST(ParseBook, OverlappingTagsReportOffset) {
  try {
    parse_book("<h1>A<h2>B</h1></h2>", "b");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  try {
    parse_book("<p><b>x</p></b>", "b");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 7u);
  }
  try {
    parse_book("<h1>T</h1><p>never closed", "b");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 10u);
  }
  EXPECT_THROW(parse_book("<p>a<p>b</p></p>", "b"), ParseError);
  EXPECT_THROW(parse_book("</p>", "b"), ParseError);
}

TEST(ParseBook, EmptyDocumentIsError) {
  EXPECT_THROW(parse_book("", "b"), ParseError);
  EXPECT_THROW(parse_book("  <!-- only a comment -->\n", "b"), ParseError);
  EXPECT_THROW(parse_book("<script>x()</script>", "b"), ParseError);
}

TEST(ParseBook, FlatteningEntitiesAndDroppedContent) {
  auto book = parse_book(
      "<h1>Acids &amp; Bases</h1><p>pH &lt; 7 is <em>acidic</em>,<br>see "
      "<a href=\"x>y\">table</a>.<script>ignore('<p>')</script></p>"
      "<style>.x{}</style>",
      "chem");
  const auto& chapter = book.children.at(0);
  EXPECT_EQ(chapter.title, "Acids & Bases");
  EXPECT_EQ(chapter.children.at(0).text, "pH < 7 is acidic, see table.");
}

TEST(ParseBook, LooseTextCoalescesIntoSyntheticParagraph) {
  auto book = parse_book("<h1>C</h1><div>first part <span>and</span></div> second\n<p>real</p>tail",
                         "b");
  const auto& kids = book.children.at(0).children;
  ASSERT_EQ(kids.size(), 3u);
  EXPECT_EQ(kids[0].text, "first part and second");
  EXPECT_EQ(kids[1].text, "real");
  EXPECT_EQ(kids[2].text, "tail");
}

TEST(ParseBook, MinorHeadingsLeadNextParagraph) {
  auto book = parse_book("<h1>C</h1><h3>Key idea</h3><p>Energy is conserved.</p><h4>Alone</h4>", "b");
  const auto& kids = book.children.at(0).children;
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(kids[0].text, "Key idea Energy is conserved.");
  EXPECT_EQ(kids[1].text, "Alone");
}

std::string words(std::size_t n, const std::string& w = "word") {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + w;
  return s;
}

TEST(SegmentPassages, Examples) {
  auto one = segment_passages(parse_book("<h1>C</h1><p>" + words(50) + "</p>", "b"));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].word_count, 50u);
  EXPECT_EQ(one[0].id, "b/1/0/1");
  EXPECT_EQ(one[0].heading_path, std::vector<std::string>{"C"});

  const std::string p150 = "<p>" + words(150) + "</p>";
  auto three = segment_passages(parse_book("<h1>C</h1><h2>S</h2>" + p150 + p150 + p150, "b"), 200);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(three[2].id, "b/1/1/3");
  EXPECT_EQ(three[2].heading_path, (std::vector<std::string>{"C", "S"}));

  auto none = segment_passages(parse_book("<h1>C</h1><h2>Empty</h2><h2>Full</h2><p>x</p>", "b"));
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(none[0].id, "b/1/2/1");
}

TEST(SegmentPassages, MergesAndKeepsOversized) {
  const std::string doc = "<h1>C</h1><p>" + words(30) + "</p><p>" + words(40) +
                          "</p><p>" + words(300) + "</p><p>" + words(5) + "</p>";
  auto ps = segment_passages(parse_book(doc, "b"), 100);
  ASSERT_EQ(ps.size(), 3u);
  EXPECT_EQ(ps[0].word_count, 70u);
  EXPECT_EQ(ps[1].word_count, 300u);
  EXPECT_EQ(ps[2].word_count, 5u);
  EXPECT_THROW(segment_passages(parse_book(doc, "b"), 19), Error);
}

// Concatenated paragraph text of each (chapter, section) group.
std::vector<std::string> group_texts(const BookNode& book) {
  std::vector<std::string> out;
  for (const auto& ch : book.children) {
    std::string lead;
    for (const auto& c : ch.children)
      if (c.kind == Kind::kParagraph) lead += (lead.empty() ? "" : " ") + c.text;
    if (!lead.empty()) out.push_back(lead);
    for (const auto& c : ch.children) {
      if (c.kind != Kind::kSection) continue;
      std::string s;
      for (const auto& p : c.children) s += (s.empty() ? "" : " ") + p.text;
      if (!s.empty()) out.push_back(s);
    }
  }
  return out;
}

TEST(SegmentPassages, ConservationAndGreedyProperties) {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const auto book = parse_book(testing::fixture_book_markup(seed), "fixture");
    for (std::size_t max_words : {20u, 64u, 200u, 500u}) {
      const auto passages = segment_passages(book, max_words);
      std::vector<std::string> merged;
      std::string prev_group;
      std::set<std::string> ids;
      for (std::size_t i = 0; i < passages.size(); ++i) {
        const auto& p = passages[i];
        EXPECT_TRUE(ids.insert(p.id).second);
        EXPECT_EQ(p.word_count, split_words(p.text).size());
        const std::string group = p.id.substr(0, p.id.rfind('/'));
        if (group == prev_group) {
          merged.back() += " " + p.text;
          EXPECT_GT(passages[i - 1].word_count + p.word_count, max_words);
        } else {
          merged.push_back(p.text);
        }
        prev_group = group;
      }
      EXPECT_EQ(merged, group_texts(book));
    }
  }
}

TEST(PassageStore, JsonlRoundTrip) {
  const auto passages = segment_passages(parse_book(testing::fixture_book_markup(), "fixture"));
  std::stringstream buf;
  write_passages_jsonl(buf, passages);
  EXPECT_EQ(read_passages_jsonl(buf), passages);
  std::istringstream bad("{\"id\": 1}\n");
  EXPECT_THROW(read_passages_jsonl(bad), ParseError);
}

}  // namespace
}  // namespace arena
