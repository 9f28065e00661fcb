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

#include "arena/text_norm.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <random>
#include <set>

#include "gtest/gtest.h"

namespace arena {
namespace {

TEST(NormalizeText, Examples) {
  EXPECT_EQ(normalize_text("Who am I?").value(), "who am i");
  EXPECT_EQ(normalize_text("  wave \t propagation ").value(), "wave propagation");
  EXPECT_EQ(normalize_text("X-ray").value(), "x ray");
}

TEST(NormalizeText, SlashesAndUnicodePunctuation) {
  EXPECT_EQ(normalize_text("km/h").value(), "km h");
  EXPECT_EQ(normalize_text("\xE2\x80\x9CQuoted\xE2\x80\x9D \xC2\xBFno?").value(),
            "quoted no");
  EXPECT_EQ(normalize_text("90\xC2\xB0 angle, 5\xE2\x80\xB2 2\xE2\x80\xB3").value(),
            "90 angle 5 2");
  EXPECT_EQ(normalize_text("don't").value(), "dont");
  EXPECT_EQ(normalize_text("H2O + CO2").value(), "h2o + co2");
}

TEST(NormalizeText, UnicodeLowercase) {
  EXPECT_EQ(normalize_text("\xC3\x89NERGIE").value(), "\xC3\xA9nergie");
  EXPECT_EQ(normalize_text("\xCE\xA9").value(), "\xCF\x89");
}

TEST(NormalizeText, InvalidUtf8BytesDropped) {
  EXPECT_EQ(normalize_text("ab\xFF" "cd").value(), "abcd");
}

TEST(NormalizeAnswer, Examples) {
  EXPECT_EQ(normalize_answer("The Polarization.").value(), "polarization");
  EXPECT_EQ(normalize_answer("a  Wave").value(), "wave");
  EXPECT_TRUE(normalize_answer("an").empty());
}

TEST(NormalizeAnswer, ArticlesOnlyAsWholeWords) {
  EXPECT_EQ(normalize_answer("Theory of an atom").value(), "theory of atom");
  EXPECT_EQ(normalize_answer("anion").value(), "anion");
}

TEST(NormalizeText, ArticlesKeptForClues) {
  EXPECT_EQ(normalize_text("The wave").value(), "the wave");
}

// Random strings drawn from a mix of ASCII, Latin-1, Greek, punctuation and
// whitespace code points.
std::string random_text(std::mt19937& rng) {
  static const std::vector<UChar32> pool = [] {
    std::vector<UChar32> p;
    for (UChar32 c = 0x20; c < 0x7F; ++c) p.push_back(c);
    for (UChar32 c : {0x09, 0x0A, 0x0D, 0xA0, 0xB0, 0xBF, 0xC0, 0xC9, 0xDF,
                      0xE9, 0x391, 0x3A9, 0x3C9, 0x2010, 0x2013, 0x2014, 0x2018,
                      0x2019, 0x201C, 0x201D, 0x2026, 0x2032, 0x2033, 0x2044,
                      0x3000, 0x3001, 0x2212, 0x00D7})
      p.push_back(c);
    return p;
  }();
  std::uniform_int_distribution<std::size_t> len(0, 24), pick(0, pool.size() - 1);
  std::string s;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[U8_MAX_LENGTH];
    int32_t k = 0;
    UBool err = false;
    U8_APPEND(buf, k, U8_MAX_LENGTH, pool[pick(rng)], err);
    EXPECT_FALSE(err);
    s.append(buf, static_cast<std::size_t>(k));
  }
  return s;
}

void expect_normalized_form(const std::string& v) {
  EXPECT_EQ(v.find("  "), std::string::npos) << v;
  if (!v.empty()) {
    EXPECT_NE(v.front(), ' ') << v;
    EXPECT_NE(v.back(), ' ') << v;
  }
  const auto* bytes = reinterpret_cast<const uint8_t*>(v.data());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(v.size());
  while (i < n) {
    UChar32 c;
    U8_NEXT(bytes, i, n, c);
    ASSERT_GE(c, 0);
    EXPECT_EQ(u_tolower(c), c) << v;
    EXPECT_FALSE(u_ispunct(c)) << v;
    EXPECT_TRUE(c == ' ' || !u_isUWhiteSpace(c)) << v;
  }
}

TEST(NormalizeProperty, InvariantsOnFuzzedCorpus) {
  std::mt19937 rng(20231019);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::string s = random_text(rng);
    const NormalizedText once = normalize_text(s);
    expect_normalized_form(once.value());
    EXPECT_EQ(normalize_text(once.value()), once) << s;

    const auto answer_tokens = normalize_answer(s).tokens();
    const auto text_tokens = once.tokens();
    const std::multiset<std::string> bag(text_tokens.begin(), text_tokens.end());
    for (const auto& t : answer_tokens) EXPECT_TRUE(bag.count(t)) << s;
    expect_normalized_form(normalize_answer(s).value());
  }
}

}  // namespace
}  // namespace arena
