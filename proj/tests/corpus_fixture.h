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

#ifndef ARENA_TESTS_CORPUS_FIXTURE_H_
#define ARENA_TESTS_CORPUS_FIXTURE_H_

#include <random>
#include <string>

#include "arena/corpus_parser.h"

namespace arena::testing {

// Synthetic textbook markup: 3 chapters, 10 sections (4 + 3 + 3) and 60
// paragraphs of 10..150 words, with inline markup, comments and script
// blocks sprinkled in.
inline std::string fixture_book_markup(unsigned seed = 17) {
  std::mt19937 rng(seed);
  static const char* words[] = {"energy", "wave", "cell", "atom", "force",
                                "acid",   "field", "mass", "light", "gene",
                                "charge", "ion"};
  std::uniform_int_distribution<int> len(10, 150), pick(0, 11);
  const int sections_per_chapter[] = {4, 3, 3};
  std::string doc = "<!DOCTYPE html><html><head><style>p { color: red; }</style></head><body>\n";
  for (int c = 0; c < 3; ++c) {
    doc += "<h1>Chapter " + std::to_string(c + 1) + "</h1>\n";
    for (int s = 0; s < sections_per_chapter[c]; ++s) {
      doc += "<h2 class=\"section\">Section " + std::to_string(c + 1) + "." +
             std::to_string(s + 1) + "</h2>\n";
      for (int p = 0; p < 6; ++p) {
        doc += "<p>";
        const int n = len(rng);
        for (int w = 0; w < n; ++w) {
          if (w) doc += (w % 17 == 0) ? "\n  " : " ";
          if (w % 23 == 5) doc += "<b>";
          doc += words[pick(rng)];
          if (w % 23 == 5) doc += "</b>";
          if (w % 31 == 7) doc += "<!-- note -->";
        }
        doc += ".</p>\n";
        if (p == 2) doc += "<script>var x = '<p>not text</p>';</script>\n";
      }
    }
  }
  doc += "</body></html>\n";
  return doc;
}

}  // namespace arena::testing

#endif  // ARENA_TESTS_CORPUS_FIXTURE_H_
