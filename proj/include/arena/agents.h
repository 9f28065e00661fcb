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

#ifndef ARENA_AGENTS_H_
#define ARENA_AGENTS_H_

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "arena/agent.h"
#include "arena/riddle_data.h"
#include "arena/retrieval.h"

namespace arena {

// Buzzes with confidence 1 at the end of clue k and answers the primary gold
// answer. Riddles with fewer than k clues are never buzzed on.
class OracleAgent : public Agent {
 public:
  // `golds` maps riddle id to the answer to give. Throws Error if k < 1.
  OracleAgent(int buzz_at_clue, std::map<std::string, std::string> golds);

  void deliver(const AgentInbound& msg, std::vector<AgentOutbound>& out) override;

 private:
  int buzz_at_clue_;
  std::map<std::string, std::string> golds_;
  const std::string* current_ = nullptr;
};

std::unique_ptr<OracleAgent> oracle_agent(int buzz_at_clue, std::span<const Riddle> riddles);

struct BuzzPolicy {
  enum class EvaluateAt { kEveryToken, kClueEnd };
  double threshold = 0.5;  // finite, >= 0; values above 1 never fire
  EvaluateAt evaluate_at = EvaluateAt::kClueEnd;
};

// One evaluation point of a RetrievalAgent.
struct RetrievalProbe {
  std::string riddle_id;
  int clue_index = 0;
  std::string query;
  ContextBundle bundle;
  bool buzzed = false;
};

// Searches the index with every token heard so far and buzzes once the mean
// top-3 score reaches the threshold. The answer is the last heading of the
// best passage.
class RetrievalAgent : public Agent {
 public:
  using Observer = std::function<void(const RetrievalProbe&)>;

  // The index must outlive the agent. Throws Error on a bad threshold.
  RetrievalAgent(const CorpusIndex& index, BuzzPolicy policy, Observer observer = {});

  void deliver(const AgentInbound& msg, std::vector<AgentOutbound>& out) override;

 private:
  void evaluate(int clue_index, std::vector<AgentOutbound>& out);

  const CorpusIndex& index_;
  BuzzPolicy policy_;
  Observer observer_;
  std::string riddle_id_;
  std::string heard_;
  std::string answer_;
  bool buzzed_ = false;
  bool granted_ = false;
};

std::unique_ptr<RetrievalAgent> retrieval_agent(const CorpusIndex& index, BuzzPolicy policy,
                                                RetrievalAgent::Observer observer = {});

}  // namespace arena

#endif  // ARENA_AGENTS_H_
