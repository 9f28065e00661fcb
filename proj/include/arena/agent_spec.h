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

#ifndef ARENA_AGENT_SPEC_H_
#define ARENA_AGENT_SPEC_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "arena/agents.h"
#include "arena/remote_agent.h"

namespace arena {

// Textual agent choice used by the CLI and the HTTP API:
//   "oracle:K", "retrieval:THETA[:every_token|:clue_end]", "remote:HOST:PORT", "human".
struct AgentSpec {
  enum class Kind { kOracle, kRetrieval, kRemote, kHuman };
  Kind kind = Kind::kOracle;
  int buzz_at_clue = 1;
  BuzzPolicy policy;
  std::string endpoint;
};

// Throws Error on anything else.
AgentSpec parse_agent_spec(std::string_view text);
std::string to_string(const AgentSpec& spec);

struct AgentContext {
  std::span<const Riddle> riddles;       // gold answers for oracles
  const CorpusIndex* index = nullptr;    // required for retrieval agents
  RemoteDeadlines deadlines;
  RemoteAgent::Logger logger;
};

// Throws Error for human specs and for retrieval without an index.
std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const AgentContext& context);

}  // namespace arena

#endif  // ARENA_AGENT_SPEC_H_
