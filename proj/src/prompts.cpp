// Copyright 2026 The kwprune Authors. All Rights Reserved.
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

#include "kwprune/prompts.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "kwprune/plan.hpp"

namespace kwprune {

namespace {

constexpr std::string_view kAnalystSystem =
    "You are a sponsored search advertising analyst. You decide which keywords a "
    "campaign should stop bidding on so that its fixed daily budget, split evenly "
    "across active keywords, concentrates on the keywords that earn the most profit.";

constexpr std::string_view kCoderSystem =
    "You translate keyword pruning guidance into a pruning plan. You reply with the "
    "plan only: no prose, no explanations, no Markdown fences.";

constexpr std::string_view kReflectorSystem =
    "You review keyword pruning decisions after the market has responded and write "
    "short, concrete lessons for future decisions.";

}  // namespace

ChatRequest build_knowledge_prompt(const Overview& overview,
                                   std::span<const MemoryEntry> examples,
                                   std::string_view toolset_doc) {
  std::vector<const MemoryEntry*> ordered;
  for (const auto& e : examples) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->inserted_at < b->inserted_at;
  });

  std::string u;
  u += "## Task\n";
  u += "Analyse the campaign below and explain which keywords to prune for tomorrow "
       "and why. Weigh profit, conversion efficiency, engagement and reach trends. "
       "Pruned keywords free budget for the remaining ones; the campaign must keep at "
       "least N_min keywords.\n\n";
  u += "## Tools\n";
  u += toolset_doc;
  u += "\n\n## Past examples\n";
  if (ordered.empty()) {
    u += kNoExamplesSentinel;
    u += "\n";
  }
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& e = *ordered[i];
    u += "### Example " + std::to_string(i + 1) + " (campaign " + e.overview.campaign_id +
         ", day " + std::to_string(e.overview.day) + ", reward " + e.reward.to_string() +
         ")\n";
    u += "Overview:\n" + e.overview.text;
    u += "Knowledge:\n" + e.knowledge + "\n";
    u += "Plan:\n" + e.plan_text + "\n";
    u += "Reflection:\n" + e.reflection + "\n";
  }
  u += "\n## Current campaign\n";
  u += overview.text;
  u += "\n## Output\n";
  u += "Reply with concise pruning guidance: which columns to rank or filter on, "
       "which thresholds or weights to use, and how many keywords to keep. Refer "
       "only to the tools above.\n";
  return ChatRequest{AgentRole::Knowledge, std::string(kAnalystSystem), std::move(u),
                     kKnowledgeTemperature, 800};
}

ChatRequest build_code_prompt(std::string_view knowledge) {
  std::string u;
  u += "## Guidance\n";
  u += knowledge;
  u += "\n\n## Grammar\n";
  u += plan_grammar();
  u += "\n\n## Output\n";
  u += "Write one pruning plan that follows the guidance. Output only the plan "
       "statements, one per line.\n";
  return ChatRequest{AgentRole::Code, std::string(kCoderSystem), std::move(u),
                     kCodeTemperature, 300};
}

ChatRequest build_repair_prompt(std::string_view knowledge, std::string_view failed_plan,
                                std::string_view error_text) {
  std::string u;
  u += "## Guidance\n";
  u += knowledge;
  u += "\n\n## Failed plan\n";
  u += failed_plan;
  u += "\n\n## Error\n";
  u += error_text;
  u += "\n\n## Output\n";
  u += "Fix the plan. Output only the corrected plan statements, one per line.\n";
  return ChatRequest{AgentRole::Code, std::string(kCoderSystem), std::move(u),
                     kCodeTemperature, 300};
}

ChatRequest build_reflection_prompt(const Overview& overview, std::string_view plan_text,
                                    Money reward) {
  std::string u;
  u += "## Campaign before the decision\n";
  u += overview.text;
  u += "\n## Plan that was deployed\n";
  u += plan_text;
  u += "\n\n## Observed reward\n";
  u += "Next-day profit of the retained keywords: " + reward.to_string() + " RMB\n";
  u += "\n## Output\n";
  u += "In at most 120 words, reflect on how the pruning action relates to the "
       "observed reward and state one lesson for similar campaigns.\n";
  return ChatRequest{AgentRole::Reflection, std::string(kReflectorSystem), std::move(u),
                     kReflectionTemperature, 250};
}

}  // namespace kwprune
