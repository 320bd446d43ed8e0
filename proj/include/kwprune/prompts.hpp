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

#pragma once

#include <span>
#include <string_view>

#include "kwprune/llm.hpp"
#include "kwprune/memory.hpp"
#include "kwprune/money.hpp"

namespace kwprune {

inline constexpr double kKnowledgeTemperature = 0.7;
inline constexpr double kCodeTemperature = 0.2;
inline constexpr double kReflectionTemperature = 0.7;

/// Sentinel used when memory yields no examples.
inline constexpr std::string_view kNoExamplesSentinel = "No prior examples available.";

// Prompt builders are pure: the same inputs always give the same request.

/// Sections in order: task, tool documentation, examples (oldest first),
/// current overview, output instructions.
ChatRequest build_knowledge_prompt(const Overview& overview,
                                   std::span<const MemoryEntry> examples,
                                   std::string_view toolset_doc);

/// Asks for a bare plan in the pruning DSL; embeds the grammar.
ChatRequest build_code_prompt(std::string_view knowledge);

/// Embeds the failed plan verbatim and the explain_error() text.
ChatRequest build_repair_prompt(std::string_view knowledge, std::string_view failed_plan,
                                std::string_view error_text);

/// Asks for a reflection of at most 120 words tying the action to its reward.
ChatRequest build_reflection_prompt(const Overview& overview, std::string_view plan_text,
                                    Money reward);

}  // namespace kwprune
