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

#include <chrono>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kwprune {

enum class AgentRole { Knowledge, Code, Reflection };

std::string_view role_tag(AgentRole role);
std::optional<AgentRole> parse_role_tag(std::string_view tag);

struct ChatRequest {
  AgentRole role = AgentRole::Knowledge;
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.7;
  int max_tokens = 512;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;
};

enum class BackendKind { Live, Scripted };

struct ChatResponse {
  std::string text;
  BackendKind backend = BackendKind::Scripted;
  std::chrono::milliseconds latency{0};
};

class GatewayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TransportError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class ProtocolError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class ScriptExhausted : public GatewayError {
 public:
  explicit ScriptExhausted(AgentRole r);
  AgentRole role;
};

/// One completion interface for the knowledge, code and reflection agents.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;

  /// Throws a GatewayError subclass on failure.
  virtual ChatResponse complete(const ChatRequest& request) = 0;

  /// True if responses depend on call order, so callers must issue
  /// completions in a deterministic sequence.
  virtual bool order_sensitive() const { return false; }
};

/// Replays canned responses: one FIFO queue per role.
///
/// The script file is newline-delimited JSON, one {"role_tag", "text"} object
/// per line, with role_tag one of knowledge, code, reflection.
class ScriptedBackend : public ChatBackend {
 public:
  ScriptedBackend() = default;
  ScriptedBackend(ScriptedBackend&& other) noexcept
      : queues_(std::move(other.queues_)), cycle_(other.cycle_) {}

  /// Throws std::invalid_argument naming the offending line.
  static ScriptedBackend load(std::istream& source);

  void push(AgentRole role, std::string text);

  /// When set, an exhausted queue restarts from its first response instead
  /// of throwing ScriptExhausted.
  void set_cycle(bool cycle) { cycle_ = cycle; }

  ChatResponse complete(const ChatRequest& request) override;
  bool order_sensitive() const override { return true; }

  std::size_t remaining(AgentRole role) const;

 private:
  struct Queue {
    std::vector<std::string> items;
    std::size_t next = 0;
  };
  mutable std::mutex mu_;
  std::map<AgentRole, Queue> queues_;
  bool cycle_ = false;
};

struct LiveBackendConfig {
  /// Scheme, host and optional port, e.g. "https://api.openai.com".
  std::string endpoint;
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4.1-nano";
  std::string api_key;
  double timeout_secs = 30.0;
  int max_retries = 3;
  /// Backoff before retry i (0-based) is 0.5s * 2^i. Tests swap the sleeper.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Chat-completions client: POSTs {model, messages: [system, user],
/// temperature, max_tokens} and reads choices[0].message.content.
///
/// Connection failures, 429 and 5xx responses are retried up to max_retries
/// times; other 4xx responses and malformed bodies fail immediately.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(LiveBackendConfig config);

  ChatResponse complete(const ChatRequest& request) override;

  /// The JSON request body, exposed for tests.
  std::string request_body(const ChatRequest& request) const;

  /// Extracts the completion text; throws ProtocolError.
  static std::string parse_response_body(std::string_view body);

 private:
  LiveBackendConfig config_;
};

/// Reads the API key from KP_LLM_API_KEY; empty if unset.
std::string api_key_from_env();

}  // namespace kwprune
