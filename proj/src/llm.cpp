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

#include "kwprune/llm.hpp"

#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace kwprune {

using nlohmann::json;

std::string_view role_tag(AgentRole role) {
  switch (role) {
    case AgentRole::Knowledge: return "knowledge";
    case AgentRole::Code: return "code";
    case AgentRole::Reflection: return "reflection";
  }
  return "?";
}

std::optional<AgentRole> parse_role_tag(std::string_view tag) {
  for (AgentRole r : {AgentRole::Knowledge, AgentRole::Code, AgentRole::Reflection}) {
    if (role_tag(r) == tag) return r;
  }
  return std::nullopt;
}

ScriptExhausted::ScriptExhausted(AgentRole r)
    : GatewayError("script exhausted for role '" + std::string(role_tag(r)) + "'"),
      role(r) {}

// -- scripted ----------------------------------------------------------------

ScriptedBackend ScriptedBackend::load(std::istream& source) {
  ScriptedBackend backend;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      auto tag = j.at("role_tag").get<std::string>();
      auto role = parse_role_tag(tag);
      if (!role) {
        throw std::invalid_argument("unknown role_tag '" + tag + "'");
      }
      backend.push(*role, j.at("text").get<std::string>());
    } catch (const std::exception& e) {
      throw std::invalid_argument("script line " + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  return backend;
}

void ScriptedBackend::push(AgentRole role, std::string text) {
  std::lock_guard lock(mu_);
  queues_[role].items.push_back(std::move(text));
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  auto& q = queues_[request.role];
  if (q.next >= q.items.size()) {
    if (!cycle_ || q.items.empty()) throw ScriptExhausted(request.role);
    q.next = 0;
  }
  return ChatResponse{q.items[q.next++], BackendKind::Scripted,
                      std::chrono::milliseconds{0}};
}

std::size_t ScriptedBackend::remaining(AgentRole role) const {
  std::lock_guard lock(mu_);
  auto it = queues_.find(role);
  return it == queues_.end() ? 0 : it->second.items.size() - it->second.next;
}

// -- live --------------------------------------------------------------------

HttpBackend::HttpBackend(LiveBackendConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw std::invalid_argument("live LLM backend needs llm.endpoint");
  }
  if (!config_.sleep) {
    config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string HttpBackend::request_body(const ChatRequest& request) const {
  json body = {
      {"model", config_.model},
      {"messages",
       json::array({{{"role", "system"}, {"content", request.system_prompt}},
                    {{"role", "user"}, {"content", request.user_prompt}}})},
      {"temperature", request.temperature},
      {"max_tokens", request.max_tokens}};
  return body.dump();
}

std::string HttpBackend::parse_response_body(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    throw ProtocolError("response body is not valid JSON");
  }
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) {
      throw ProtocolError("choices[0].message.content is not a string");
    }
    auto text = content.get<std::string>();
    if (text.empty()) {
      throw ProtocolError("empty completion text");
    }
    return text;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("unexpected response shape: ") + e.what());
  }
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
  httplib::Client client(config_.endpoint);
  auto secs = static_cast<time_t>(config_.timeout_secs);
  auto usecs = static_cast<time_t>((config_.timeout_secs - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  const std::string body = request_body(request);

  std::string last_error;
  for (int attempt = 0;; ++attempt) {
    auto start = std::chrono::steady_clock::now();
    auto res = client.Post(config_.path, headers, body, "application/json");
    auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    bool transient = false;
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      transient = true;
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      transient = true;
    } else if (res->status != 200) {
      throw TransportError("HTTP " + std::to_string(res->status) + " from " +
                           config_.endpoint + config_.path);
    } else {
      return ChatResponse{parse_response_body(res->body), BackendKind::Live, latency};
    }
    if (!transient || attempt >= config_.max_retries) break;
    config_.sleep(std::chrono::milliseconds(500LL << attempt));
  }
  throw TransportError(last_error + " after " + std::to_string(config_.max_retries) +
                       " retries");
}

std::string api_key_from_env() {
  const char* key = std::getenv("KP_LLM_API_KEY");
  return key ? key : "";
}

}  // namespace kwprune
