#include "graphdc/chat_client.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace graphdc {

using nlohmann::json;

void LlmConfig::validate() const {
  if (!(timeout_seconds > 0)) throw std::invalid_argument("timeout_seconds must be positive");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be non-negative");
  if (max_in_flight == 0) throw std::invalid_argument("max_in_flight must be positive");
  if (endpoint.rfind("http://", 0) != 0 && endpoint.rfind("https://", 0) != 0) {
    throw std::invalid_argument("endpoint must be an http(s) URL: " + endpoint);
  }
}

LlmConfig load_llm_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  LlmConfig c;
  c.endpoint = j.value("endpoint", c.endpoint);
  c.model = j.value("model", c.model);
  c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.backoff_initial = std::chrono::milliseconds(
      j.value("backoff_initial_ms", static_cast<std::int64_t>(c.backoff_initial.count())));
  c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.system_prompt = j.value("system_prompt", c.system_prompt);
  c.validate();
  return c;
}

HttpChatTransport::HttpChatTransport(std::string endpoint_url) {
  const auto scheme_end = endpoint_url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("bad endpoint " + endpoint_url);
  const auto path_start = endpoint_url.find('/', scheme_end + 3);
  scheme_host_port_ = endpoint_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint_url.substr(path_start);
}

HttpResponse HttpChatTransport::post(const std::string& json_body, const std::string& bearer_token,
                                     std::chrono::duration<double> timeout) {
  httplib::Client client(scheme_host_port_);
  const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  client.set_connection_timeout(usec);
  client.set_read_timeout(usec);
  client.set_write_timeout(usec);
  httplib::Headers headers;
  if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);
  auto res = client.Post(path_, headers, json_body, "application/json");
  if (!res) {
    throw TransportError("POST " + scheme_host_port_ + path_ + " failed: " +
                         httplib::to_string(res.error()));
  }
  return {res->status, res->body};
}

ChatClient::ChatClient(LlmConfig config, std::unique_ptr<ChatTransport> transport,
                       std::string api_key)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      api_key_(std::move(api_key)),
      in_flight_(static_cast<std::ptrdiff_t>(config_.max_in_flight)) {
  config_.validate();
}

std::shared_ptr<ChatClient> ChatClient::from_config(const LlmConfig& config) {
  config.validate();
  const char* key = std::getenv(config.api_key_env.c_str());
  return std::make_shared<ChatClient>(config, std::make_unique<HttpChatTransport>(config.endpoint),
                                      key ? key : "");
}

std::string ChatClient::request_body(const std::string& user_message) const {
  json body = {
      {"model", config_.model},
      {"temperature", 0},
      {"messages",
       json::array({{{"role", "system"}, {"content", config_.system_prompt}},
                    {{"role", "user"}, {"content", user_message}}})},
  };
  return body.dump();
}

namespace {

bool retryable_status(int status) { return status == 429 || status >= 500; }

std::string parse_reply(const std::string& body, std::uint64_t& prompt_tokens,
                        std::uint64_t& completion_tokens) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    throw MalformedResponse("response body is not JSON");
  }
  const auto* choices = j.is_object() && j.contains("choices") ? &j["choices"] : nullptr;
  if (!choices || !choices->is_array() || choices->empty()) {
    throw MalformedResponse("response has no choices");
  }
  const auto& first = (*choices)[0];
  if (!first.is_object() || !first.contains("message") || !first["message"].is_object()) {
    throw MalformedResponse("first choice has no message");
  }
  const auto& message = first["message"];
  if (message.contains("role") && message["role"] != "assistant") {
    throw MalformedResponse("first choice is not an assistant message");
  }
  if (!message.contains("content") || !message["content"].is_string()) {
    throw MalformedResponse("assistant message has no text content");
  }
  if (j.contains("usage") && j["usage"].is_object()) {
    prompt_tokens = j["usage"].value("prompt_tokens", std::uint64_t{0});
    completion_tokens = j["usage"].value("completion_tokens", std::uint64_t{0});
  }
  return message["content"].get<std::string>();
}

}  // namespace

std::string ChatClient::complete(const std::string& user_message) {
  const std::string body = request_body(user_message);
  const std::chrono::duration<double> timeout(config_.timeout_seconds);
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      ++retries_;
      std::this_thread::sleep_for(config_.backoff_initial * (1 << (attempt - 1)));
    }
    std::optional<HttpResponse> response;
    in_flight_.acquire();
    try {
      ++requests_;
      response = transport_->post(body, api_key_, timeout);
    } catch (const TransportError& e) {
      last_error = e.what();
    }
    in_flight_.release();
    if (!response) continue;
    if (response->status == 200) {
      std::uint64_t in_tokens = 0, out_tokens = 0;
      std::string content = parse_reply(response->body, in_tokens, out_tokens);
      prompt_tokens_ += in_tokens;
      completion_tokens_ += out_tokens;
      return content;
    }
    last_error = "HTTP " + std::to_string(response->status);
    if (!retryable_status(response->status)) {
      throw TransportError(last_error + ": " + response->body.substr(0, 200));
    }
  }
  throw TransportError("chat request failed after " + std::to_string(config_.max_retries + 1) +
                       " attempt(s): " + last_error);
}

ChatUsage ChatClient::usage() const {
  return {requests_.load(), retries_.load(), prompt_tokens_.load(), completion_tokens_.load()};
}

std::string LlmChatReasoner::answer(const Subgraph& sub, const SubQuery& sq) {
  if (sq.subgraph_id != sub.id) {
    throw std::invalid_argument("sub-query for subgraph " + std::to_string(sq.subgraph_id) +
                                " sent to subgraph " + std::to_string(sub.id));
  }
  return client_->complete(sq.text);
}

}  // namespace graphdc
