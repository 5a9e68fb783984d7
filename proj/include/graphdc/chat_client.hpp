#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <semaphore>
#include <stdexcept>
#include <string>

#include "graphdc/reasoner.hpp"

namespace graphdc {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The endpoint answered, but not with an assistant message.
class MalformedResponse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LlmConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4.1-mini";
  double timeout_seconds = 60.0;
  int max_retries = 3;
  std::chrono::milliseconds backoff_initial{1000};  // doubles per retry: 1s, 2s, 4s
  std::size_t max_in_flight = 4;
  std::string api_key_env = "GRAPHDC_API_KEY";
  std::string system_prompt = "You are a careful assistant for graph algorithm reasoning.";

  /// Throws std::invalid_argument if timeout <= 0, max_retries < 0,
  /// max_in_flight == 0, or the endpoint is not an http(s) URL.
  void validate() const;
};

/// Reads a JSON config file; keys mirror LlmConfig field names, with
/// backoff_initial given as "backoff_initial_ms". Missing keys keep defaults.
LlmConfig load_llm_config(const std::filesystem::path& path);

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// One HTTP POST of a JSON body. Throws TransportError when no response was
/// received (connection refused, timeout).
class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual HttpResponse post(const std::string& json_body, const std::string& bearer_token,
                            std::chrono::duration<double> timeout) = 0;
};

/// cpp-httplib transport. A fresh connection per request keeps it safe
/// for concurrent use.
class HttpChatTransport final : public ChatTransport {
 public:
  explicit HttpChatTransport(std::string endpoint_url);
  HttpResponse post(const std::string& json_body, const std::string& bearer_token,
                    std::chrono::duration<double> timeout) override;

 private:
  std::string scheme_host_port_;
  std::string path_;
};

struct ChatUsage {
  std::uint64_t requests = 0;
  std::uint64_t retries = 0;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;

  bool operator==(const ChatUsage&) const = default;
};

/// Chat-completions client: temperature 0, bearer auth, bounded in-flight
/// requests, exponential backoff on transport failures and HTTP 429/5xx.
class ChatClient {
 public:
  ChatClient(LlmConfig config, std::unique_ptr<ChatTransport> transport, std::string api_key);

  /// HTTP transport, key read from the configured environment variable.
  static std::shared_ptr<ChatClient> from_config(const LlmConfig& config);

  /// Sends one user message and returns the assistant content verbatim.
  /// Throws TransportError once retries are exhausted (or on a non-retryable
  /// HTTP status) and MalformedResponse if the reply holds no assistant message.
  std::string complete(const std::string& user_message);

  ChatUsage usage() const;
  const LlmConfig& config() const { return config_; }

  /// The JSON request body sent for a user message.
  std::string request_body(const std::string& user_message) const;

 private:
  LlmConfig config_;
  std::unique_ptr<ChatTransport> transport_;
  std::string api_key_;
  std::counting_semaphore<> in_flight_;
  std::atomic<std::uint64_t> requests_{0};
  std::atomic<std::uint64_t> retries_{0};
  std::atomic<std::uint64_t> prompt_tokens_{0};
  std::atomic<std::uint64_t> completion_tokens_{0};
};

/// Sub-agent backed by a chat model: the sub-query text is the user message.
class LlmChatReasoner final : public Reasoner {
 public:
  explicit LlmChatReasoner(std::shared_ptr<ChatClient> client) : client_(std::move(client)) {}
  std::string name() const override { return "llm"; }
  std::string answer(const Subgraph& sub, const SubQuery& sq) override;
  const std::shared_ptr<ChatClient>& client() const { return client_; }

 private:
  std::shared_ptr<ChatClient> client_;
};

}  // namespace graphdc
