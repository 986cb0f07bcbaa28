// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_CLIENTS_HPP
#define CHEMEVAL_CLIENTS_HPP

#include <atomic>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "chemeval/errors.hpp"
#include "chemeval/extraction.hpp"

namespace chemeval {

struct ModelEndpoint {
  std::string base_url;     // e.g. "https://api.example.com/v1" or "stub:gold"
  std::string api_key_env;  // env var holding the key; empty = no auth header
  std::string model_name;
  double timeout_s = 60.0;
  int max_retries = 3;
  int max_concurrency = 4;
  double backoff_base_s = 1.0; // exponential, factor 2, jittered
  double temperature = 0.0;
  int max_tokens = 1024;
};

void validate_endpoint(const ModelEndpoint &ep);

struct MessagePart {
  enum class Kind { Text, Image };
  Kind kind = Kind::Text;
  std::string text;         // Text
  std::string image_base64; // Image
  std::string media_type = "image/png";

  static MessagePart make_text(std::string t);
  static MessagePart make_image(std::string base64, std::string media_type);
};

struct Message {
  std::string role; // system | user | assistant
  std::vector<MessagePart> parts;
};

struct ChatRequest {
  std::vector<Message> messages;
  std::string record_id; // harness metadata, never sent over the wire
};

struct ChatResponse {
  std::string text;
  int retries = 0;
  double latency_ms = 0.0;
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

class ChatClient {
public:
  virtual ~ChatClient() = default;
  virtual ChatResponse chat(const ChatRequest &request) = 0;
};

/// Counting semaphore bounding in-flight requests per endpoint.
class ConcurrencyLimiter {
public:
  explicit ConcurrencyLimiter(int limit) : available_(limit) {}

  void acquire();
  void release();

private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int available_;
};

struct TransportResponse {
  bool transport_ok = false;
  int status = 0;
  std::string body;
  std::string error;
};

using Header = std::pair<std::string, std::string>;

/// Seam between protocol logic and the network; tests inject fakes.
class Transport {
public:
  virtual ~Transport() = default;
  virtual TransportResponse post(const std::string &path,
                                 const std::string &body,
                                 const std::vector<Header> &headers) = 0;
};

std::unique_ptr<Transport> make_http_transport(const std::string &base_url,
                                               double timeout_s);

/// OpenAI-compatible chat-completions client. Retries transport errors and
/// 429/5xx with exponential backoff; 401/403 -> AuthError (no retry); other
/// 4xx -> BadRequest (no retry). The API key is read from the environment at
/// call time and travels only in the Authorization header.
class OpenAiClient : public ChatClient {
public:
  explicit OpenAiClient(ModelEndpoint ep);
  OpenAiClient(ModelEndpoint ep, std::unique_ptr<Transport> transport);

  ChatResponse chat(const ChatRequest &request) override;

  /// Wire body for a request; exposed so tests can assert key hygiene.
  static std::string request_body(const ModelEndpoint &ep,
                                  const ChatRequest &request);

private:
  ModelEndpoint ep_;
  std::unique_ptr<Transport> transport_;
  ConcurrencyLimiter limiter_;
};

/// Deterministic in-process stub; the reply function sees the full request.
class StubChatClient : public ChatClient {
public:
  using ReplyFn = std::function<std::string(const ChatRequest &)>;

  explicit StubChatClient(ReplyFn fn, int max_concurrency = 1 << 20);

  ChatResponse chat(const ChatRequest &request) override;

  int peak_concurrency() const { return peak_.load(); }
  int call_count() const { return calls_.load(); }

private:
  ReplyFn fn_;
  ConcurrencyLimiter limiter_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> peak_{0};
  std::atomic<int> calls_{0};
};

/// Text-only single-turn request through any chat client.
std::string query_judge(ChatClient &client, const std::string &prompt);

/// JudgeClient adapter over a chat client.
class ChatJudge : public JudgeClient {
public:
  explicit ChatJudge(ChatClient &client) : client_(client) {}
  std::string query(const std::string &prompt) override {
    return query_judge(client_, prompt);
  }

private:
  ChatClient &client_;
};

/// Grades a blank-scoring prompt by substring match of each reference answer
/// inside the student answer; used as the deterministic offline judge.
std::string exact_match_judge_reply(const std::string &prompt);

/// Builds a client for an endpoint. base_url "stub:<mode>" selects an
/// offline stub: echo (last user text), gold (gold answer for the record id),
/// garbage (fixed non-answer), judge-exact (substring-matching blank judge).
std::unique_ptr<ChatClient>
make_client(const ModelEndpoint &ep,
            const std::map<std::string, std::string> &gold_by_id = {});

} // namespace chemeval

#endif // CHEMEVAL_CLIENTS_HPP
