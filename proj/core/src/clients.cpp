// SPDX-License-Identifier: Apache-2.0

#include "chemeval/clients.hpp"

#include <chrono>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace chemeval {

using nlohmann::json;

void validate_endpoint(const ModelEndpoint &ep) {
  if (ep.base_url.empty()) {
    throw ConfigError("endpoint base_url is empty");
  }
  if (ep.timeout_s <= 0) {
    throw ConfigError("endpoint timeout must be positive");
  }
  if (ep.max_retries < 0) {
    throw ConfigError("endpoint max_retries must be >= 0");
  }
  if (ep.max_concurrency < 1) {
    throw ConfigError("endpoint max_concurrency must be >= 1");
  }
}

MessagePart MessagePart::make_text(std::string t) {
  MessagePart p;
  p.kind = Kind::Text;
  p.text = std::move(t);
  return p;
}

MessagePart MessagePart::make_image(std::string base64,
                                    std::string media_type) {
  MessagePart p;
  p.kind = Kind::Image;
  p.image_base64 = std::move(base64);
  p.media_type = std::move(media_type);
  return p;
}

void ConcurrencyLimiter::acquire() {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return available_ > 0; });
  --available_;
}

void ConcurrencyLimiter::release() {
  {
    std::lock_guard lock(mutex_);
    ++available_;
  }
  cv_.notify_one();
}

namespace {

struct LimiterGuard {
  explicit LimiterGuard(ConcurrencyLimiter &l) : limiter(l) {
    limiter.acquire();
  }
  ~LimiterGuard() { limiter.release(); }
  ConcurrencyLimiter &limiter;
};

class HttplibTransport : public Transport {
public:
  HttplibTransport(std::string base_url, double timeout_s)
      : timeout_s_(timeout_s) {
    // split "scheme://host[:port]/prefix" into origin and path prefix
    std::size_t scheme = base_url.find("://");
    std::size_t path_start = scheme == std::string::npos
                                 ? base_url.find('/')
                                 : base_url.find('/', scheme + 3);
    if (path_start == std::string::npos) {
      origin_ = base_url;
    } else {
      origin_ = base_url.substr(0, path_start);
      prefix_ = base_url.substr(path_start);
      while (!prefix_.empty() && prefix_.back() == '/') {
        prefix_.pop_back();
      }
    }
  }

  TransportResponse post(const std::string &path, const std::string &body,
                         const std::vector<Header> &headers) override {
    httplib::Client client(origin_);
    const auto timeout =
        std::chrono::milliseconds(static_cast<long>(timeout_s_ * 1000));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers hs;
    for (const auto &[k, v] : headers) {
      hs.emplace(k, v);
    }
    auto res = client.Post(prefix_ + path, hs, body, "application/json");
    TransportResponse out;
    if (!res) {
      out.transport_ok = false;
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.transport_ok = true;
    out.status = res->status;
    out.body = res->body;
    return out;
  }

private:
  std::string origin_;
  std::string prefix_;
  double timeout_s_;
};

double jitter_fraction() {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  return std::uniform_real_distribution<double>(0.0, 0.1)(rng);
}

} // namespace

std::unique_ptr<Transport> make_http_transport(const std::string &base_url,
                                               double timeout_s) {
  return std::make_unique<HttplibTransport>(base_url, timeout_s);
}

OpenAiClient::OpenAiClient(ModelEndpoint ep)
    : OpenAiClient(ep, make_http_transport(ep.base_url, ep.timeout_s)) {}

OpenAiClient::OpenAiClient(ModelEndpoint ep,
                           std::unique_ptr<Transport> transport)
    : ep_(std::move(ep)), transport_(std::move(transport)),
      limiter_(ep_.max_concurrency) {
  validate_endpoint(ep_);
}

std::string OpenAiClient::request_body(const ModelEndpoint &ep,
                                       const ChatRequest &request) {
  json body;
  body["model"] = ep.model_name;
  body["temperature"] = ep.temperature;
  body["max_tokens"] = ep.max_tokens;
  body["messages"] = json::array();
  for (const Message &msg : request.messages) {
    json m;
    m["role"] = msg.role;
    if (msg.parts.size() == 1 && msg.parts[0].kind == MessagePart::Kind::Text) {
      m["content"] = msg.parts[0].text;
    } else {
      m["content"] = json::array();
      for (const MessagePart &part : msg.parts) {
        if (part.kind == MessagePart::Kind::Text) {
          m["content"].push_back({{"type", "text"}, {"text", part.text}});
        } else {
          m["content"].push_back(
              {{"type", "image_url"},
               {"image_url",
                {{"url", "data:" + part.media_type + ";base64," +
                             part.image_base64}}}});
        }
      }
    }
    body["messages"].push_back(std::move(m));
  }
  return body.dump();
}

ChatResponse OpenAiClient::chat(const ChatRequest &request) {
  if (request.messages.empty()) {
    throw BadRequest("empty chat request");
  }
  const std::string body = request_body(ep_, request);
  std::vector<Header> headers;
  if (!ep_.api_key_env.empty()) {
    if (const char *key = std::getenv(ep_.api_key_env.c_str())) {
      headers.emplace_back("Authorization", std::string("Bearer ") + key);
    }
  }

  const auto start = std::chrono::steady_clock::now();
  TransportResponse last;
  int attempt = 0;
  while (true) {
    {
      LimiterGuard guard(limiter_);
      last = transport_->post("/chat/completions", body, headers);
    }
    if (last.transport_ok && last.status == 200) {
      break;
    }
    if (last.transport_ok && (last.status == 401 || last.status == 403)) {
      throw AuthError("authentication failed (HTTP " +
                      std::to_string(last.status) + ")");
    }
    if (last.transport_ok && last.status >= 400 && last.status < 500 &&
        last.status != 429) {
      throw BadRequest("HTTP " + std::to_string(last.status) + ": " +
                       last.body);
    }
    if (attempt >= ep_.max_retries) {
      std::string why = last.transport_ok
                            ? "HTTP " + std::to_string(last.status)
                            : "transport error: " + last.error;
      throw Unavailable("endpoint unavailable after " +
                        std::to_string(attempt) + " retries (" + why + ")");
    }
    const double delay =
        ep_.backoff_base_s * static_cast<double>(1 << attempt);
    std::this_thread::sleep_for(std::chrono::duration<double>(
        delay * (1.0 + jitter_fraction())));
    ++attempt;
  }

  ChatResponse out;
  out.retries = attempt;
  out.latency_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  json parsed = json::parse(last.body, nullptr, false);
  if (parsed.is_discarded() || !parsed.contains("choices") ||
      !parsed["choices"].is_array() || parsed["choices"].empty()) {
    throw BadRequest("malformed chat-completions response body");
  }
  const json &msg = parsed["choices"][0];
  if (msg.contains("message") && msg["message"].contains("content") &&
      msg["message"]["content"].is_string()) {
    out.text = msg["message"]["content"].get<std::string>();
  }
  if (parsed.contains("usage")) {
    out.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
    out.completion_tokens = parsed["usage"].value("completion_tokens", 0);
  }
  return out;
}

StubChatClient::StubChatClient(ReplyFn fn, int max_concurrency)
    : fn_(std::move(fn)), limiter_(max_concurrency) {}

ChatResponse StubChatClient::chat(const ChatRequest &request) {
  LimiterGuard guard(limiter_);
  const int now = ++in_flight_;
  int prev = peak_.load();
  while (now > prev && !peak_.compare_exchange_weak(prev, now)) {
  }
  ++calls_;
  ChatResponse out;
  out.text = fn_(request);
  --in_flight_;
  return out;
}

std::string query_judge(ChatClient &client, const std::string &prompt) {
  ChatRequest req;
  req.messages.push_back(
      Message{"user", {MessagePart::make_text(prompt)}});
  try {
    return client.chat(req).text;
  } catch (const Unavailable &e) {
    throw JudgeUnavailable(e.what());
  }
}

namespace {

std::string trim_copy(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return "";
  }
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string last_user_text(const ChatRequest &request) {
  for (auto it = request.messages.rbegin(); it != request.messages.rend();
       ++it) {
    if (it->role != "user") {
      continue;
    }
    for (auto pit = it->parts.rbegin(); pit != it->parts.rend(); ++pit) {
      if (pit->kind == MessagePart::Kind::Text) {
        return pit->text;
      }
    }
  }
  return "";
}

} // namespace

std::string exact_match_judge_reply(const std::string &prompt) {
  const std::string blanks_marker = "Reference answers (one per blank):";
  const std::string student_marker = "Student answer:";
  std::size_t blanks_at = prompt.find(blanks_marker);
  std::size_t student_at = prompt.find(student_marker);
  if (blanks_at == std::string::npos || student_at == std::string::npos ||
      student_at < blanks_at) {
    return prompt; // not a blank-scoring prompt
  }
  const std::string section = prompt.substr(
      blanks_at + blanks_marker.size(),
      student_at - blanks_at - blanks_marker.size());
  const std::string student =
      trim_copy(prompt.substr(student_at + student_marker.size()));

  std::vector<std::string> references;
  std::istringstream in(section);
  for (std::string line; std::getline(in, line);) {
    line = trim_copy(line);
    std::size_t dot = line.find(". ");
    if (line.empty() || dot == std::string::npos ||
        line.find_first_not_of("0123456789") != dot) {
      continue;
    }
    references.push_back(trim_copy(line.substr(dot + 2)));
  }
  std::string reply;
  for (std::size_t i = 0; i < references.size(); ++i) {
    if (i) {
      reply += ',';
    }
    reply += student.find(references[i]) != std::string::npos ? '1' : '0';
  }
  return reply;
}

std::unique_ptr<ChatClient>
make_client(const ModelEndpoint &ep,
            const std::map<std::string, std::string> &gold_by_id) {
  validate_endpoint(ep);
  if (ep.base_url.rfind("stub:", 0) != 0) {
    return std::make_unique<OpenAiClient>(ep);
  }
  const std::string mode = ep.base_url.substr(5);
  if (mode == "echo") {
    return std::make_unique<StubChatClient>(
        [](const ChatRequest &req) { return last_user_text(req); },
        ep.max_concurrency);
  }
  if (mode == "gold") {
    return std::make_unique<StubChatClient>(
        [gold_by_id](const ChatRequest &req) {
          auto it = gold_by_id.find(req.record_id);
          if (it == gold_by_id.end()) {
            return std::string("I do not know this record.");
          }
          return "The answer is " + it->second + " .";
        },
        ep.max_concurrency);
  }
  if (mode == "garbage") {
    return std::make_unique<StubChatClient>(
        [](const ChatRequest &) {
          return std::string("qqqq zzzz xyzzy 12x34");
        },
        ep.max_concurrency);
  }
  if (mode == "judge-exact") {
    return std::make_unique<StubChatClient>(
        [](const ChatRequest &req) {
          return exact_match_judge_reply(last_user_text(req));
        },
        ep.max_concurrency);
  }
  throw ConfigError("unknown stub mode: " + mode);
}

} // namespace chemeval
