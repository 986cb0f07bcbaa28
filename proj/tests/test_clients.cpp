// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <thread>

#include <json.hpp>

#include "chemeval/clients.hpp"

using namespace chemeval;
using nlohmann::json;

namespace {

struct Call {
  std::string path;
  std::string body;
  std::vector<Header> headers;
};

/// Transport fake replaying a scripted response sequence.
class FakeTransport : public Transport {
public:
  explicit FakeTransport(std::vector<TransportResponse> script)
      : script_(std::move(script)) {}

  TransportResponse post(const std::string &path, const std::string &body,
                         const std::vector<Header> &headers) override {
    calls.push_back(Call{path, body, headers});
    if (next_ >= script_.size()) {
      return script_.back();
    }
    return script_[next_++];
  }

  std::vector<Call> calls;

private:
  std::vector<TransportResponse> script_;
  std::size_t next_ = 0;
};

TransportResponse ok_response(const std::string &text) {
  json body;
  body["choices"] = json::array(
      {{{"message", {{"role", "assistant"}, {"content", text}}}}});
  body["usage"] = {{"prompt_tokens", 12}, {"completion_tokens", 3}};
  TransportResponse r;
  r.transport_ok = true;
  r.status = 200;
  r.body = body.dump();
  return r;
}

TransportResponse http_status(int status) {
  TransportResponse r;
  r.transport_ok = true;
  r.status = status;
  r.body = "{}";
  return r;
}

TransportResponse transport_down() {
  TransportResponse r;
  r.transport_ok = false;
  r.error = "connection refused";
  return r;
}

ModelEndpoint fast_endpoint() {
  ModelEndpoint ep;
  ep.base_url = "http://localhost:1/v1";
  ep.model_name = "test-model";
  ep.max_retries = 3;
  ep.backoff_base_s = 0.001; // keep retry tests fast
  return ep;
}

ChatRequest text_request(const std::string &text) {
  ChatRequest req;
  req.record_id = "rec-1";
  req.messages.push_back(Message{"user", {MessagePart::make_text(text)}});
  return req;
}

std::unique_ptr<OpenAiClient> client_with(ModelEndpoint ep,
                                          FakeTransport *&out,
                                          std::vector<TransportResponse> script) {
  auto transport = std::make_unique<FakeTransport>(std::move(script));
  out = transport.get();
  return std::make_unique<OpenAiClient>(std::move(ep),
                                        std::move(transport));
}

} // namespace

TEST_CASE("endpoint validation") {
  ModelEndpoint ep = fast_endpoint();
  CHECK_NOTHROW(validate_endpoint(ep));
  ep.base_url = "";
  CHECK_THROWS_AS(validate_endpoint(ep), ConfigError);
  ep = fast_endpoint();
  ep.timeout_s = 0;
  CHECK_THROWS_AS(validate_endpoint(ep), ConfigError);
  ep = fast_endpoint();
  ep.max_retries = -1;
  CHECK_THROWS_AS(validate_endpoint(ep), ConfigError);
  ep = fast_endpoint();
  ep.max_concurrency = 0;
  CHECK_THROWS_AS(validate_endpoint(ep), ConfigError);
}

TEST_CASE("successful call parses text and usage") {
  FakeTransport *t = nullptr;
  auto client = client_with(fast_endpoint(), t, {ok_response("hello")});
  ChatResponse res = client->chat(text_request("hi"));
  CHECK(res.text == "hello");
  CHECK(res.retries == 0);
  CHECK(res.prompt_tokens == 12);
  CHECK(res.completion_tokens == 3);
  REQUIRE(t->calls.size() == 1);
  CHECK(t->calls[0].path == "/chat/completions");
}

TEST_CASE("429 and 5xx are retried with success after two failures") {
  FakeTransport *t = nullptr;
  auto client = client_with(
      fast_endpoint(), t,
      {http_status(429), http_status(503), ok_response("done")});
  ChatResponse res = client->chat(text_request("hi"));
  CHECK(res.text == "done");
  CHECK(res.retries == 2);
  CHECK(t->calls.size() == 3);
}

TEST_CASE("transport failures are retried until the budget runs out") {
  FakeTransport *t = nullptr;
  ModelEndpoint ep = fast_endpoint();
  ep.max_retries = 2;
  auto client = client_with(ep, t, {transport_down()});
  CHECK_THROWS_AS(client->chat(text_request("hi")), Unavailable);
  CHECK(t->calls.size() == 3); // initial try + 2 retries
}

TEST_CASE("auth failures are terminal, no retry") {
  for (int status : {401, 403}) {
    FakeTransport *t = nullptr;
    auto client = client_with(fast_endpoint(), t, {http_status(status)});
    CHECK_THROWS_AS(client->chat(text_request("hi")), AuthError);
    CHECK(t->calls.size() == 1);
  }
}

TEST_CASE("other 4xx are terminal BadRequest") {
  FakeTransport *t = nullptr;
  auto client = client_with(fast_endpoint(), t, {http_status(404)});
  CHECK_THROWS_AS(client->chat(text_request("hi")), BadRequest);
  CHECK(t->calls.size() == 1);
}

TEST_CASE("a malformed 200 body is a BadRequest") {
  TransportResponse bad;
  bad.transport_ok = true;
  bad.status = 200;
  bad.body = "{\"unexpected\":true}";
  FakeTransport *t = nullptr;
  auto client = client_with(fast_endpoint(), t, {bad});
  CHECK_THROWS_AS(client->chat(text_request("hi")), BadRequest);
}

TEST_CASE("the API key travels only in the Authorization header") {
  setenv("CHEMEVAL_TEST_KEY", "sk-super-secret", 1);
  ModelEndpoint ep = fast_endpoint();
  ep.api_key_env = "CHEMEVAL_TEST_KEY";

  const std::string body = OpenAiClient::request_body(ep, text_request("hi"));
  CHECK(body.find("sk-super-secret") == std::string::npos);
  CHECK(body.find("CHEMEVAL_TEST_KEY") == std::string::npos);

  FakeTransport *t = nullptr;
  auto client = client_with(ep, t, {ok_response("ok")});
  client->chat(text_request("hi"));
  REQUIRE(t->calls.size() == 1);
  CHECK(t->calls[0].body.find("sk-super-secret") == std::string::npos);
  bool auth_seen = false;
  for (const auto &[k, v] : t->calls[0].headers) {
    if (k == "Authorization") {
      auth_seen = true;
      CHECK(v == "Bearer sk-super-secret");
    }
  }
  CHECK(auth_seen);
  unsetenv("CHEMEVAL_TEST_KEY");
}

TEST_CASE("wire body follows the chat-completions shape") {
  ModelEndpoint ep = fast_endpoint();
  ChatRequest req;
  req.record_id = "internal-record-7";
  req.messages.push_back(
      Message{"user",
              {MessagePart::make_text("what is this?"),
               MessagePart::make_image("aGk=", "image/png")}});
  const std::string body = OpenAiClient::request_body(ep, req);
  json j = json::parse(body);
  CHECK(j["model"] == "test-model");
  CHECK(j["temperature"] == 0.0);
  REQUIRE(j["messages"].size() == 1);
  const json &content = j["messages"][0]["content"];
  REQUIRE(content.is_array());
  CHECK(content[0]["type"] == "text");
  CHECK(content[1]["type"] == "image_url");
  CHECK(content[1]["image_url"]["url"] == "data:image/png;base64,aGk=");
  // harness metadata never leaves the process
  CHECK(body.find("internal-record-7") == std::string::npos);

  // single text part collapses to a plain string
  json simple = json::parse(OpenAiClient::request_body(ep, text_request("x")));
  CHECK(simple["messages"][0]["content"] == "x");
}

TEST_CASE("stub client caps concurrency and tracks the peak") {
  StubChatClient stub(
      [](const ChatRequest &) {
        std::this_thread::sleep_for(std::chrono::milliseconds(3));
        return std::string("ok");
      },
      4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 32; ++i) {
    threads.emplace_back([&] { stub.chat(text_request("x")); });
  }
  for (std::thread &t : threads) {
    t.join();
  }
  CHECK(stub.call_count() == 32);
  CHECK(stub.peak_concurrency() <= 4);
  CHECK(stub.peak_concurrency() >= 1);
}

TEST_CASE("query_judge maps Unavailable to JudgeUnavailable") {
  StubChatClient down([](const ChatRequest &) -> std::string {
    throw Unavailable("stub is down");
  });
  CHECK_THROWS_AS(query_judge(down, "grade this"), JudgeUnavailable);

  StubChatClient up([](const ChatRequest &) { return std::string("1,0"); });
  CHECK(query_judge(up, "grade this") == "1,0");
}

TEST_CASE("exact_match_judge_reply grades by verbatim containment") {
  const std::string prompt =
      "Grade these.\n"
      "Question:\nQ\n\n"
      "Reference answers (one per blank):\n"
      "1. oxygen\n"
      "2. hydrogen\n"
      "\n"
      "Student answer:\n"
      "the gases are oxygen and helium\n";
  CHECK(exact_match_judge_reply(prompt) == "1,0");
  // not a grading prompt: passed through unchanged
  CHECK(exact_match_judge_reply("hello") == "hello");
}

TEST_CASE("make_client stub modes") {
  ModelEndpoint ep;
  ep.base_url = "stub:echo";
  ep.model_name = "stub";
  auto echo = make_client(ep);
  CHECK(echo->chat(text_request("repeat me")).text == "repeat me");

  ep.base_url = "stub:gold";
  auto gold = make_client(ep, {{"rec-1", "CCO"}});
  CHECK(gold->chat(text_request("?")).text == "The answer is CCO .");

  ep.base_url = "stub:garbage";
  auto garbage = make_client(ep);
  const std::string junk = garbage->chat(text_request("?")).text;
  CHECK(junk.find("xyzzy") != std::string::npos);

  ep.base_url = "stub:judge-exact";
  auto judge = make_client(ep);
  const std::string reply =
      judge
          ->chat(text_request("Reference answers (one per blank):\n1. a\n"
                              "Student answer:\nthe a\n"))
          .text;
  CHECK(reply == "1");

  ep.base_url = "stub:bogus";
  CHECK_THROWS_AS(make_client(ep), ConfigError);
}
