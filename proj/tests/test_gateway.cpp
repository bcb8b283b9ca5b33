#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <memory>
#include <set>
#include <vector>

#include "fieldsim/errors.hpp"
#include "fieldsim/gateway.hpp"

using namespace fieldsim;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("fieldsim_gw_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

GatewayConfig basic_config() {
  GatewayConfig c;
  c.preprocessor = ProviderRole{Role::Preprocessor, "model-a"};
  c.predictor = ProviderRole{Role::Predictor, "model-b"};
  return c;
}

std::shared_ptr<ScriptedProvider> echo_provider(const std::string& prefix) {
  return std::make_shared<ScriptedProvider>(
      [prefix](const ChatSession& s, int attempt) {
        return SendResult{prefix + ":" + s.transcript.back().text + ":" +
                              std::to_string(attempt),
                          false, ""};
      });
}

}  // namespace

TEST_CASE("cache keys separate roles, models, transcripts, and attempts") {
  const std::vector<Turn> t1{{Speaker::User, "hello"}};
  const std::vector<Turn> t2{{Speaker::User, "hello!"}};
  const ProviderRole pre{Role::Preprocessor, "m1"};
  const ProviderRole pred{Role::Predictor, "m1"};
  const ProviderRole pre2{Role::Preprocessor, "m2"};
  std::set<std::string> keys{
      cache_key(pre, t1, 0),  cache_key(pred, t1, 0), cache_key(pre2, t1, 0),
      cache_key(pre, t2, 0),  cache_key(pre, t1, 1),
  };
  CHECK(keys.size() == 5);
  // Deterministic across calls.
  CHECK(cache_key(pre, t1, 0) == cache_key(pre, t1, 0));
}

TEST_CASE("gateway refuses identical models on both roles") {
  GatewayConfig c = basic_config();
  c.predictor->model_id = "model-a";
  CHECK_THROWS_AS(Gateway(c, echo_provider("p"), echo_provider("q")), ConfigError);
}

TEST_CASE("send maintains the transcript and routes by role") {
  Gateway gw(basic_config(), echo_provider("pre"), echo_provider("pred"));
  ChatSession s = gw.open_session(Role::Predictor);
  const SendResult r1 = gw.send(s, "first");
  CHECK(r1.text == "pred:first:0");
  REQUIRE(s.transcript.size() == 2);
  CHECK(s.transcript[0].speaker == Speaker::User);
  CHECK(s.transcript[1].speaker == Speaker::Model);
  const SendResult r2 = gw.send(s, "second");
  CHECK(r2.text == "pred:second:0");
  CHECK(s.transcript.size() == 4);

  ChatSession sp = gw.open_session(Role::Preprocessor);
  CHECK(gw.send(sp, "first").text == "pre:first:0");
}

TEST_CASE("send validates its inputs") {
  Gateway gw(basic_config(), echo_provider("pre"), echo_provider("pred"));
  ChatSession s = gw.open_session(Role::Predictor);
  CHECK_THROWS_AS((void)gw.send(s, ""), PreconditionError);
  CHECK_THROWS_AS((void)gw.send(s, "x", -1), PreconditionError);
  s.transcript.push_back({Speaker::User, "dangling"});
  CHECK_THROWS_AS((void)gw.send(s, "x"), PreconditionError);
}

TEST_CASE("repeat sampling with distinct attempt indices is not collapsed by the cache") {
  GatewayConfig c = basic_config();
  c.cache_dir = temp_dir("attempts");
  auto provider = echo_provider("pred");
  Gateway gw(c, echo_provider("pre"), provider);
  for (int attempt = 0; attempt < 3; ++attempt) {
    ChatSession s = gw.open_session(Role::Predictor);
    CHECK(gw.send(s, "same prompt", attempt).text ==
          "pred:same prompt:" + std::to_string(attempt));
  }
  CHECK(provider->call_count() == 3);
  // Replaying the same attempts is served from cache: no new provider calls.
  for (int attempt = 0; attempt < 3; ++attempt) {
    ChatSession s = gw.open_session(Role::Predictor);
    CHECK(gw.send(s, "same prompt", attempt).text ==
          "pred:same prompt:" + std::to_string(attempt));
  }
  CHECK(provider->call_count() == 3);
}

TEST_CASE("cache round-trips refusals") {
  GatewayConfig c = basic_config();
  c.cache_dir = temp_dir("refusal");
  int calls = 0;
  auto provider = std::make_shared<ScriptedProvider>([&](const ChatSession&, int) {
    ++calls;
    return SendResult{"", true, "content filter"};
  });
  Gateway gw(c, echo_provider("pre"), provider);
  ChatSession s1 = gw.open_session(Role::Predictor);
  const SendResult r1 = gw.send(s1, "risky");
  CHECK(r1.refused);
  CHECK(r1.refusal_reason == "content filter");
  ChatSession s2 = gw.open_session(Role::Predictor);
  const SendResult r2 = gw.send(s2, "risky");
  CHECK(r2.refused);
  CHECK(calls == 1);
}

TEST_CASE("transient failures retry with capped exponential backoff and full jitter") {
  GatewayConfig c = basic_config();
  std::vector<double> sleeps;
  c.sleeper = [&](double s) { sleeps.push_back(s); };
  c.retry.jitter_seed = 42;
  int calls = 0;
  auto flaky = std::make_shared<ScriptedProvider>([&](const ChatSession& s, int) {
    if (++calls < 4) throw TransientFailure{"connection reset"};
    return SendResult{"ok:" + s.transcript.back().text, false, ""};
  });
  Gateway gw(c, echo_provider("pre"), flaky);
  ChatSession s = gw.open_session(Role::Predictor);
  CHECK(gw.send(s, "msg").text == "ok:msg");
  CHECK(calls == 4);
  REQUIRE(sleeps.size() == 3);
  // Full jitter: delay k is uniform in [0, base * 2^k].
  CHECK(sleeps[0] >= 0.0);
  CHECK(sleeps[0] <= 1.0);
  CHECK(sleeps[1] <= 2.0);
  CHECK(sleeps[2] <= 4.0);
}

TEST_CASE("retry exhaustion raises ProviderError and leaves the session clean") {
  GatewayConfig c = basic_config();
  c.sleeper = [](double) {};
  c.retry.max_retries = 2;
  auto dead = std::make_shared<ScriptedProvider>(
      [](const ChatSession&, int) -> SendResult { throw TransientFailure{"down"}; });
  Gateway gw(c, echo_provider("pre"), dead);
  ChatSession s = gw.open_session(Role::Predictor);
  CHECK_THROWS_AS((void)gw.send(s, "msg"), ProviderError);
  CHECK(dead->call_count() == 3);  // first try + 2 retries
  CHECK(s.transcript.empty());    // pending user turn rolled back
}

TEST_CASE("recording then replaying reproduces responses exactly") {
  const fs::path dir = temp_dir("record");
  const fs::path fixture = dir / "fixture.jsonl";
  {
    auto recorder = std::make_shared<RecordingProvider>(echo_provider("pred"), fixture);
    Gateway gw(basic_config(), echo_provider("pre"), recorder);
    ChatSession s = gw.open_session(Role::Predictor);
    CHECK(gw.send(s, "alpha").text == "pred:alpha:0");
    CHECK(gw.send(s, "beta", 1).text == "pred:beta:1");
  }
  auto replay = std::make_shared<ReplayProvider>(ReplayProvider::from_jsonl(fixture));
  Gateway gw(basic_config(), echo_provider("pre"), replay);
  ChatSession s = gw.open_session(Role::Predictor);
  CHECK(gw.send(s, "alpha").text == "pred:alpha:0");
  CHECK(gw.send(s, "beta", 1).text == "pred:beta:1");
  // A prompt never recorded is a hard miss naming the key.
  ChatSession s2 = gw.open_session(Role::Predictor);
  try {
    (void)gw.send(s2, "gamma");
    FAIL("expected FixtureMissError");
  } catch (const FixtureMissError& e) {
    CHECK_FALSE(e.missing_key.empty());
  }
}
