#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>

#include "fieldsim/annotator.hpp"
#include "fieldsim/gateway.hpp"

using namespace fieldsim;
using namespace fieldsim::annotator;

namespace {

Gateway scripted_gateway(ScriptedProvider::Script preprocessor_script) {
  GatewayConfig c;
  c.preprocessor = ProviderRole{Role::Preprocessor, "model-a"};
  c.predictor = ProviderRole{Role::Predictor, "model-b"};
  return Gateway(c, std::make_shared<ScriptedProvider>(std::move(preprocessor_script)),
                 std::make_shared<ScriptedProvider>([](const ChatSession&, int) {
                   return SendResult{"unused", false, ""};
                 }));
}

extraction::Conclusion conclusion(const std::string& text) {
  return {"c1", text, "p1", false};
}

extraction::ExperimentSettings settings() {
  extraction::ExperimentSettings s;
  s.goal = "Study hiring";
  s.treatments = "Anonymized applications";
  s.duration = "Nine months";
  s.outcomes = "Callbacks";
  s.participants = "Job seekers";
  s.workflow = "Randomized submissions";
  return s;
}

const std::string kCleanTopics =
    "gender: 60\nethnicity: 0\nsocial norms: 10\nethical dilemmas: 0\n"
    "age: 0\nsocioeconomic status: 0\nother topics: 30\n";

}  // namespace

TEST_CASE("parse_topic_response accepts exact sums") {
  const auto v = parse_topic_response(kCleanTopics);
  REQUIRE(v);
  CHECK(v->components[0] == doctest::Approx(60.0));
  CHECK(v->components[2] == doctest::Approx(10.0));
  CHECK(v->components[6] == doctest::Approx(30.0));
  CHECK(v->sum() == doctest::Approx(100.0));
}

TEST_CASE("parse_topic_response renormalizes sums inside [95,105]") {
  const auto v = parse_topic_response(
      "gender: 49\nethnicity: 0\nsocial norms: 0\nethical dilemmas: 0\n"
      "age: 0\nsocioeconomic status: 0\nother topics: 49\n");
  REQUIRE(v);
  CHECK(v->sum() == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(v->components[0] == doctest::Approx(50.0));
}

TEST_CASE("parse_topic_response rejects bad shapes") {
  CHECK_FALSE(parse_topic_response(""));
  // Out-of-window sum.
  CHECK_FALSE(parse_topic_response(
      "gender: 40\nethnicity: 0\nsocial norms: 0\nethical dilemmas: 0\n"
      "age: 0\nsocioeconomic status: 0\nother topics: 40\n"));
  // Missing a topic line.
  CHECK_FALSE(parse_topic_response(
      "gender: 60\nethnicity: 40\n"));
  // Negative component.
  CHECK_FALSE(parse_topic_response(
      "gender: 110\nethnicity: -10\nsocial norms: 0\nethical dilemmas: 0\n"
      "age: 0\nsocioeconomic status: 0\nother topics: 0\n"));
  // Non-numeric value.
  CHECK_FALSE(parse_topic_response(
      "gender: lots\nethnicity: 0\nsocial norms: 0\nethical dilemmas: 0\n"
      "age: 0\nsocioeconomic status: 0\nother topics: 100\n"));
}

TEST_CASE("label_topics re-asks once on an unparseable answer") {
  int calls = 0;
  Gateway gw = scripted_gateway([&](const ChatSession&, int attempt) {
    ++calls;
    if (attempt == 0) return SendResult{"nonsense", false, ""};
    return SendResult{kCleanTopics, false, ""};
  });
  const auto v = label_topics(conclusion("x"), settings(), gw);
  REQUIRE(v);
  CHECK(calls == 2);

  Gateway hopeless = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"nonsense", false, ""}; });
  CHECK_FALSE(label_topics(conclusion("x"), settings(), hopeless));
}

TEST_CASE("sentiment and favorability mapping") {
  Gateway pos = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"Positive.", false, ""}; });
  CHECK(label_sentiment(conclusion("x"), settings(), pos) == 1);
  Gateway neg = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"negative — the outcome worsens", false, ""}; });
  CHECK(label_sentiment(conclusion("x"), settings(), neg) == -1);
  Gateway neu = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"Neutral", false, ""}; });
  CHECK(label_sentiment(conclusion("x"), settings(), neu) == 0);

  Gateway fav = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"favorable to females", false, ""}; });
  CHECK(label_gender_favorability(conclusion("x"), settings(), fav) == 1);
  Gateway anti = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"anti-female", false, ""}; });
  CHECK(label_gender_favorability(conclusion("x"), settings(), anti) == -1);
  Gateway neutral = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"neutral to both genders", false, ""}; });
  CHECK(label_gender_favorability(conclusion("x"), settings(), neutral) == 0);
}

TEST_CASE("annotate produces a full record, asking favorability only when gender > 0") {
  int favorability_calls = 0;
  Gateway gw = scripted_gateway([&](const ChatSession& s, int) {
    const std::string& prompt = s.transcript.back().text;
    if (prompt.find("topic components") != std::string::npos)
      return SendResult{kCleanTopics, false, ""};
    if (prompt.find("sentiment") != std::string::npos)
      return SendResult{"positive", false, ""};
    ++favorability_calls;
    return SendResult{"favorable to females", false, ""};
  });
  const AnnotationRecord r = annotate(conclusion("Anonymization helps women."), settings(), gw);
  CHECK(r.status == AnnotationStatus::Labeled);
  CHECK(r.topics.gender() == doctest::Approx(60.0));
  CHECK(r.sentiment == 1);
  CHECK(r.gender_favorability == 1);
  CHECK(favorability_calls == 1);

  // Zero gender share: favorability stays neutral with no extra call.
  favorability_calls = 0;
  Gateway gw2 = scripted_gateway([&](const ChatSession& s, int) {
    const std::string& prompt = s.transcript.back().text;
    if (prompt.find("topic components") != std::string::npos)
      return SendResult{
          "gender: 0\nethnicity: 0\nsocial norms: 50\nethical dilemmas: 0\n"
          "age: 0\nsocioeconomic status: 0\nother topics: 50\n",
          false, ""};
    if (prompt.find("sentiment") != std::string::npos)
      return SendResult{"neutral", false, ""};
    ++favorability_calls;
    return SendResult{"favorable to females", false, ""};
  });
  const AnnotationRecord r2 = annotate(conclusion("Norm messages change giving."), settings(), gw2);
  CHECK(r2.status == AnnotationStatus::Labeled);
  CHECK(r2.gender_favorability == 0);
  CHECK(favorability_calls == 0);
}

TEST_CASE("any refusal yields a Refused record with a reason") {
  Gateway gw = scripted_gateway([](const ChatSession& s, int) {
    const std::string& prompt = s.transcript.back().text;
    if (prompt.find("topic components") != std::string::npos)
      return SendResult{kCleanTopics, false, ""};
    return SendResult{"", true, "content filter"};
  });
  const AnnotationRecord r = annotate(conclusion("x"), settings(), gw);
  CHECK(r.status == AnnotationStatus::Refused);
  CHECK(r.refusal_reason.find("sentiment") != std::string::npos);
}
