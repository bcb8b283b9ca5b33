#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>

#include "fieldsim/corpus.hpp"
#include "fieldsim/errors.hpp"
#include "fieldsim/gateway.hpp"

using namespace fieldsim;
using namespace fieldsim::corpus;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fieldsim_corpus_" + name);
  fs::remove_all(p);
  return p;
}

PaperEntry entry(const std::string& id, const std::string& title,
                 const std::string& abstract, Status status = Status::Candidate) {
  PaperEntry e;
  e.id = id;
  e.title = title;
  e.abstract = abstract;
  e.full_text = "full text of " + id;
  e.journal = "J";
  e.year = 2020;
  e.status = status;
  return e;
}

Gateway scripted_gateway(ScriptedProvider::Script preprocessor_script) {
  GatewayConfig c;
  c.preprocessor = ProviderRole{Role::Preprocessor, "model-a"};
  c.predictor = ProviderRole{Role::Predictor, "model-b"};
  return Gateway(c, std::make_shared<ScriptedProvider>(std::move(preprocessor_script)),
                 std::make_shared<ScriptedProvider>([](const ChatSession&, int) {
                   return SendResult{"unused", false, ""};
                 }));
}

}  // namespace

TEST_CASE("corpus JSONL round-trips and validates") {
  const fs::path p = temp_path("roundtrip.jsonl");
  std::vector<PaperEntry> in{entry("a", "T1", "A1"),
                             entry("b", "T2", "A2", Status::Stage2Passed)};
  save_corpus(in, p);
  const auto out = load_corpus(p);
  REQUIRE(out.size() == 2);
  CHECK(out[0].id == "a");
  CHECK(out[1].status == Status::Stage2Passed);
  CHECK(out[1].full_text == "full text of b");
}

TEST_CASE("loader rejects malformed lines, duplicate ids, and bad years") {
  const fs::path p = temp_path("bad.jsonl");
  {
    std::ofstream f(p);
    f << R"({"id":"a","title":"t","abstract":"x","full_text":"f","journal":"j","year":2020})" << "\n";
    f << "this is not json\n";
  }
  CHECK_THROWS_AS((void)load_corpus(p), ParseError);
  try {
    (void)load_corpus(p);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);  // line number
  }
  {
    std::ofstream f(p);
    f << R"({"id":"a","title":"t","abstract":"x","full_text":"f","journal":"j","year":2020})" << "\n";
    f << R"({"id":"a","title":"t","abstract":"x","full_text":"f","journal":"j","year":2021})" << "\n";
  }
  CHECK_THROWS_AS((void)load_corpus(p), ParseError);
  {
    std::ofstream f(p);
    f << R"({"id":"a","title":"t","abstract":"x","full_text":"f","journal":"j","year":1776})" << "\n";
  }
  CHECK_THROWS_AS((void)load_corpus(p), ParseError);
}

TEST_CASE("keyword filter is case-insensitive over title and abstract") {
  const auto kw = default_keywords();
  CHECK(keyword_filter(entry("a", "A Field Experiment on giving", ""), kw));
  CHECK(keyword_filter(entry("b", "", "we ran a RANDOMIZED controlled TRIAL"), kw));
  CHECK(keyword_filter(entry("c", "", "a natural field experiment in schools"), kw));
  CHECK_FALSE(keyword_filter(entry("d", "Theory of games", "equilibrium notions"), kw));
  // Custom keyword lists override the default.
  CHECK(keyword_filter(entry("e", "lab experiment", ""), {"lab experiment"}));
}

TEST_CASE("yes/no classification") {
  CHECK(classify_yes_no("Yes.") == 1);
  CHECK(classify_yes_no("yes, the paper designs and implements one") == 1);
  CHECK(classify_yes_no("No") == -1);
  CHECK(classify_yes_no("NO - it is a survey") == -1);
  CHECK(classify_yes_no("The paper is a field experiment.") == 1);
  CHECK(classify_yes_no("This is not a field experiment.") == -1);
  CHECK(classify_yes_no("It depends on definitions.") == 0);
  CHECK(classify_yes_no("") == 0);
}

TEST_CASE("head+tail truncation keeps both ends") {
  const std::string text(1000, 'x');
  const std::string t = truncate_head_tail("HEAD" + text + "TAIL", 100);
  CHECK(t.size() <= 100 + 30);  // marker allowance
  CHECK(t.substr(0, 4) == "HEAD");
  CHECK(t.substr(t.size() - 4) == "TAIL");
  CHECK(t.find("truncated") != std::string::npos);
  // Short texts pass through verbatim.
  CHECK(truncate_head_tail("short", 100) == "short");
}

TEST_CASE("two-layer verification advances and rejects") {
  Gateway gw = scripted_gateway([](const ChatSession& s, int) {
    const std::string& prompt = s.transcript.back().text;
    const bool positive = prompt.find("giving") != std::string::npos;
    return SendResult{positive ? "Yes" : "No", false, ""};
  });

  PaperEntry good = entry("g", "A field experiment on giving", "giving", Status::KeywordPassed);
  const auto s1 = verify_title_abstract(good, gw);
  CHECK(s1.verdict.is_field_experiment);
  CHECK(good.status == Status::Stage1Passed);
  good.full_text = "long text about giving";
  const auto s2 = verify_full_text(good, gw);
  CHECK(s2.verdict.is_field_experiment);
  CHECK(good.status == Status::Stage2Passed);

  PaperEntry bad = entry("b", "A survey", "theory", Status::KeywordPassed);
  (void)verify_title_abstract(bad, gw);
  CHECK(bad.status == Status::Rejected);
}

TEST_CASE("verification enforces stage order") {
  Gateway gw = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"Yes", false, ""}; });
  PaperEntry e = entry("x", "t", "a", Status::Candidate);
  CHECK_THROWS_AS((void)verify_title_abstract(e, gw), PreconditionError);
  e.status = Status::KeywordPassed;
  CHECK_THROWS_AS((void)verify_full_text(e, gw), PreconditionError);
}

TEST_CASE("unparseable verifier answers leave status unchanged") {
  Gateway gw = scripted_gateway(
      [](const ChatSession&, int) { return SendResult{"maybe, hard to say", false, ""}; });
  PaperEntry e = entry("x", "t", "a", Status::KeywordPassed);
  const auto outcome = verify_title_abstract(e, gw);
  CHECK(outcome.unparseable);
  CHECK(e.status == Status::KeywordPassed);
}

TEST_CASE("full-text verification truncates oversized papers head and tail") {
  std::string seen_prompt;
  Gateway gw = scripted_gateway([&](const ChatSession& s, int) {
    seen_prompt = s.transcript.back().text;
    return SendResult{"Yes", false, ""};
  });
  PaperEntry e = entry("x", "t", "a", Status::Stage1Passed);
  e.full_text = "BEGIN" + std::string(5000, 'z') + "END";
  VerifierOptions opt;
  opt.context_budget = 200;
  const auto outcome = verify_full_text(e, gw, opt);
  CHECK(outcome.truncated);
  CHECK(seen_prompt.find("BEGIN") != std::string::npos);
  CHECK(seen_prompt.find("END") != std::string::npos);
  CHECK(seen_prompt.find(std::string(5000, 'z')) == std::string::npos);
}

TEST_CASE("manual check records accept and reject") {
  PaperEntry e = entry("x", "t", "a", Status::Stage2Passed);
  const PaperEntry accepted = record_manual_check(e, ManualDecision::Accept, "ok");
  CHECK(accepted.status == Status::ManualAccepted);
  const PaperEntry rejected = record_manual_check(e, ManualDecision::Reject, "conclusions leak");
  CHECK(rejected.status == Status::Rejected);
  PaperEntry wrong = entry("y", "t", "a", Status::KeywordPassed);
  CHECK_THROWS_AS((void)record_manual_check(wrong, ManualDecision::Accept, ""), PreconditionError);
}
