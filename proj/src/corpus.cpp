#include "fieldsim/corpus.hpp"

#include <fstream>
#include <set>

#include "fieldsim/errors.hpp"
#include "fieldsim/prompts.hpp"
#include "fieldsim/textutil.hpp"
#include "json.hpp"

namespace fieldsim::corpus {

using nlohmann::json;

std::string status_name(Status s) {
  switch (s) {
    case Status::Candidate: return "Candidate";
    case Status::KeywordPassed: return "KeywordPassed";
    case Status::Stage1Passed: return "Stage1Passed";
    case Status::Stage2Passed: return "Stage2Passed";
    case Status::ManualAccepted: return "ManualAccepted";
    case Status::Rejected: return "Rejected";
  }
  return "Candidate";
}

Status status_from_name(const std::string& name) {
  for (Status s : {Status::Candidate, Status::KeywordPassed, Status::Stage1Passed,
                   Status::Stage2Passed, Status::ManualAccepted, Status::Rejected}) {
    if (status_name(s) == name) return s;
  }
  throw ParseError("unknown paper status: " + name);
}

std::vector<std::string> default_keywords() {
  return {"field experiment", "randomized controlled trial", "natural field experiment"};
}

std::vector<PaperEntry> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("corpus file not found: " + path.string());
  std::vector<PaperEntry> entries;
  std::set<std::string> ids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("malformed corpus record at line " + std::to_string(lineno));
    PaperEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.title = j.at("title").get<std::string>();
      e.abstract = j.at("abstract").get<std::string>();
      e.full_text = j.at("full_text").get<std::string>();
      e.journal = j.at("journal").get<std::string>();
      e.year = j.at("year").get<int>();
      e.status = status_from_name(j.value("status", "Candidate"));
    } catch (const json::exception& ex) {
      throw ParseError("malformed corpus record at line " + std::to_string(lineno) + ": " +
                       ex.what());
    }
    if (e.year < 1900 || e.year > 2100)
      throw ParseError("year out of range at line " + std::to_string(lineno));
    if (!ids.insert(e.id).second)
      throw ParseError("duplicate paper id \"" + e.id + "\" at line " + std::to_string(lineno));
    entries.push_back(std::move(e));
  }
  return entries;
}

void save_corpus(const std::vector<PaperEntry>& entries, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write corpus file: " + path.string());
  for (const PaperEntry& e : entries) {
    json j;
    j["id"] = e.id;
    j["title"] = e.title;
    j["abstract"] = e.abstract;
    j["full_text"] = e.full_text;
    j["journal"] = e.journal;
    j["year"] = e.year;
    j["status"] = status_name(e.status);
    out << j.dump() << "\n";
  }
}

bool keyword_filter(const PaperEntry& entry, const std::vector<std::string>& keywords) {
  if (keywords.empty()) throw PreconditionError("keyword_filter: keyword list must be non-empty");
  for (const std::string& k : keywords) {
    if (text::contains_ci(entry.title, k) || text::contains_ci(entry.abstract, k)) return true;
  }
  return false;
}

int classify_yes_no(const std::string& response) {
  const std::string norm = text::normalize(response);
  if (norm.rfind("yes", 0) == 0) return 1;
  if (norm.rfind("no", 0) == 0 && norm.rfind("not", 0) != 0) return -1;
  if (norm.find("is not a field experiment") != std::string::npos ||
      norm.find("does not design") != std::string::npos)
    return -1;
  if (norm.find("is a field experiment") != std::string::npos) return 1;
  return 0;
}

std::string truncate_head_tail(const std::string& text, std::size_t budget) {
  if (text.size() <= budget) return text;
  static const std::string kMarker = "\n[... truncated ...]\n";
  const std::size_t keep = budget > kMarker.size() ? budget - kMarker.size() : 0;
  const std::size_t head = keep / 2;
  const std::size_t tail = keep - head;
  return text.substr(0, head) + kMarker + text.substr(text.size() - tail);
}

namespace {

VerifyOutcome run_verification(PaperEntry& entry, Gateway& gateway, const std::string& body,
                               bool full_text_stage, Status pass_status) {
  ChatSession session = gateway.open_session(Role::Preprocessor);
  const SendResult result =
      gateway.send(session, prompts::verification_prompt(body, full_text_stage));
  VerifyOutcome outcome;
  outcome.verdict.raw_response = result.text;
  const int answer = result.refused ? 0 : classify_yes_no(result.text);
  if (answer == 0) {
    outcome.unparseable = true;  // flagged for manual review; status unchanged
    return outcome;
  }
  outcome.verdict.is_field_experiment = answer > 0;
  entry.status = answer > 0 ? pass_status : Status::Rejected;
  return outcome;
}

}  // namespace

VerifyOutcome verify_title_abstract(PaperEntry& entry, Gateway& gateway) {
  if (entry.status != Status::KeywordPassed)
    throw PreconditionError("verify_title_abstract: entry \"" + entry.id +
                            "\" is not at KeywordPassed");
  return run_verification(entry, gateway, entry.title + "\n\n" + entry.abstract,
                          /*full_text_stage=*/false, Status::Stage1Passed);
}

VerifyOutcome verify_full_text(PaperEntry& entry, Gateway& gateway,
                               const VerifierOptions& options) {
  if (entry.status != Status::Stage1Passed)
    throw PreconditionError("verify_full_text: entry \"" + entry.id +
                            "\" is not at Stage1Passed");
  std::string body = entry.full_text;
  const bool truncated = body.size() > options.context_budget;
  if (truncated) body = truncate_head_tail(body, options.context_budget);
  VerifyOutcome outcome = run_verification(entry, gateway, body, /*full_text_stage=*/true,
                                           Status::Stage2Passed);
  outcome.truncated = truncated;
  return outcome;
}

PaperEntry record_manual_check(PaperEntry entry, ManualDecision decision,
                               const std::string& reason) {
  if (entry.status != Status::Stage2Passed)
    throw PreconditionError("record_manual_check: entry \"" + entry.id +
                            "\" is not at Stage2Passed (is " + status_name(entry.status) + ")");
  (void)reason;  // persisted by the caller's status log
  entry.status = decision == ManualDecision::Accept ? Status::ManualAccepted : Status::Rejected;
  return entry;
}

}  // namespace fieldsim::corpus
