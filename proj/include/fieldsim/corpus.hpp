#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fieldsim/gateway.hpp"

namespace fieldsim::corpus {

enum class Status { Candidate, KeywordPassed, Stage1Passed, Stage2Passed, ManualAccepted, Rejected };

std::string status_name(Status s);
Status status_from_name(const std::string& name);

struct PaperEntry {
  std::string id;
  std::string title;
  std::string abstract;
  std::string full_text;
  std::string journal;
  int year = 0;
  Status status = Status::Candidate;
};

struct Verdict {
  bool is_field_experiment = false;
  std::string raw_response;
};

/// Raised when a verifier answer is neither affirmative nor negative;
/// the entry keeps its status and goes to manual review.
struct UnparseableAnswer {
  std::string raw_response;
};

struct StatusEvent {
  std::string paper_id;
  Status from;
  Status to;
  std::string note;
};

/// Default keyword list; overridable through configuration.
std::vector<std::string> default_keywords();

/// Loads a Corpus JSONL file. Malformed records and duplicate ids are errors
/// naming the offending line / id.
std::vector<PaperEntry> load_corpus(const std::filesystem::path& path);

void save_corpus(const std::vector<PaperEntry>& entries, const std::filesystem::path& path);

/// True iff any keyword occurs case-insensitively in title or abstract.
bool keyword_filter(const PaperEntry& entry, const std::vector<std::string>& keywords);

struct VerifierOptions {
  // Upper bound on characters of full text sent in one verification prompt.
  std::size_t context_budget = 200000;
};

struct VerifyOutcome {
  Verdict verdict;
  bool truncated = false;   // full text exceeded the context budget
  bool unparseable = false; // answer was neither yes nor no; status unchanged
};

/// Stage-1 verification on title + abstract. Advances the entry to
/// Stage1Passed or Rejected.
VerifyOutcome verify_title_abstract(PaperEntry& entry, Gateway& gateway);

/// Stage-2 verification on the full text, truncated head+tail when it
/// exceeds the context budget. Advances to Stage2Passed or Rejected.
VerifyOutcome verify_full_text(PaperEntry& entry, Gateway& gateway,
                               const VerifierOptions& options = {});

enum class ManualDecision { Accept, Reject };

/// Records the manual screening decision for a Stage2Passed entry.
PaperEntry record_manual_check(PaperEntry entry, ManualDecision decision,
                               const std::string& reason);

/// Exposed for testing: yes/no normalization used by both verification stages.
/// Returns +1 affirmative, -1 negative, 0 unparseable.
int classify_yes_no(const std::string& response);

/// Head+tail truncation keeping both ends of the text within the budget.
std::string truncate_head_tail(const std::string& text, std::size_t budget);

}  // namespace fieldsim::corpus
