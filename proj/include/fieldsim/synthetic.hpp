#pragma once

#include "fieldsim/gateway.hpp"

namespace fieldsim::synthetic {

/// Deterministic rule-based provider for offline runs and fixture recording.
/// It answers every pipeline prompt by parsing the prompt itself: extraction
/// reads the structured sections of the bundled corpus texts, variant
/// generation rewrites directional verbs, predictions are a seeded hash draw,
/// and annotation labels derive from keyword rules. Conclusions mentioning
/// "bribery" trigger a content-filter refusal in the labeling prompts so the
/// refusal path stays exercised end to end.
class SyntheticProvider : public Provider {
 public:
  explicit SyntheticProvider(std::uint64_t seed) : seed_(seed) {}

  SendResult complete(const ChatSession& session, int attempt_index) override;

 private:
  std::uint64_t seed_;
};

}  // namespace fieldsim::synthetic
