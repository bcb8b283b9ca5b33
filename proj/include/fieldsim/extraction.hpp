#pragma once

#include <string>
#include <vector>

#include "fieldsim/gateway.hpp"
#include "fieldsim/prompts.hpp"

namespace fieldsim::extraction {

using ExperimentSettings = prompts::SettingsFields;

struct Conclusion {
  std::string id;
  std::string text;
  std::string paper_id;
  bool dequantified = false;
};

/// Fig-4-shaped extraction prompt with the paper text substituted in.
std::string build_extraction_prompt(const std::string& paper_text);

struct ExtractionResponse {
  ExperimentSettings settings;
  std::string raw_conclusions;  // the G paragraph, split later in a fresh session
};

/// Maps labeled sections A-F to the six settings fields and G to the raw
/// conclusions paragraph. Tolerates "A.", "A)", "A:" label variants.
/// Missing labels raise ParseError listing them.
ExtractionResponse parse_extraction_response(const std::string& response);

/// Splits the conclusions paragraph into standalone conclusions in a fresh
/// Preprocessor session, assigning ids paper_id + ordinal.
std::vector<Conclusion> split_conclusions(const std::string& raw_conclusions,
                                          const std::string& paper_id, Gateway& gateway);

/// Rewrites a conclusion with a precise numerical treatment effect into its
/// directional form. Conclusions without a quantity pass through untouched
/// and never cost a provider call.
Conclusion dequantify(Conclusion conclusion, Gateway& gateway);

/// The first manual screening, automated: no conclusion sentence may appear
/// verbatim (after normalization) inside any settings field. Returns the ids
/// of offending conclusions.
std::vector<std::string> settings_conclusion_overlap(const ExperimentSettings& settings,
                                                     const std::vector<Conclusion>& conclusions);

}  // namespace fieldsim::extraction
