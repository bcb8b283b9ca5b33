#pragma once

#include <array>
#include <string>

namespace fieldsim::prompts {

/// Yes/no verification question used in both corpus screening stages.
std::string verification_prompt(const std::string& title_or_text, bool full_text_stage);

/// Extraction prompt: instruction block, the A-G form, and the paper text
/// substituted for the ${Paper} placeholder.
std::string extraction_prompt(const std::string& paper_text);

/// Asks for the conclusions paragraph to be split into numbered standalone
/// conclusions, one directional claim each.
std::string split_conclusions_prompt(const std::string& raw_conclusions);

/// Asks for a directional rephrasing with numeric magnitudes removed.
std::string dequantify_prompt(const std::string& conclusion);

/// Variant generation.
std::string reversed_variant_prompt(const std::string& original);
std::string unrelated_variant_prompt(const std::string& original, const std::string& reversed);

struct SettingsFields {
  std::string goal;
  std::string treatments;
  std::string duration;
  std::string outcomes;
  std::string participants;
  std::string workflow;
};

/// Single-turn prediction prompt: background section (settings), question
/// section with the three shuffled options, and the choose-one instruction.
std::string basic_prediction_prompt(const SettingsFields& settings,
                                    const std::array<std::string, 3>& options);

/// Two-turn chain-of-thought prompts. Turn 1 asks for decisive elements,
/// turn 2 asks for the final single-option selection.
std::string cot_turn1_prompt(const SettingsFields& settings,
                             const std::array<std::string, 3>& options);
std::string cot_turn2_prompt();

/// Annotation prompts.
std::string topic_labeling_prompt(const std::string& conclusion, const SettingsFields& settings);
std::string sentiment_prompt(const std::string& conclusion, const SettingsFields& settings);
std::string gender_favorability_prompt(const std::string& conclusion,
                                       const SettingsFields& settings);

}  // namespace fieldsim::prompts
