#include "fieldsim/prompts.hpp"

#include "fieldsim/textutil.hpp"

namespace fieldsim::prompts {

namespace {

std::string settings_block(const SettingsFields& s) {
  return "Experiment goal: " + s.goal +
         "\nTreatments: " + s.treatments +
         "\nExperiment duration: " + s.duration +
         "\nOutcomes: " + s.outcomes +
         "\nParticipant information: " + s.participants +
         "\nExperiment workflow: " + s.workflow + "\n";
}

std::string options_block(const std::array<std::string, 3>& options) {
  return "Option 1: " + options[0] + "\nOption 2: " + options[1] +
         "\nOption 3: " + options[2] + "\n";
}

}  // namespace

std::string verification_prompt(const std::string& title_or_text, bool full_text_stage) {
  std::string prompt =
      "You will be given " +
      std::string(full_text_stage ? "the full text of a research paper."
                                  : "the title and abstract of a research paper.") +
      "\nDoes the paper design and implement a field experiment, i.e. a randomized "
      "intervention conducted in a real-world setting? Answer with a single word, "
      "Yes or No.\n\n" +
      title_or_text + "\n";
  return prompt;
}

std::string extraction_prompt(const std::string& paper_text) {
  // Authored template; the published figure with the original wording is an
  // image, so this follows its described structure rather than quoting it.
  static const std::string kTemplate =
      "You are given the text of a research paper describing a field experiment.\n"
      "Read the paper and fill out the form below. Bullet points A to F are the key\n"
      "experimental settings that shape the experiment context. Bullet point G is the\n"
      "conclusions of the experiment. Report each point faithfully from the paper and\n"
      "do not include any conclusion inside points A to F.\n"
      "\n"
      "A. The general goal of the experiment\n"
      "B. The treatments\n"
      "C. The experiment duration\n"
      "D. The outcomes measured\n"
      "E. Participant information\n"
      "F. The experiment workflow\n"
      "G. The conclusions of the experiment, as one paragraph\n"
      "\n"
      "Paper:\n"
      "${Paper}\n";
  return fieldsim::text::substitute(kTemplate, "${Paper}", paper_text);
}

std::string split_conclusions_prompt(const std::string& raw_conclusions) {
  return "The paragraph below contains one or more conclusions of a field experiment.\n"
         "Separate it into standalone conclusions. Each conclusion must be a single\n"
         "declarative sentence stating exactly one directional claim. Reply with a\n"
         "numbered list, one conclusion per line, and nothing else.\n\n" +
         raw_conclusions + "\n";
}

std::string dequantify_prompt(const std::string& conclusion) {
  return "The conclusion below states a precise numerical treatment effect. Restate it\n"
         "so that it only expresses the direction of the effect, with no numbers,\n"
         "percentages, or quantities. Reply with the restated conclusion only.\n\n" +
         conclusion + "\n";
}

std::string reversed_variant_prompt(const std::string& original) {
  return "Invert the direction of the effect stated in the conclusion below, keeping\n"
         "the same treatment and the same outcome. Reply with the inverted conclusion\n"
         "only.\n\n" +
         original + "\n";
}

std::string unrelated_variant_prompt(const std::string& original, const std::string& reversed) {
  return "Below are a conclusion of a field experiment and its reversed variant. Write\n"
         "an unrelated variant: a statement that there is no relationship between the\n"
         "same treatment and the same outcome. Reply with the unrelated variant only.\n\n"
         "Conclusion: " +
         original + "\nReversed variant: " + reversed + "\n";
}

std::string basic_prediction_prompt(const SettingsFields& settings,
                                    const std::array<std::string, 3>& options) {
  return "Below is the background information of a field experiment.\n\n" +
         settings_block(settings) +
         "\nExactly one of the following three statements is a true conclusion of this\n"
         "experiment.\n\n" +
         options_block(options) +
         "\nUnder the context of the experimental settings above, choose the one option\n"
         "you deem correct. Answer with \"Option 1\", \"Option 2\", or \"Option 3\".\n";
}

std::string cot_turn1_prompt(const SettingsFields& settings,
                             const std::array<std::string, 3>& options) {
  return "Below is the background information of a field experiment.\n\n" +
         settings_block(settings) +
         "\nExactly one of the following three statements is a true conclusion of this\n"
         "experiment.\n\n" +
         options_block(options) +
         "\nThink about the decisive elements of the experimental settings that would\n"
         "help identify the correct option. List those decisive elements and how they\n"
         "bear on each option. Do not select an option yet.\n";
}

std::string cot_turn2_prompt() {
  return "Based on the decisive elements you identified, now choose the one option you\n"
         "deem correct. Answer with \"Option 1\", \"Option 2\", or \"Option 3\".\n";
}

std::string topic_labeling_prompt(const std::string& conclusion,
                                  const SettingsFields& settings) {
  return "Label the topic components of the conclusion below under the context of the\n"
         "experiment. Assign a percentage to each of the seven topics indicating how\n"
         "strongly the context is associated with it. The percentages must sum to 100.\n"
         "Reply with seven lines of the form \"<topic>: <percentage>\" using exactly\n"
         "these topic names: gender, ethnicity, social norms, ethical dilemmas, age,\n"
         "socioeconomic status, other topics.\n\n" +
         settings_block(settings) + "\nConclusion: " + conclusion + "\n";
}

std::string sentiment_prompt(const std::string& conclusion, const SettingsFields& settings) {
  return "Decide the sentiment of the conclusion below under the context of the\n"
         "experiment. Answer with a single word: positive, negative, or neutral.\n\n" +
         settings_block(settings) + "\nConclusion: " + conclusion + "\n";
}

std::string gender_favorability_prompt(const std::string& conclusion,
                                       const SettingsFields& settings) {
  return "The conclusion below relates to gender. Judge whether its context is\n"
         "favorable to females or detrimental to males, the opposite, or neutral.\n"
         "Answer with exactly one of: pro-female, pro-male, neutral.\n\n" +
         settings_block(settings) + "\nConclusion: " + conclusion + "\n";
}

}  // namespace fieldsim::prompts
