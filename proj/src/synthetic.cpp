#include "fieldsim/synthetic.hpp"

#include <array>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "fieldsim/annotator.hpp"
#include "fieldsim/digest.hpp"
#include "fieldsim/errors.hpp"
#include "fieldsim/textutil.hpp"

namespace fieldsim::synthetic {

namespace {

const std::array<std::pair<const char*, const char*>, 8> kVerbInversions = {{
    {"increases", "decreases"},
    {"decreases", "increases"},
    {"reduces", "increases"},
    {"improves", "worsens"},
    {"worsens", "improves"},
    {"raises", "lowers"},
    {"lowers", "raises"},
    {"boosts", "dampens"},
}};

std::string section_of(const std::string& prompt, const std::string& tag) {
  const std::string marker = tag + ":";
  const std::size_t start = prompt.find(marker);
  if (start == std::string::npos) return {};
  const std::size_t begin = start + marker.size();
  const std::size_t end = prompt.find('\n', begin);
  return text::trim(prompt.substr(begin, end == std::string::npos ? std::string::npos
                                                                  : end - begin));
}

std::optional<std::size_t> find_verb(const std::string& sentence, std::string* verb_out) {
  for (const auto& [verb, inverse] : kVerbInversions) {
    (void)inverse;
    const std::string padded = std::string(" ") + verb + " ";
    const std::size_t pos = sentence.find(padded);
    if (pos != std::string::npos) {
      if (verb_out) *verb_out = verb;
      return pos;
    }
  }
  return std::nullopt;
}

std::string last_user_message(const ChatSession& session) {
  for (auto it = session.transcript.rbegin(); it != session.transcript.rend(); ++it)
    if (it->speaker == Speaker::User) return it->text;
  return {};
}

std::uint64_t hash_of(std::initializer_list<std::string_view> parts) {
  Fnv1a64 h;
  for (std::string_view p : parts) h.update_framed(p);
  return h.value();
}

std::string answer_extraction(const std::string& prompt) {
  // The bundled corpus texts carry structured section markers; read them back.
  std::ostringstream out;
  out << "A. " << section_of(prompt, "GOAL") << "\n"
      << "B. " << section_of(prompt, "TREATMENTS") << "\n"
      << "C. " << section_of(prompt, "DURATION") << "\n"
      << "D. " << section_of(prompt, "OUTCOMES") << "\n"
      << "E. " << section_of(prompt, "PARTICIPANTS") << "\n"
      << "F. " << section_of(prompt, "WORKFLOW") << "\n"
      << "G. " << section_of(prompt, "FINDINGS") << "\n";
  return out.str();
}

std::string answer_split(const std::string& prompt) {
  // The paragraph is the text after the instruction block's blank line.
  const std::size_t blank = prompt.find("\n\n");
  const std::string paragraph =
      blank == std::string::npos ? prompt : text::trim(prompt.substr(blank + 2));
  std::ostringstream out;
  int n = 0;
  std::size_t start = 0;
  while (start < paragraph.size()) {
    std::size_t end = paragraph.find(". ", start);
    std::string sentence;
    if (end == std::string::npos) {
      sentence = text::trim(paragraph.substr(start));
      start = paragraph.size();
    } else {
      sentence = text::trim(paragraph.substr(start, end - start + 1));
      start = end + 2;
    }
    if (sentence.empty()) continue;
    out << ++n << ". " << sentence << "\n";
  }
  return out.str();
}

std::string answer_dequantify(const std::string& prompt) {
  const std::size_t blank = prompt.find("\n\n");
  std::string sentence =
      blank == std::string::npos ? prompt : text::trim(prompt.substr(blank + 2));
  const bool had_period = !sentence.empty() && sentence.back() == '.';
  for (const std::string cut : {" by ", " from "}) {
    const std::size_t pos = sentence.find(cut);
    if (pos != std::string::npos) sentence = sentence.substr(0, pos);
  }
  sentence = text::trim(sentence);
  if (had_period && !sentence.empty() && sentence.back() != '.') sentence += ".";
  return sentence;
}

std::string answer_reversed(const std::string& prompt) {
  const std::size_t blank = prompt.find("\n\n");
  std::string sentence =
      blank == std::string::npos ? prompt : text::trim(prompt.substr(blank + 2));
  for (const auto& [verb, inverse] : kVerbInversions) {
    const std::string padded = std::string(" ") + verb + " ";
    const std::size_t pos = sentence.find(padded);
    if (pos != std::string::npos) {
      return sentence.substr(0, pos + 1) + inverse + sentence.substr(pos + padded.size() - 1);
    }
  }
  return "It is not the case that " + sentence;
}

std::string answer_unrelated(const std::string& prompt) {
  const std::string original = section_of(prompt, "Conclusion");
  std::string verb;
  const auto pos = find_verb(original, &verb);
  if (pos) {
    std::string subject = text::trim(original.substr(0, *pos));
    std::string object = text::trim(original.substr(*pos + verb.size() + 2));
    if (!object.empty() && object.back() == '.') object.pop_back();
    return "There is no relationship between " + subject + " and " + object + ".";
  }
  return "There is no relationship between the treatment and the outcome.";
}

std::array<std::string, 3> parse_options(const std::string& prompt) {
  std::array<std::string, 3> options;
  options[0] = section_of(prompt, "Option 1");
  options[1] = section_of(prompt, "Option 2");
  options[2] = section_of(prompt, "Option 3");
  return options;
}

std::string answer_prediction(const ChatSession& session, int attempt_index,
                              std::uint64_t seed) {
  // The option block lives in the first user turn for both strategies.
  const std::string& first = session.transcript.front().text;
  const std::array<std::string, 3> options = parse_options(first);

  // Prefer a directional option over the no-relation one; pick between the
  // two directional options with a per-conclusion, per-attempt hash draw.
  std::vector<int> directional;
  for (int slot = 0; slot < 3; ++slot) {
    if (!text::contains_ci(options[static_cast<std::size_t>(slot)], "no relationship"))
      directional.push_back(slot);
  }
  std::string content_key = options[0] + "|" + options[1] + "|" + options[2];
  const std::uint64_t draw = hash_of({std::to_string(seed), section_of(first, "Experiment goal"),
                                      content_key, std::to_string(attempt_index)});
  int slot;
  if (directional.size() == 2) {
    // Per-conclusion bias: some conclusions the mock "knows", some it gets
    // systematically wrong, so accuracies spread over [0,1].
    const std::uint64_t bias =
        hash_of({std::to_string(seed), text::normalize(options[0] + options[1] + options[2])});
    const auto threshold = bias % 101;  // percent chance of picking the lexicographic min
    const std::string& a = options[static_cast<std::size_t>(directional[0])];
    const std::string& b = options[static_cast<std::size_t>(directional[1])];
    const int lexmin = a <= b ? directional[0] : directional[1];
    const int lexmax = a <= b ? directional[1] : directional[0];
    slot = (draw % 100 < threshold) ? lexmin : lexmax;
  } else {
    slot = static_cast<int>(draw % 3);
  }
  return "Option " + std::to_string(slot + 1);
}

std::string answer_topics(const std::string& prompt, std::uint64_t seed) {
  const std::string conclusion = text::normalize(section_of(prompt, "Conclusion"));
  // Only the settings block and the conclusion count as context; the
  // instruction block names every topic and would swamp the keyword rules.
  const std::size_t ctx_start = prompt.find("Experiment goal:");
  const std::string context =
      text::normalize(ctx_start == std::string::npos ? prompt : prompt.substr(ctx_start));

  std::array<int, 7> weights{};
  const auto bump = [&](std::size_t idx, int w) { weights[idx] += w; };
  if (context.find("women") != std::string::npos ||
      context.find("female") != std::string::npos ||
      context.find("gender") != std::string::npos)
    bump(0, 40);
  if (context.find("minority") != std::string::npos ||
      context.find("ethnic") != std::string::npos ||
      context.find("immigrant") != std::string::npos)
    bump(1, 40);
  if (context.find("norm") != std::string::npos ||
      context.find("social pressure") != std::string::npos)
    bump(2, 30);
  if (context.find("ethic") != std::string::npos ||
      context.find("honesty") != std::string::npos || context.find("cheat") != std::string::npos)
    bump(3, 30);
  if (context.find("elderly") != std::string::npos || context.find("young") != std::string::npos ||
      context.find(" age") != std::string::npos)
    bump(4, 30);
  if (context.find("income") != std::string::npos ||
      context.find("poverty") != std::string::npos || context.find("wage") != std::string::npos ||
      context.find("saving") != std::string::npos)
    bump(5, 30);

  int assigned = 0;
  for (int w : weights) assigned += w;
  if (assigned > 90) {
    for (int& w : weights) w = w * 90 / assigned;
    assigned = 0;
    for (int w : weights) assigned += w;
  }
  weights[6] = 100 - assigned;

  // A third of the responses come back summing to 98 to keep the
  // renormalization path in play.
  const std::uint64_t h = hash_of({std::to_string(seed), conclusion});
  if (h % 3 == 0 && weights[6] >= 2) weights[6] -= 2;

  std::ostringstream out;
  for (std::size_t i = 0; i < weights.size(); ++i)
    out << annotator::kTopicNames[i] << ": " << weights[i] << "\n";
  return out.str();
}

std::string answer_sentiment(const std::string& prompt) {
  const std::string conclusion = text::normalize(section_of(prompt, "Conclusion"));
  for (const char* positive : {"increases", "improves", "raises", "boosts"})
    if (conclusion.find(positive) != std::string::npos) return "positive";
  for (const char* negative : {"decreases", "reduces", "worsens", "lowers", "dampens"})
    if (conclusion.find(negative) != std::string::npos) return "negative";
  return "neutral";
}

std::string answer_favorability(const std::string& prompt) {
  const std::string conclusion = text::normalize(section_of(prompt, "Conclusion"));
  const bool about_women = conclusion.find("women") != std::string::npos ||
                           conclusion.find("female") != std::string::npos;
  if (!about_women) return "neutral";
  const std::string sentiment = answer_sentiment(prompt);
  if (sentiment == "positive") return "pro-female";
  if (sentiment == "negative") return "pro-male";
  return "neutral";
}

}  // namespace

SendResult SyntheticProvider::complete(const ChatSession& session, int attempt_index) {
  const std::string prompt = last_user_message(session);
  SendResult result;

  const bool labeling_prompt = prompt.find("Label the topic components") != std::string::npos ||
                               prompt.find("Decide the sentiment") != std::string::npos ||
                               prompt.find("favorable to females") != std::string::npos;
  if (labeling_prompt && text::contains_ci(section_of(prompt, "Conclusion"), "bribery")) {
    result.refused = true;
    result.refusal_reason = "content filter: bribery scenario";
    return result;
  }

  if (prompt.find("Does the paper design and implement a field experiment") != std::string::npos) {
    result.text = text::contains_ci(prompt, "purely theoretical survey") ? "No" : "Yes";
  } else if (prompt.find("fill out the form below") != std::string::npos) {
    result.text = answer_extraction(prompt);
  } else if (prompt.find("Separate it into standalone conclusions") != std::string::npos) {
    result.text = answer_split(prompt);
  } else if (prompt.find("only expresses the direction of the effect") != std::string::npos) {
    result.text = answer_dequantify(prompt);
  } else if (prompt.find("Invert the direction of the effect") != std::string::npos) {
    result.text = answer_reversed(prompt);
  } else if (prompt.find("Write" ) != std::string::npos &&
             prompt.find("unrelated variant") != std::string::npos) {
    result.text = answer_unrelated(prompt);
  } else if (prompt.find("Do not select an option yet") != std::string::npos) {
    result.text = "The decisive elements are the treatments, the outcomes measured, and how "
                  "the workflow links them.";
  } else if (prompt.find("choose the one option") != std::string::npos) {
    result.text = answer_prediction(session, attempt_index, seed_);
  } else if (prompt.find("Label the topic components") != std::string::npos) {
    result.text = answer_topics(prompt, seed_);
  } else if (prompt.find("Decide the sentiment") != std::string::npos) {
    result.text = answer_sentiment(prompt);
  } else if (prompt.find("favorable to females") != std::string::npos) {
    result.text = answer_favorability(prompt);
  } else {
    throw ProviderError("synthetic provider cannot answer prompt: " + prompt.substr(0, 80));
  }
  return result;
}

}  // namespace fieldsim::synthetic
