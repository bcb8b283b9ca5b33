#include "fieldsim/annotator.hpp"

#include <cmath>

#include "fieldsim/errors.hpp"
#include "fieldsim/prompts.hpp"
#include "fieldsim/textutil.hpp"

namespace fieldsim::annotator {

double TopicVector::sum() const {
  double s = 0.0;
  for (double v : components) s += v;
  return s;
}

std::optional<TopicVector> parse_topic_response(const std::string& response) {
  TopicVector vec;
  std::array<bool, 7> seen{};
  for (const std::string& line : text::split_lines(response)) {
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string name = text::normalize(line.substr(0, colon));
    for (std::size_t i = 0; i < kTopicNames.size(); ++i) {
      if (name != kTopicNames[i] && name.find(kTopicNames[i]) == std::string::npos) continue;
      try {
        const std::string value = text::trim(line.substr(colon + 1));
        vec.components[i] = std::stod(value);
      } catch (const std::exception&) {
        return std::nullopt;
      }
      seen[i] = true;
      break;
    }
  }
  for (bool s : seen)
    if (!s) return std::nullopt;
  for (double v : vec.components)
    if (v < 0.0) return std::nullopt;

  const double total = vec.sum();
  if (total < 95.0 || total > 105.0) return std::nullopt;
  for (double& v : vec.components) v *= 100.0 / total;
  return vec;
}

std::optional<TopicVector> label_topics(const extraction::Conclusion& conclusion,
                                        const extraction::ExperimentSettings& settings,
                                        Gateway& gateway) {
  const std::string prompt = prompts::topic_labeling_prompt(conclusion.text, settings);
  for (int ask = 0; ask < 2; ++ask) {
    ChatSession session = gateway.open_session(Role::Preprocessor);
    const SendResult result = gateway.send(session, prompt, ask);
    if (result.refused) return std::nullopt;
    if (auto vec = parse_topic_response(result.text)) return vec;
  }
  return std::nullopt;
}

namespace {

std::optional<int> map_sentiment(const std::string& response) {
  const std::string norm = text::normalize(response);
  if (norm.rfind("positive", 0) == 0) return 1;
  if (norm.rfind("negative", 0) == 0) return -1;
  if (norm.rfind("neutral", 0) == 0) return 0;
  return std::nullopt;
}

std::optional<int> map_favorability(const std::string& response) {
  const std::string norm = text::normalize(response);
  if (norm.find("pro-female") != std::string::npos ||
      norm.find("favorable to females") != std::string::npos ||
      norm.find("anti-male") != std::string::npos ||
      norm.find("detrimental to males") != std::string::npos)
    return 1;
  if (norm.find("pro-male") != std::string::npos ||
      norm.find("favorable to males") != std::string::npos ||
      norm.find("anti-female") != std::string::npos ||
      norm.find("detrimental to females") != std::string::npos)
    return -1;
  if (norm.find("neutral") != std::string::npos) return 0;
  return std::nullopt;
}

template <typename Mapper>
std::optional<int> ask_label(Gateway& gateway, const std::string& prompt, Mapper mapper) {
  for (int ask = 0; ask < 2; ++ask) {
    ChatSession session = gateway.open_session(Role::Preprocessor);
    const SendResult result = gateway.send(session, prompt, ask);
    if (result.refused) return std::nullopt;
    if (auto mapped = mapper(result.text)) return mapped;
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> label_sentiment(const extraction::Conclusion& conclusion,
                                   const extraction::ExperimentSettings& settings,
                                   Gateway& gateway) {
  return ask_label(gateway, prompts::sentiment_prompt(conclusion.text, settings), map_sentiment);
}

std::optional<int> label_gender_favorability(const extraction::Conclusion& conclusion,
                                             const extraction::ExperimentSettings& settings,
                                             Gateway& gateway) {
  return ask_label(gateway, prompts::gender_favorability_prompt(conclusion.text, settings),
                   map_favorability);
}

AnnotationRecord annotate(const extraction::Conclusion& conclusion,
                          const extraction::ExperimentSettings& settings, Gateway& gateway) {
  AnnotationRecord record;
  record.conclusion_id = conclusion.id;

  const auto topics = label_topics(conclusion, settings, gateway);
  if (!topics) {
    record.refusal_reason = "topic labeling refused or unparseable";
    return record;
  }
  const auto sentiment = label_sentiment(conclusion, settings, gateway);
  if (!sentiment) {
    record.refusal_reason = "sentiment labeling refused or unparseable";
    return record;
  }

  record.topics = *topics;
  record.sentiment = *sentiment;
  record.gender_favorability = 0;  // neutral default zeroes the interaction
  if (topics->gender() > 0.0) {
    const auto favorability = label_gender_favorability(conclusion, settings, gateway);
    if (!favorability) {
      record.topics = TopicVector{};
      record.sentiment = 0;
      record.refusal_reason = "gender favorability labeling refused or unparseable";
      return record;
    }
    record.gender_favorability = *favorability;
  }
  record.status = AnnotationStatus::Labeled;
  return record;
}

}  // namespace fieldsim::annotator
