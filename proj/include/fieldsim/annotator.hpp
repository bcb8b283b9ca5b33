#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fieldsim/extraction.hpp"
#include "fieldsim/gateway.hpp"

namespace fieldsim::annotator {

inline constexpr std::array<const char*, 7> kTopicNames = {
    "gender", "ethnicity", "social norms", "ethical dilemmas",
    "age",    "socioeconomic status", "other topics"};

/// Seven topic percentages summing to 100.
struct TopicVector {
  std::array<double, 7> components{};  // kTopicNames order

  double gender() const { return components[0]; }
  double sum() const;
};

enum class AnnotationStatus { Labeled, Refused };

struct AnnotationRecord {
  std::string conclusion_id;
  AnnotationStatus status = AnnotationStatus::Refused;
  TopicVector topics;           // meaningful only when Labeled
  int sentiment = 0;            // -1 negative, 0 neutral, 1 positive
  int gender_favorability = 0;  // 1 pro-female/anti-male, -1 opposite, 0 neutral
  std::string refusal_reason;
};

/// Parses seven "name: percentage" lines. Sums in [95,105] are renormalized
/// to exactly 100; anything else fails.
std::optional<TopicVector> parse_topic_response(const std::string& response);

/// Labels the topic components of a conclusion under its experiment context.
/// One re-ask on an out-of-window sum, then Refused.
std::optional<TopicVector> label_topics(const extraction::Conclusion& conclusion,
                                        const extraction::ExperimentSettings& settings,
                                        Gateway& gateway);

/// positive -> 1, neutral -> 0, negative -> -1; one re-ask, then nullopt.
std::optional<int> label_sentiment(const extraction::Conclusion& conclusion,
                                   const extraction::ExperimentSettings& settings,
                                   Gateway& gateway);

/// Gender-related conclusions only (topics.gender > 0):
/// pro-female or anti-male -> 1, neutral -> 0, pro-male or anti-female -> -1.
std::optional<int> label_gender_favorability(const extraction::Conclusion& conclusion,
                                             const extraction::ExperimentSettings& settings,
                                             Gateway& gateway);

/// Full per-conclusion annotation: topics, sentiment, and favorability when
/// gender is present. Any refusal along the way yields a Refused record.
AnnotationRecord annotate(const extraction::Conclusion& conclusion,
                          const extraction::ExperimentSettings& settings, Gateway& gateway);

}  // namespace fieldsim::annotator
