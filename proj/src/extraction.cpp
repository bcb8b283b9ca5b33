#include "fieldsim/extraction.hpp"

#include <array>
#include <cctype>
#include <optional>

#include "fieldsim/errors.hpp"
#include "fieldsim/textutil.hpp"

namespace fieldsim::extraction {

std::string build_extraction_prompt(const std::string& paper_text) {
  if (paper_text.empty())
    throw PreconditionError("build_extraction_prompt: paper text must be non-empty");
  return prompts::extraction_prompt(paper_text);
}

namespace {

// "A.", "A)", "A:" (any case), optionally preceded by list bullets.
std::optional<int> section_label(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) ||
                             line[i] == '*' || line[i] == '-'))
    ++i;
  if (i >= line.size()) return std::nullopt;
  const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(line[i])));
  if (c < 'A' || c > 'G') return std::nullopt;
  if (i + 1 >= line.size()) return std::nullopt;
  const char sep = line[i + 1];
  if (sep != '.' && sep != ')' && sep != ':') return std::nullopt;
  return c - 'A';
}

std::string strip_label(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) ||
                             line[i] == '*' || line[i] == '-'))
    ++i;
  return text::trim(line.substr(i + 2));
}

// Leading "1." / "2)" / "-" list markers on split-conclusion lines.
std::string strip_list_marker(const std::string& line) {
  std::size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  std::size_t j = i;
  while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
  if (j > i && j < line.size() && (line[j] == '.' || line[j] == ')'))
    return text::trim(line.substr(j + 1));
  if (i < line.size() && (line[i] == '-' || line[i] == '*'))
    return text::trim(line.substr(i + 1));
  return text::trim(line);
}

}  // namespace

ExtractionResponse parse_extraction_response(const std::string& response) {
  if (response.empty())
    throw PreconditionError("parse_extraction_response: response must be non-empty");

  std::array<std::string, 7> sections;
  std::array<bool, 7> present{};
  int current = -1;
  for (const std::string& line : text::split_lines(response)) {
    if (auto label = section_label(line)) {
      current = *label;
      present[static_cast<std::size_t>(current)] = true;
      sections[static_cast<std::size_t>(current)] = strip_label(line);
      continue;
    }
    if (current >= 0 && !text::trim(line).empty()) {
      auto& sec = sections[static_cast<std::size_t>(current)];
      if (!sec.empty()) sec += " ";
      sec += text::trim(line);
    }
  }

  std::string missing;
  for (int i = 0; i < 7; ++i) {
    if (!present[static_cast<std::size_t>(i)] ||
        sections[static_cast<std::size_t>(i)].empty()) {
      if (!missing.empty()) missing += ", ";
      missing += static_cast<char>('A' + i);
    }
  }
  if (!missing.empty())
    throw ParseError("extraction response incomplete; missing sections: " + missing);

  ExtractionResponse out;
  out.settings.goal = sections[0];
  out.settings.treatments = sections[1];
  out.settings.duration = sections[2];
  out.settings.outcomes = sections[3];
  out.settings.participants = sections[4];
  out.settings.workflow = sections[5];
  out.raw_conclusions = sections[6];
  return out;
}

std::vector<Conclusion> split_conclusions(const std::string& raw_conclusions,
                                          const std::string& paper_id, Gateway& gateway) {
  if (raw_conclusions.empty())
    throw PreconditionError("split_conclusions: raw conclusions must be non-empty");

  ChatSession session = gateway.open_session(Role::Preprocessor);
  const SendResult result =
      gateway.send(session, prompts::split_conclusions_prompt(raw_conclusions));
  if (result.refused)
    throw ProviderError("split_conclusions: provider refused for paper " + paper_id);

  std::vector<Conclusion> out;
  for (const std::string& line : text::split_lines(result.text)) {
    const std::string sentence = strip_list_marker(line);
    if (sentence.empty()) continue;
    Conclusion c;
    c.paper_id = paper_id;
    c.id = paper_id + "-c" + std::to_string(out.size() + 1);
    c.text = sentence;
    out.push_back(std::move(c));
  }
  if (out.empty())
    throw ParseError("split_conclusions: provider returned no conclusions for paper " +
                     paper_id);
  return out;
}

Conclusion dequantify(Conclusion conclusion, Gateway& gateway) {
  if (conclusion.text.empty())
    throw PreconditionError("dequantify: conclusion text must be present");
  if (!text::mentions_quantity(conclusion.text)) {
    conclusion.dequantified = false;
    return conclusion;
  }
  ChatSession session = gateway.open_session(Role::Preprocessor);
  const SendResult result = gateway.send(session, prompts::dequantify_prompt(conclusion.text));
  if (result.refused)
    throw ProviderError("dequantify: provider refused for conclusion " + conclusion.id);
  const std::string rewritten = text::trim(result.text);
  if (rewritten.empty())
    throw ParseError("dequantify: empty rewrite for conclusion " + conclusion.id);
  if (text::normalize(rewritten) == text::normalize(conclusion.text)) {
    // Quantity words that survive the rewrite unchanged ("one-on-one mentoring")
    // are treated as non-numeric phrasing, not a failed rewrite.
    conclusion.dequantified = false;
    return conclusion;
  }
  conclusion.text = rewritten;
  conclusion.dequantified = true;
  return conclusion;
}

std::vector<std::string> settings_conclusion_overlap(
    const ExperimentSettings& settings, const std::vector<Conclusion>& conclusions) {
  const std::array<const std::string*, 6> fields = {
      &settings.goal,       &settings.treatments,   &settings.duration,
      &settings.outcomes,   &settings.participants, &settings.workflow};
  std::vector<std::string> offenders;
  for (const Conclusion& c : conclusions) {
    const std::string needle = text::normalize(c.text);
    if (needle.empty()) continue;
    for (const std::string* field : fields) {
      if (text::normalize(*field).find(needle) != std::string::npos) {
        offenders.push_back(c.id);
        break;
      }
    }
  }
  return offenders;
}

}  // namespace fieldsim::extraction
