#include "fieldsim/variantgen.hpp"

#include "fieldsim/errors.hpp"
#include "fieldsim/prompts.hpp"
#include "fieldsim/textutil.hpp"

namespace fieldsim::variantgen {

std::vector<std::string> default_no_relation_phrases() {
  return {"no relationship", "no effect", "not associated", "no correlation"};
}

namespace {

std::string ask(Gateway& gateway, const std::string& prompt, int attempt_index,
                const std::string& what) {
  ChatSession session = gateway.open_session(Role::Preprocessor);
  const SendResult result = gateway.send(session, prompt, attempt_index);
  if (result.refused) throw ProviderError(what + ": provider refused");
  const std::string out = fieldsim::text::trim(result.text);
  if (out.empty()) throw ParseError(what + ": empty response");
  return out;
}

}  // namespace

std::string generate_reversed(const std::string& original, Gateway& gateway) {
  if (original.empty())
    throw PreconditionError("generate_reversed: original must be non-empty");
  const std::string reversed =
      ask(gateway, prompts::reversed_variant_prompt(original), 0, "generate_reversed");
  if (text::normalize(reversed) == text::normalize(original))
    throw ParseError("generate_reversed: output equals the input conclusion");
  return reversed;
}

std::string generate_unrelated(const std::string& original, const std::string& reversed,
                               Gateway& gateway) {
  if (original.empty() || reversed.empty())
    throw PreconditionError("generate_unrelated: both inputs must be present");
  const std::string unrelated = ask(
      gateway, prompts::unrelated_variant_prompt(original, reversed), 0, "generate_unrelated");
  const std::string norm = text::normalize(unrelated);
  if (norm == text::normalize(original) || norm == text::normalize(reversed))
    throw ParseError("generate_unrelated: output duplicates an input conclusion");
  return unrelated;
}

ValidationReport validate_triple(const ConclusionTriple& triple,
                                 const std::vector<std::string>& no_relation_phrases) {
  ValidationReport report;
  if (triple.original.empty()) report.failures.push_back("original is empty");
  if (triple.reversed.empty()) report.failures.push_back("reversed is empty");
  if (triple.unrelated.empty()) report.failures.push_back("unrelated is empty");

  const std::string o = text::normalize(triple.original);
  const std::string r = text::normalize(triple.reversed);
  const std::string u = text::normalize(triple.unrelated);
  if (!o.empty() && o == r) report.failures.push_back("reversed equals original");
  if (!o.empty() && o == u) report.failures.push_back("unrelated equals original");
  if (!r.empty() && r == u) report.failures.push_back("unrelated equals reversed");

  if (!triple.unrelated.empty()) {
    bool found = false;
    for (const std::string& phrase : no_relation_phrases) {
      if (u.find(text::normalize(phrase)) != std::string::npos) {
        found = true;
        break;
      }
    }
    if (!found) report.failures.push_back("unrelated lacks a no-relation phrase");
  }
  return report;
}

ConclusionTriple generate_triple(const std::string& conclusion_id, const std::string& original,
                                 Gateway& gateway) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    ConclusionTriple triple;
    triple.conclusion_id = conclusion_id;
    triple.original = original;
    triple.reversed = ask(gateway, prompts::reversed_variant_prompt(original), attempt,
                          "generate_reversed");
    triple.unrelated =
        ask(gateway, prompts::unrelated_variant_prompt(original, triple.reversed), attempt,
            "generate_unrelated");
    if (validate_triple(triple).ok()) return triple;
  }
  throw ParseError("generate_triple: validation failed twice for conclusion " + conclusion_id +
                   "; quarantined");
}

}  // namespace fieldsim::variantgen
