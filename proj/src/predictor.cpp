#include "fieldsim/predictor.hpp"

#include <cctype>

#include "fieldsim/errors.hpp"
#include "fieldsim/prompts.hpp"
#include "fieldsim/textutil.hpp"

namespace fieldsim::predictor {

std::string strategy_name(Strategy s) { return s == Strategy::Basic ? "basic" : "cot"; }

Strategy strategy_from_name(const std::string& name) {
  const std::string n = text::to_lower(name);
  if (n == "basic") return Strategy::Basic;
  if (n == "cot") return Strategy::CoT;
  throw ConfigError("unknown strategy: " + name + " (expected basic or cot)");
}

std::string choice_name(Choice c) {
  switch (c) {
    case Choice::Slot1: return "Slot1";
    case Choice::Slot2: return "Slot2";
    case Choice::Slot3: return "Slot3";
    case Choice::Unparseable: return "Unparseable";
    case Choice::Refused: return "Refused";
  }
  return "Unparseable";
}

Choice choice_from_name(const std::string& name) {
  for (Choice c : {Choice::Slot1, Choice::Slot2, Choice::Slot3, Choice::Unparseable,
                   Choice::Refused}) {
    if (choice_name(c) == name) return c;
  }
  throw ParseError("unknown choice name: " + name);
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw PreconditionError("uniform_index: n must be positive");
  // Rejection sampling over the largest multiple of n, so the draw is exactly
  // uniform and identical on every platform.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

namespace {

constexpr std::array<Permutation, 6> kPermutations = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

}  // namespace

std::pair<std::array<std::string, 3>, Permutation> shuffle_options(
    const variantgen::ConclusionTriple& triple, std::mt19937_64& rng) {
  const Permutation perm = kPermutations[uniform_index(rng, 6)];
  const std::array<const std::string*, 3> sources = {&triple.original, &triple.reversed,
                                                     &triple.unrelated};
  std::array<std::string, 3> options;
  for (int slot = 0; slot < 3; ++slot)
    options[static_cast<std::size_t>(slot)] =
        *sources[static_cast<std::size_t>(perm[static_cast<std::size_t>(slot)])];
  return {options, perm};
}

std::string build_basic_prompt(const extraction::ExperimentSettings& settings,
                               const std::array<std::string, 3>& options) {
  return prompts::basic_prediction_prompt(settings, options);
}

std::pair<std::string, std::string> build_cot_prompts(
    const extraction::ExperimentSettings& settings, const std::array<std::string, 3>& options) {
  return {prompts::cot_turn1_prompt(settings, options), prompts::cot_turn2_prompt()};
}

Choice parse_choice(const SendResult& response, const std::array<std::string, 3>& options) {
  if (response.refused) return Choice::Refused;
  const std::string norm = text::normalize(response.text);

  // Rule 1: explicit slot mention.
  std::size_t pos = norm.find("option ");
  if (pos != std::string::npos && pos + 7 < norm.size()) {
    const char digit = norm[pos + 7];
    if (digit >= '1' && digit <= '3') return static_cast<Choice>(digit - '1');
  }
  // A bare leading digit also counts as an explicit mention.
  if (!norm.empty() && norm[0] >= '1' && norm[0] <= '3' &&
      (norm.size() == 1 || !std::isalnum(static_cast<unsigned char>(norm[1]))))
    return static_cast<Choice>(norm[0] - '1');

  // Rule 2: unique substring match against exactly one option text.
  int match = -1;
  for (int slot = 0; slot < 3; ++slot) {
    const std::string opt = text::normalize(options[static_cast<std::size_t>(slot)]);
    if (!opt.empty() && norm.find(opt) != std::string::npos) {
      if (match >= 0) return Choice::Unparseable;  // ambiguous
      match = slot;
    }
  }
  if (match >= 0) return static_cast<Choice>(match);
  return Choice::Unparseable;
}

ConclusionRunResult run_conclusion(const extraction::ExperimentSettings& settings,
                                   const variantgen::ConclusionTriple& triple,
                                   const RunConfig& config, Gateway& gateway,
                                   std::mt19937_64& rng) {
  if (config.repeats < 1) throw PreconditionError("run_conclusion: repeats must be >= 1");

  ConclusionRunResult result;
  result.conclusion_id = triple.conclusion_id;
  int failures = 0;

  for (int attempt = 0; attempt < config.repeats; ++attempt) {
    auto [options, perm] = shuffle_options(triple, rng);
    AttemptRecord record;
    record.conclusion_id = triple.conclusion_id;
    record.attempt_index = attempt;
    record.permutation = perm;

    try {
      ChatSession session = gateway.open_session(Role::Predictor);
      SendResult response;
      if (config.strategy == Strategy::Basic) {
        response = gateway.send(session, build_basic_prompt(settings, options), attempt);
      } else {
        const auto [turn1, turn2] = build_cot_prompts(settings, options);
        const SendResult first = gateway.send(session, turn1, attempt);
        if (first.refused) {
          response = first;
        } else {
          response = gateway.send(session, turn2, attempt);
        }
      }
      record.raw_response = response.text;
      record.parsed_choice = parse_choice(response, options);
    } catch (const ProviderError&) {
      if (++failures > config.attempt_failure_budget) {
        result.aborted = true;
        break;
      }
      record.raw_response.clear();
      record.parsed_choice = Choice::Unparseable;
    }

    const int slot = static_cast<int>(record.parsed_choice);
    record.correct = slot >= 0 && slot <= 2 &&
                     perm[static_cast<std::size_t>(slot)] == 0;  // slot holds the original
    result.attempts.push_back(std::move(record));
  }

  int correct = 0;
  for (const AttemptRecord& a : result.attempts) correct += a.correct ? 1 : 0;
  result.accuracy = result.attempts.empty()
                        ? 0.0
                        : static_cast<double>(correct) / static_cast<double>(result.attempts.size());
  return result;
}

PaperRunResult run_paper(const std::string& paper_id,
                         const std::vector<ConclusionRunResult>& results) {
  if (results.empty())
    throw PreconditionError("run_paper: paper " + paper_id + " has no conclusion results");
  double sum = 0.0;
  for (const ConclusionRunResult& r : results) sum += r.accuracy;
  PaperRunResult out;
  out.paper_id = paper_id;
  out.n_conclusions = static_cast<int>(results.size());
  out.accuracy = sum / static_cast<double>(results.size());
  return out;
}

}  // namespace fieldsim::predictor
