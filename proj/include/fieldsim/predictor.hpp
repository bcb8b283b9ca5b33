#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fieldsim/extraction.hpp"
#include "fieldsim/gateway.hpp"
#include "fieldsim/variantgen.hpp"

namespace fieldsim::predictor {

enum class Strategy { Basic, CoT };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct RunConfig {
  Strategy strategy = Strategy::Basic;
  int repeats = 20;
  std::string model_id;
  std::uint64_t rng_seed = 0;
  // Attempts allowed to fail (transport) before the conclusion aborts.
  int attempt_failure_budget = 3;
};

enum class Choice { Slot1, Slot2, Slot3, Unparseable, Refused };

std::string choice_name(Choice c);
Choice choice_from_name(const std::string& name);

/// Which source text (0 original, 1 reversed, 2 unrelated) each of the three
/// prompt slots holds.
using Permutation = std::array<int, 3>;

struct AttemptRecord {
  std::string conclusion_id;
  int attempt_index = 0;
  Permutation permutation{0, 1, 2};
  std::string raw_response;
  Choice parsed_choice = Choice::Unparseable;
  bool correct = false;
};

struct ConclusionRunResult {
  std::string conclusion_id;
  std::vector<AttemptRecord> attempts;
  double accuracy = 0.0;
  bool aborted = false;  // failure budget exhausted; attempts are partial
};

struct PaperRunResult {
  std::string paper_id;
  double accuracy = 0.0;
  int n_conclusions = 0;
};

/// Deterministic bounded draw from a raw 64-bit generator. Not
/// std::uniform_int_distribution, whose mapping varies across standard
/// library implementations; manifests must be byte-identical everywhere.
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

/// Shuffles the triple into the three option slots, uniform over the six
/// permutations. Returns the ordered texts and the permutation applied.
std::pair<std::array<std::string, 3>, Permutation> shuffle_options(
    const variantgen::ConclusionTriple& triple, std::mt19937_64& rng);

std::string build_basic_prompt(const extraction::ExperimentSettings& settings,
                               const std::array<std::string, 3>& options);
std::pair<std::string, std::string> build_cot_prompts(
    const extraction::ExperimentSettings& settings, const std::array<std::string, 3>& options);

/// Resolution order: explicit slot mention, then unique normalized-substring
/// match against one option text, then Unparseable. Refusals map to Refused.
Choice parse_choice(const SendResult& response, const std::array<std::string, 3>& options);

/// Runs config.repeats attempts against the Predictor role, each with a
/// fresh shuffle and a fresh session (Basic: one turn per attempt; CoT: two
/// turns within one session per attempt). Accuracy = correct / attempts.
ConclusionRunResult run_conclusion(const extraction::ExperimentSettings& settings,
                                   const variantgen::ConclusionTriple& triple,
                                   const RunConfig& config, Gateway& gateway,
                                   std::mt19937_64& rng);

/// Paper accuracy: unweighted mean of the paper's conclusion accuracies.
PaperRunResult run_paper(const std::string& paper_id,
                         const std::vector<ConclusionRunResult>& results);

}  // namespace fieldsim::predictor
