#pragma once

#include <string>
#include <vector>

#include "fieldsim/gateway.hpp"

namespace fieldsim::variantgen {

struct ConclusionTriple {
  std::string conclusion_id;
  std::string original;
  std::string reversed;
  std::string unrelated;
};

/// Default phrase list satisfying the unrelated-variant check.
std::vector<std::string> default_no_relation_phrases();

/// Inverted-direction restatement of a directional claim.
/// Output equal to the input after normalization is an error.
std::string generate_reversed(const std::string& original, Gateway& gateway);

/// No-relationship statement over the same entities, generated from both the
/// original and the reversed conclusion. Duplicating either input is an error.
std::string generate_unrelated(const std::string& original, const std::string& reversed,
                               Gateway& gateway);

struct ValidationReport {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks pairwise distinctness (after normalization), non-emptiness, and
/// that the unrelated variant carries a no-relation phrase.
ValidationReport validate_triple(const ConclusionTriple& triple,
                                 const std::vector<std::string>& no_relation_phrases =
                                     default_no_relation_phrases());

/// Builds a full triple: reversed first, then unrelated. Triples failing
/// validation are regenerated once; a second failure raises ParseError
/// (the quarantine path — the caller decides what to do with the id).
ConclusionTriple generate_triple(const std::string& conclusion_id, const std::string& original,
                                 Gateway& gateway);

}  // namespace fieldsim::variantgen
