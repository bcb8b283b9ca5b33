#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fieldsim {

/// Bad or missing configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Input data that cannot be parsed (corpus records, LLM responses, ...).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation invoked on an object in the wrong state.
struct PreconditionError : std::logic_error {
  explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

/// Provider transport failure that survived the retry budget.
struct ProviderError : std::runtime_error {
  explicit ProviderError(const std::string& what) : std::runtime_error(what) {}
};

/// Replay fixture has no entry for a requested key (CLI exit code 3).
struct FixtureMissError : std::runtime_error {
  explicit FixtureMissError(const std::string& key)
      : std::runtime_error("replay fixture has no entry for key " + key), missing_key(key) {}
  std::string missing_key;
};

/// Design matrix is numerically rank deficient.
struct RankDeficiencyError : std::runtime_error {
  RankDeficiencyError(const std::string& what, std::vector<std::string> columns,
                      double condition)
      : std::runtime_error(what), dependent_columns(std::move(columns)),
        condition_number(condition) {}
  std::vector<std::string> dependent_columns;
  double condition_number;
};

}  // namespace fieldsim
