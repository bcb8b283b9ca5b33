#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fieldsim/annotator.hpp"
#include "fieldsim/corpus.hpp"
#include "fieldsim/extraction.hpp"
#include "fieldsim/gateway.hpp"
#include "fieldsim/predictor.hpp"
#include "fieldsim/regression.hpp"
#include "fieldsim/stats.hpp"
#include "fieldsim/variantgen.hpp"

namespace fieldsim::pipeline {

enum class ProviderKind { Synthetic, Replay };

struct PipelineConfig {
  std::filesystem::path run_dir = "run";
  std::filesystem::path corpus_path;
  ProviderKind provider_kind = ProviderKind::Synthetic;
  std::optional<std::filesystem::path> fixtures_path;  // replay source
  std::optional<std::filesystem::path> record_path;    // record fixtures while running
  std::optional<std::filesystem::path> cache_dir;
  std::string preprocessor_model = "claude-sim";
  std::string predictor_model = "gpt-sim";
  predictor::Strategy strategy = predictor::Strategy::CoT;
  int repeats = 20;
  std::uint64_t seed = 0;
  std::vector<std::string> keywords = corpus::default_keywords();
  bool resume = false;

  static PipelineConfig from_file(const std::filesystem::path& path);
  void validate() const;
  /// Flat key/value snapshot recorded in the manifest.
  std::map<std::string, std::string> snapshot() const;
};

struct StageRecord {
  std::string name;
  std::map<std::string, long> counts;
  std::vector<std::string> artifacts;  // paths relative to run_dir
  std::vector<std::string> notes;
};

struct RunManifest {
  std::string run_id;
  std::map<std::string, std::string> config_snapshot;
  std::vector<StageRecord> stages;
  std::map<std::string, std::string> file_digests;  // relative path -> digest

  bool stage_done(const std::string& name) const;
  const StageRecord* find_stage(const std::string& name) const;
};

inline constexpr std::array<const char*, 8> kStageNames = {
    "ingest", "verify", "extract", "variants", "predict", "annotate", "analyze", "report"};

/// Runs the pipeline stages from `first_stage` through `last_stage`
/// inclusive, persisting artifacts and the manifest under config.run_dir.
/// With config.resume, stages whose artifacts already exist are skipped.
RunManifest run_pipeline(const PipelineConfig& config, const std::string& first_stage = "ingest",
                         const std::string& last_stage = "report");

/// Loads the manifest persisted by a previous (possibly partial) run.
RunManifest load_manifest(const std::filesystem::path& run_dir);

}  // namespace fieldsim::pipeline
