// fieldsim: field-experiment conclusion prediction pipeline.
//
// Subcommands mirror the pipeline stages (ingest, verify, extract, variants,
// predict, annotate, analyze, report) plus run-all. Expensive LLM stages can
// be re-run in isolation against persisted artifacts.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "fieldsim/errors.hpp"
#include "fieldsim/pipeline.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string corpus;
  std::string fixtures;
  std::string record;
  std::string strategy;
  std::string model;
  std::string run_dir;
  long long seed = -1;
  int repeats = -1;
  bool resume = false;
};

fieldsim::pipeline::PipelineConfig build_config(const CliOptions& opt) {
  using fieldsim::pipeline::PipelineConfig;
  PipelineConfig config = opt.config_path.empty()
                              ? PipelineConfig{}
                              : PipelineConfig::from_file(opt.config_path);
  if (!opt.corpus.empty()) config.corpus_path = opt.corpus;
  if (!opt.fixtures.empty()) {
    config.fixtures_path = opt.fixtures;
    config.provider_kind = fieldsim::pipeline::ProviderKind::Replay;
  }
  if (!opt.record.empty()) config.record_path = opt.record;
  if (!opt.strategy.empty())
    config.strategy = fieldsim::predictor::strategy_from_name(opt.strategy);
  if (!opt.model.empty()) config.predictor_model = opt.model;
  if (!opt.run_dir.empty()) config.run_dir = opt.run_dir;
  if (opt.seed >= 0) config.seed = static_cast<std::uint64_t>(opt.seed);
  if (opt.repeats >= 0) config.repeats = opt.repeats;
  config.resume = opt.resume;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Field-experiment conclusion prediction pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global options after the stage subcommand too

  CliOptions opt;
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--corpus", opt.corpus, "Corpus JSONL path (overrides config)");
  app.add_option("--fixtures", opt.fixtures, "Replay fixture JSONL (switches provider to replay)");
  app.add_option("--record", opt.record, "Record provider exchanges to this fixture JSONL");
  app.add_option("--seed", opt.seed, "RNG seed (overrides config)");
  app.add_option("--repeats", opt.repeats, "Prediction repeats per conclusion");
  app.add_option("--strategy", opt.strategy, "Prediction strategy: basic or cot");
  app.add_option("--model", opt.model, "Predictor model id");
  app.add_option("--run-dir", opt.run_dir, "Run directory for artifacts and reports");
  app.add_flag("--resume", opt.resume, "Skip stages whose artifacts already exist");

  // One subcommand per stage; run-all covers ingest through report.
  for (const char* stage : fieldsim::pipeline::kStageNames) app.add_subcommand(stage);
  app.add_subcommand("run-all");

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    const auto config = build_config(opt);
    const std::string first = (sub == "run-all") ? "ingest" : sub;
    const std::string last = (sub == "run-all") ? "report" : sub;
    const auto manifest = fieldsim::pipeline::run_pipeline(config, first, last);
    std::printf("run %s complete; %zu stage(s) recorded, %zu file(s) in manifest\n",
                manifest.run_id.c_str(), manifest.stages.size(),
                manifest.file_digests.size());
    return 0;
  } catch (const fieldsim::ConfigError& ex) {
    std::fprintf(stderr, "config error: %s\n", ex.what());
    return 1;
  } catch (const fieldsim::FixtureMissError& ex) {
    std::fprintf(stderr, "fixture miss: %s\n", ex.what());
    return 3;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "stage failure: %s\n", ex.what());
    return 2;
  }
}
