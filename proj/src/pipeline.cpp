#include "fieldsim/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "fieldsim/digest.hpp"
#include "fieldsim/errors.hpp"
#include "fieldsim/synthetic.hpp"
#include "json.hpp"

namespace fieldsim::pipeline {

using nlohmann::json;

namespace {

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("artifact not found: " + path.string());
  std::vector<json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write artifact: " + path.string());
  for (const json& j : records) out << j.dump() << "\n";
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return digest_hex(buf.str());
}

int stage_index(const std::string& name) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i)
    if (name == kStageNames[i]) return static_cast<int>(i);
  throw ConfigError("unknown stage: " + name);
}

prompts::SettingsFields settings_from_json(const json& j) {
  prompts::SettingsFields s;
  s.goal = j.at("goal").get<std::string>();
  s.treatments = j.at("treatments").get<std::string>();
  s.duration = j.at("duration").get<std::string>();
  s.outcomes = j.at("outcomes").get<std::string>();
  s.participants = j.at("participants").get<std::string>();
  s.workflow = j.at("workflow").get<std::string>();
  return s;
}

json settings_to_json(const prompts::SettingsFields& s) {
  return json{{"goal", s.goal},           {"treatments", s.treatments},
              {"duration", s.duration},   {"outcomes", s.outcomes},
              {"participants", s.participants}, {"workflow", s.workflow}};
}

}  // namespace

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path.string());

  PipelineConfig c;
  c.run_dir = j.value("run_dir", std::string("run"));
  if (j.contains("corpus")) c.corpus_path = j["corpus"].get<std::string>();
  const std::string kind = j.value("provider", std::string("synthetic"));
  if (kind == "synthetic") {
    c.provider_kind = ProviderKind::Synthetic;
  } else if (kind == "replay") {
    c.provider_kind = ProviderKind::Replay;
  } else {
    throw ConfigError("unknown provider kind: " + kind);
  }
  if (j.contains("fixtures")) c.fixtures_path = std::filesystem::path(j["fixtures"].get<std::string>());
  if (j.contains("record")) c.record_path = std::filesystem::path(j["record"].get<std::string>());
  if (j.contains("cache_dir")) c.cache_dir = std::filesystem::path(j["cache_dir"].get<std::string>());
  c.preprocessor_model = j.value("preprocessor_model", c.preprocessor_model);
  c.predictor_model = j.value("predictor_model", c.predictor_model);
  if (j.contains("strategy"))
    c.strategy = predictor::strategy_from_name(j["strategy"].get<std::string>());
  c.repeats = j.value("repeats", c.repeats);
  c.seed = j.value("seed", c.seed);
  if (j.contains("keywords")) c.keywords = j["keywords"].get<std::vector<std::string>>();
  return c;
}

void PipelineConfig::validate() const {
  if (corpus_path.empty()) throw ConfigError("config: corpus path is required");
  if (predictor_model.empty()) throw ConfigError("config: predictor model is required");
  if (preprocessor_model.empty()) throw ConfigError("config: preprocessor model is required");
  if (preprocessor_model == predictor_model)
    throw ConfigError("config: preprocessor and predictor models must be distinct");
  if (repeats < 1) throw ConfigError("config: repeats must be >= 1");
  if (keywords.empty()) throw ConfigError("config: keyword list must be non-empty");
  if (provider_kind == ProviderKind::Replay && !fixtures_path)
    throw ConfigError("config: replay provider requires a fixtures path");
}

std::map<std::string, std::string> PipelineConfig::snapshot() const {
  std::map<std::string, std::string> snap;
  snap["corpus"] = corpus_path.filename().string();
  snap["provider"] = provider_kind == ProviderKind::Synthetic ? "synthetic" : "replay";
  snap["preprocessor_model"] = preprocessor_model;
  snap["predictor_model"] = predictor_model;
  snap["strategy"] = predictor::strategy_name(strategy);
  snap["repeats"] = std::to_string(repeats);
  snap["seed"] = std::to_string(seed);
  std::string joined;
  for (const std::string& k : keywords) {
    if (!joined.empty()) joined += "; ";
    joined += k;
  }
  snap["keywords"] = joined;
  return snap;
}

bool RunManifest::stage_done(const std::string& name) const {
  return find_stage(name) != nullptr;
}

const StageRecord* RunManifest::find_stage(const std::string& name) const {
  for (const StageRecord& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

namespace {

json manifest_to_json(const RunManifest& m) {
  json j;
  j["run_id"] = m.run_id;
  j["config"] = m.config_snapshot;
  j["stages"] = json::array();
  for (const StageRecord& s : m.stages) {
    json sj;
    sj["name"] = s.name;
    sj["counts"] = s.counts;
    sj["artifacts"] = s.artifacts;
    sj["notes"] = s.notes;
    j["stages"].push_back(sj);
  }
  j["files"] = m.file_digests;
  return j;
}

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.run_id = j.value("run_id", "");
  if (j.contains("config"))
    m.config_snapshot = j["config"].get<std::map<std::string, std::string>>();
  for (const json& sj : j.value("stages", json::array())) {
    StageRecord s;
    s.name = sj.at("name").get<std::string>();
    s.counts = sj.value("counts", std::map<std::string, long>{});
    s.artifacts = sj.value("artifacts", std::vector<std::string>{});
    s.notes = sj.value("notes", std::vector<std::string>{});
    m.stages.push_back(std::move(s));
  }
  if (j.contains("files"))
    m.file_digests = j["files"].get<std::map<std::string, std::string>>();
  return m;
}

// Everything a stage needs: config, gateway, manifest under construction.
struct PipelineState {
  const PipelineConfig& config;
  Gateway gateway;
  RunManifest manifest;

  std::filesystem::path artifact(const std::string& name) const {
    return config.run_dir / name;
  }

  void persist_manifest() {
    // Re-digest every file under the run directory except the manifest itself.
    manifest.file_digests.clear();
    for (const auto& entry :
         std::filesystem::recursive_directory_iterator(config.run_dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string rel =
          std::filesystem::relative(entry.path(), config.run_dir).generic_string();
      if (rel == "manifest.json") continue;
      manifest.file_digests[rel] = file_digest(entry.path());
    }
    std::ofstream out(config.run_dir / "manifest.json");
    out << manifest_to_json(manifest).dump(2) << "\n";
  }

  void finish_stage(StageRecord record) {
    std::erase_if(manifest.stages,
                  [&](const StageRecord& s) { return s.name == record.name; });
    manifest.stages.push_back(std::move(record));
    std::sort(manifest.stages.begin(), manifest.stages.end(),
              [](const StageRecord& a, const StageRecord& b) {
                return stage_index(a.name) < stage_index(b.name);
              });
    persist_manifest();
  }
};

Gateway make_gateway(const PipelineConfig& config) {
  std::shared_ptr<Provider> provider;
  if (config.provider_kind == ProviderKind::Replay) {
    provider = std::make_shared<ReplayProvider>(ReplayProvider::from_jsonl(*config.fixtures_path));
  } else {
    provider = std::make_shared<synthetic::SyntheticProvider>(config.seed);
  }
  if (config.record_path)
    provider = std::make_shared<RecordingProvider>(provider, *config.record_path);

  GatewayConfig gc;
  gc.preprocessor = ProviderRole{Role::Preprocessor, config.preprocessor_model};
  gc.predictor = ProviderRole{Role::Predictor, config.predictor_model};
  gc.cache_dir = config.cache_dir;
  return Gateway(std::move(gc), provider, provider);
}

// ---- stages ---------------------------------------------------------------

void stage_ingest(PipelineState& st) {
  auto entries = corpus::load_corpus(st.config.corpus_path);
  corpus::save_corpus(entries, st.artifact("corpus.jsonl"));
  StageRecord rec{"ingest", {}, {"corpus.jsonl"}, {}};
  rec.counts["papers_in"] = static_cast<long>(entries.size());
  st.finish_stage(std::move(rec));
}

void stage_verify(PipelineState& st) {
  auto entries = corpus::load_corpus(st.artifact("corpus.jsonl"));
  StageRecord rec{"verify", {}, {"verified.jsonl"}, {}};
  long kw_passed = 0;
  long accepted = 0;
  long truncations = 0;
  for (corpus::PaperEntry& e : entries) {
    if (e.status != corpus::Status::Candidate) continue;
    if (!corpus::keyword_filter(e, st.config.keywords)) {
      e.status = corpus::Status::Rejected;
      continue;
    }
    e.status = corpus::Status::KeywordPassed;
    ++kw_passed;
    const auto stage1 = corpus::verify_title_abstract(e, st.gateway);
    if (stage1.unparseable) {
      rec.notes.push_back("manual review: unparseable stage-1 answer for " + e.id);
      continue;
    }
    if (e.status != corpus::Status::Stage1Passed) continue;
    const auto stage2 = corpus::verify_full_text(e, st.gateway);
    if (stage2.truncated) {
      ++truncations;
      rec.notes.push_back("full text truncated for " + e.id);
    }
    if (stage2.unparseable) {
      rec.notes.push_back("manual review: unparseable stage-2 answer for " + e.id);
      continue;
    }
    if (e.status != corpus::Status::Stage2Passed) continue;
    // The three manual screenings are interactive in the original workflow;
    // the automated pipeline records a default Accept here.
    e = corpus::record_manual_check(std::move(e), corpus::ManualDecision::Accept,
                                    "automated pipeline default");
    ++accepted;
  }
  corpus::save_corpus(entries, st.artifact("verified.jsonl"));
  rec.counts["papers_in"] = static_cast<long>(entries.size());
  rec.counts["keyword_passed"] = kw_passed;
  rec.counts["papers_accepted"] = accepted;
  rec.counts["truncations"] = truncations;
  st.finish_stage(std::move(rec));
}

void stage_extract(PipelineState& st) {
  auto entries = corpus::load_corpus(st.artifact("verified.jsonl"));
  std::vector<json> records;
  long n_conclusions = 0;
  long n_dequantified = 0;
  StageRecord rec{"extract", {}, {"extracted.jsonl"}, {}};
  for (const corpus::PaperEntry& e : entries) {
    if (e.status != corpus::Status::ManualAccepted) continue;
    ChatSession session = st.gateway.open_session(Role::Preprocessor);
    const SendResult response =
        st.gateway.send(session, extraction::build_extraction_prompt(e.full_text));
    if (response.refused) throw ProviderError("extraction refused for paper " + e.id);
    const auto parsed = extraction::parse_extraction_response(response.text);
    auto conclusions = extraction::split_conclusions(parsed.raw_conclusions, e.id, st.gateway);
    for (extraction::Conclusion& c : conclusions) {
      c = extraction::dequantify(std::move(c), st.gateway);
      if (c.dequantified) ++n_dequantified;
    }
    const auto overlap = extraction::settings_conclusion_overlap(parsed.settings, conclusions);
    for (const std::string& id : overlap)
      rec.notes.push_back("screening: conclusion " + id + " appears inside settings");

    json j;
    j["paper_id"] = e.id;
    j["year"] = e.year;
    j["settings"] = settings_to_json(parsed.settings);
    j["conclusions"] = json::array();
    for (const extraction::Conclusion& c : conclusions) {
      j["conclusions"].push_back(
          {{"id", c.id}, {"text", c.text}, {"dequantified", c.dequantified}});
      ++n_conclusions;
    }
    records.push_back(std::move(j));
  }
  write_jsonl(st.artifact("extracted.jsonl"), records);
  rec.counts["papers"] = static_cast<long>(records.size());
  rec.counts["conclusions"] = n_conclusions;
  rec.counts["dequantified"] = n_dequantified;
  st.finish_stage(std::move(rec));
}

void stage_variants(PipelineState& st) {
  const auto papers = read_jsonl(st.artifact("extracted.jsonl"));
  std::vector<json> records;
  StageRecord rec{"variants", {}, {"triples.jsonl"}, {}};
  long quarantined = 0;
  for (const json& paper : papers) {
    for (const json& cj : paper.at("conclusions")) {
      const std::string id = cj.at("id").get<std::string>();
      const std::string original = cj.at("text").get<std::string>();
      try {
        const auto triple = variantgen::generate_triple(id, original, st.gateway);
        records.push_back({{"conclusion_id", triple.conclusion_id},
                           {"original", triple.original},
                           {"reversed", triple.reversed},
                           {"unrelated", triple.unrelated}});
      } catch (const ParseError& ex) {
        ++quarantined;
        rec.notes.push_back(std::string("quarantined: ") + ex.what());
      }
    }
  }
  write_jsonl(st.artifact("triples.jsonl"), records);
  rec.counts["triples"] = static_cast<long>(records.size());
  rec.counts["quarantined"] = quarantined;
  st.finish_stage(std::move(rec));
}

void stage_predict(PipelineState& st) {
  const auto papers = read_jsonl(st.artifact("extracted.jsonl"));
  const auto triples = read_jsonl(st.artifact("triples.jsonl"));
  std::map<std::string, variantgen::ConclusionTriple> triple_by_id;
  for (const json& t : triples) {
    variantgen::ConclusionTriple triple;
    triple.conclusion_id = t.at("conclusion_id").get<std::string>();
    triple.original = t.at("original").get<std::string>();
    triple.reversed = t.at("reversed").get<std::string>();
    triple.unrelated = t.at("unrelated").get<std::string>();
    triple_by_id[triple.conclusion_id] = triple;
  }

  predictor::RunConfig rc;
  rc.strategy = st.config.strategy;
  rc.repeats = st.config.repeats;
  rc.model_id = st.config.predictor_model;
  rc.rng_seed = st.config.seed;

  std::mt19937_64 rng(rc.rng_seed);
  std::vector<json> attempt_records;
  std::vector<json> result_records;
  long aborted = 0;
  StageRecord rec{"predict", {}, {"attempts.jsonl", "conclusion_results.jsonl"}, {}};

  for (const json& paper : papers) {
    const auto settings = settings_from_json(paper.at("settings"));
    const std::string paper_id = paper.at("paper_id").get<std::string>();
    for (const json& cj : paper.at("conclusions")) {
      const std::string id = cj.at("id").get<std::string>();
      auto it = triple_by_id.find(id);
      if (it == triple_by_id.end()) continue;  // quarantined at the variants stage
      const auto result =
          predictor::run_conclusion(settings, it->second, rc, st.gateway, rng);
      if (result.aborted) ++aborted;
      for (const predictor::AttemptRecord& a : result.attempts) {
        attempt_records.push_back({{"conclusion_id", a.conclusion_id},
                                   {"attempt_index", a.attempt_index},
                                   {"permutation", a.permutation},
                                   {"raw_response", a.raw_response},
                                   {"parsed_choice", predictor::choice_name(a.parsed_choice)},
                                   {"correct", a.correct}});
      }
      result_records.push_back({{"conclusion_id", id},
                                {"paper_id", paper_id},
                                {"n_attempts", result.attempts.size()},
                                {"accuracy", result.accuracy},
                                {"aborted", result.aborted}});
    }
  }
  write_jsonl(st.artifact("attempts.jsonl"), attempt_records);
  write_jsonl(st.artifact("conclusion_results.jsonl"), result_records);
  rec.counts["conclusions"] = static_cast<long>(result_records.size());
  rec.counts["attempts"] = static_cast<long>(attempt_records.size());
  rec.counts["aborted_conclusions"] = aborted;
  st.finish_stage(std::move(rec));
}

void stage_annotate(PipelineState& st) {
  const auto papers = read_jsonl(st.artifact("extracted.jsonl"));
  const auto triples = read_jsonl(st.artifact("triples.jsonl"));
  std::map<std::string, bool> predicted;
  for (const json& t : triples) predicted[t.at("conclusion_id").get<std::string>()] = true;

  std::vector<json> records;
  long refused = 0;
  for (const json& paper : papers) {
    const auto settings = settings_from_json(paper.at("settings"));
    for (const json& cj : paper.at("conclusions")) {
      extraction::Conclusion c;
      c.id = cj.at("id").get<std::string>();
      if (!predicted.count(c.id)) continue;
      c.text = cj.at("text").get<std::string>();
      c.paper_id = paper.at("paper_id").get<std::string>();
      const auto record = annotator::annotate(c, settings, st.gateway);

      json j;
      j["conclusion_id"] = record.conclusion_id;
      if (record.status == annotator::AnnotationStatus::Labeled) {
        j["status"] = "Labeled";
        j["topics"] = record.topics.components;
        j["sentiment"] = record.sentiment;
        j["gender_favorability"] = record.gender_favorability;
      } else {
        j["status"] = "Refused";
        j["reason"] = record.refusal_reason;
        ++refused;
      }
      records.push_back(std::move(j));
    }
  }
  write_jsonl(st.artifact("annotations.jsonl"), records);
  StageRecord rec{"annotate", {}, {"annotations.jsonl"}, {}};
  rec.counts["conclusions"] = static_cast<long>(records.size());
  rec.counts["labeled"] = static_cast<long>(records.size()) - refused;
  rec.counts["refused"] = refused;
  st.finish_stage(std::move(rec));
}

void stage_analyze(PipelineState& st) {
  const auto results = read_jsonl(st.artifact("conclusion_results.jsonl"));
  const auto annotations_json = read_jsonl(st.artifact("annotations.jsonl"));
  const auto corpus_entries = corpus::load_corpus(st.artifact("verified.jsonl"));
  const auto papers = read_jsonl(st.artifact("extracted.jsonl"));

  std::map<std::string, double> accuracy_by_conclusion;
  std::map<std::string, std::vector<double>> accuracies_by_paper;
  std::vector<double> conclusion_accuracies;
  for (const json& r : results) {
    const double a = r.at("accuracy").get<double>();
    accuracy_by_conclusion[r.at("conclusion_id").get<std::string>()] = a;
    accuracies_by_paper[r.at("paper_id").get<std::string>()].push_back(a);
    conclusion_accuracies.push_back(a);
  }

  const auto summary = stats::summarize_run(
      accuracies_by_paper, predictor::strategy_name(st.config.strategy),
      st.config.predictor_model, st.config.repeats);

  std::vector<double> paper_accuracies;
  std::map<std::string, int> year_by_paper;
  for (const json& p : papers)
    year_by_paper[p.at("paper_id").get<std::string>()] = p.at("year").get<int>();
  (void)corpus_entries;
  std::vector<std::pair<int, double>> year_rows;
  for (const auto& [paper_id, accs] : accuracies_by_paper) {
    const double pa = stats::paper_accuracy(accs);
    paper_accuracies.push_back(pa);
    year_rows.emplace_back(year_by_paper.at(paper_id), pa);
  }

  const auto conclusion_hist = stats::histogram(conclusion_accuracies);
  const auto paper_hist = stats::histogram(paper_accuracies);
  const auto by_year = stats::accuracy_by_year(year_rows);

  std::vector<annotator::AnnotationRecord> annotations;
  for (const json& aj : annotations_json) {
    annotator::AnnotationRecord rec;
    rec.conclusion_id = aj.at("conclusion_id").get<std::string>();
    if (aj.at("status").get<std::string>() == "Labeled") {
      rec.status = annotator::AnnotationStatus::Labeled;
      rec.topics.components = aj.at("topics").get<std::array<double, 7>>();
      rec.sentiment = aj.at("sentiment").get<int>();
      rec.gender_favorability = aj.at("gender_favorability").get<int>();
    }
    annotations.push_back(std::move(rec));
  }

  StageRecord rec{"analyze", {}, {"analysis.json"}, {}};
  const auto design = regression::build_design_matrix(annotations, accuracy_by_conclusion);
  std::optional<regression::OlsResult> ols;
  try {
    ols = regression::ols_fit(design);
  } catch (const RankDeficiencyError& ex) {
    // Structural collinearity (topic fractions summing to one against the
    // constant) is expected on fully-renormalized labels; fall back to the
    // minimum-norm fit and surface the condition number in the manifest.
    rec.notes.push_back(std::string("strict OLS refused: ") + ex.what());
    ols = regression::ols_fit_minimum_norm(design);
    rec.notes.push_back("regression fitted through the minimum-norm route; condition number " +
                        fmt(ols->condition_number, 3));
  }

  json j;
  j["summary"] = {{"strategy", summary.strategy},
                  {"model_id", summary.model_id},
                  {"repeats", summary.repeats},
                  {"mean_conclusion_accuracy", summary.mean_conclusion_accuracy},
                  {"mean_paper_accuracy", summary.mean_paper_accuracy},
                  {"n_conclusions", summary.n_conclusions},
                  {"n_papers", summary.n_papers}};
  j["histogram_conclusion"] = conclusion_hist.counts;
  j["histogram_paper"] = paper_hist.counts;
  if (conclusion_accuracies.size() >= 3) {
    try {
      j["skewness_conclusion"] = stats::skewness(conclusion_accuracies);
    } catch (const PreconditionError&) {
      j["skewness_conclusion"] = nullptr;  // degenerate (zero variance)
    }
  }
  j["by_year"] = json::array();
  for (const auto& row : by_year)
    j["by_year"].push_back(
        {{"year", row.year}, {"mean_paper_accuracy", row.mean_paper_accuracy},
         {"n_papers", row.n_papers}});

  json reg;
  reg["n"] = ols->n;
  reg["k"] = ols->k;
  reg["r2"] = ols->r2;
  reg["adj_r2"] = ols->adj_r2;
  reg["f_stat"] = ols->f_stat;
  reg["f_pvalue"] = ols->f_pvalue;
  reg["condition_number"] = ols->condition_number;
  reg["minimum_norm"] = ols->minimum_norm;
  reg["excluded_refused"] = design.excluded_refused;
  reg["coefficients"] = json::array();
  for (std::size_t i = 0; i < regression::kRegressors; ++i) {
    reg["coefficients"].push_back({{"name", regression::regressor_names()[i]},
                                   {"coefficient", ols->coefficients[i]},
                                   {"standard_error", ols->standard_errors[i]},
                                   {"t", ols->t_stats[i]},
                                   {"p", ols->p_values[i]}});
  }
  j["regression"] = std::move(reg);

  std::ofstream out(st.artifact("analysis.json"));
  out << j.dump(2) << "\n";
  rec.counts["conclusions"] = static_cast<long>(conclusion_accuracies.size());
  rec.counts["regression_n"] = static_cast<long>(ols->n);
  rec.counts["regression_excluded_refused"] = design.excluded_refused;
  st.finish_stage(std::move(rec));
}

void stage_report(PipelineState& st) {
  std::ifstream in(st.artifact("analysis.json"));
  if (!in) throw ConfigError("analysis artifact missing; run the analyze stage first");
  const json analysis = json::parse(in);

  const std::filesystem::path reports = st.config.run_dir / "reports";
  std::filesystem::create_directories(reports);
  StageRecord rec{"report", {}, {}, {}};
  const auto add = [&](const std::string& name) {
    rec.artifacts.push_back("reports/" + name);
  };

  {
    std::ofstream out(reports / "summary.csv");
    const json& s = analysis.at("summary");
    out << "Model,Strategy,Repeats,Conclusion Acc.,Paper Acc.,N Conclusions,N Papers\n";
    out << s.at("model_id").get<std::string>() << ","
        << s.at("strategy").get<std::string>() << "," << s.at("repeats").get<int>() << ","
        << fmt(s.at("mean_conclusion_accuracy").get<double>() * 100.0, 1) << "%,"
        << fmt(s.at("mean_paper_accuracy").get<double>() * 100.0, 1) << "%,"
        << s.at("n_conclusions").get<int>() << "," << s.at("n_papers").get<int>() << "\n";
    add("summary.csv");
  }

  for (const std::string which : {"conclusion", "paper"}) {
    std::ofstream out(reports / ("histogram_" + which + ".csv"));
    out << "Bin Low,Bin High,Count\n";
    const auto counts = analysis.at("histogram_" + which).get<std::array<long, 10>>();
    for (int b = 0; b < 10; ++b)
      out << fmt(b / 10.0, 1) << "," << fmt((b + 1) / 10.0, 1) << ","
          << counts[static_cast<std::size_t>(b)] << "\n";
    add("histogram_" + which + ".csv");
  }

  {
    std::ofstream out(reports / "accuracy_by_year.csv");
    out << "Year,Paper Accuracy,N Papers\n";
    for (const json& row : analysis.at("by_year"))
      out << row.at("year").get<int>() << ","
          << fmt(row.at("mean_paper_accuracy").get<double>() * 100.0, 1) << "%,"
          << row.at("n_papers").get<int>() << "\n";
    add("accuracy_by_year.csv");
  }

  {
    std::ofstream out(reports / "regression.csv");
    const json& reg = analysis.at("regression");
    out << "Variable,Coefficient,Std. Error,t,P>|t|,Significance\n";
    for (const json& c : reg.at("coefficients")) {
      const double p = c.at("p").get<double>();
      out << c.at("name").get<std::string>() << "," << fmt(c.at("coefficient").get<double>())
          << "," << fmt(c.at("standard_error").get<double>()) << ","
          << fmt(c.at("t").get<double>()) << "," << fmt(p, 4) << ","
          << regression::significance_stars(p) << "\n";
    }
    out << "R^2," << fmt(reg.at("r2").get<double>(), 4) << ",,,,\n";
    out << "Adj. R^2," << fmt(reg.at("adj_r2").get<double>(), 4) << ",,,,\n";
    out << "F-statistic," << fmt(reg.at("f_stat").get<double>(), 4) << ",,,,\n";
    out << "Prob (F-statistic)," << fmt(reg.at("f_pvalue").get<double>(), 4) << ",,,,\n";
    out << "Observations," << reg.at("n").get<long>() << ",,,,\n";
    add("regression.csv");
  }

  {
    std::ofstream out(reports / "report.md");
    const json& s = analysis.at("summary");
    out << "# Run report\n\n";
    out << "- Model: " << s.at("model_id").get<std::string>() << "\n";
    out << "- Strategy: " << s.at("strategy").get<std::string>() << "\n";
    out << "- Repeats: " << s.at("repeats").get<int>() << "\n";
    out << "- Mean conclusion accuracy: "
        << fmt(s.at("mean_conclusion_accuracy").get<double>() * 100.0, 1) << "%\n";
    out << "- Mean paper accuracy: "
        << fmt(s.at("mean_paper_accuracy").get<double>() * 100.0, 1) << "%\n";
    out << "- Conclusions: " << s.at("n_conclusions").get<int>()
        << ", papers: " << s.at("n_papers").get<int>() << "\n";
    if (analysis.contains("skewness_conclusion") && !analysis["skewness_conclusion"].is_null())
      out << "- Conclusion accuracy skewness: "
          << fmt(analysis["skewness_conclusion"].get<double>(), 4) << "\n";
    const json& reg = analysis.at("regression");
    out << "\n## Regression\n\n";
    out << "- Observations: " << reg.at("n").get<long>() << " (refused excluded: "
        << reg.at("excluded_refused").get<int>() << ")\n";
    out << "- R^2: " << fmt(reg.at("r2").get<double>(), 4)
        << ", Adj. R^2: " << fmt(reg.at("adj_r2").get<double>(), 4) << "\n";
    out << "- F: " << fmt(reg.at("f_stat").get<double>(), 4)
        << ", Prob(F): " << fmt(reg.at("f_pvalue").get<double>(), 4) << "\n";
    if (reg.at("minimum_norm").get<bool>())
      out << "- Note: design matrix structurally collinear; minimum-norm fit, condition number "
          << fmt(reg.at("condition_number").get<double>(), 3) << "\n";
    out << "\nTables: summary.csv, regression.csv, histogram_conclusion.csv, "
           "histogram_paper.csv, accuracy_by_year.csv\n";
    add("report.md");
  }

  rec.counts["report_files"] = static_cast<long>(rec.artifacts.size());
  st.finish_stage(std::move(rec));
}

}  // namespace

RunManifest load_manifest(const std::filesystem::path& run_dir) {
  std::ifstream in(run_dir / "manifest.json");
  if (!in) throw ConfigError("no manifest under " + run_dir.string());
  return manifest_from_json(json::parse(in));
}

RunManifest run_pipeline(const PipelineConfig& config, const std::string& first_stage,
                         const std::string& last_stage) {
  config.validate();
  const int first = stage_index(first_stage);
  const int last = stage_index(last_stage);
  if (first > last) throw ConfigError("stage range is empty");

  std::filesystem::create_directories(config.run_dir);

  PipelineState st{config, make_gateway(config), {}};
  if (config.resume && std::filesystem::exists(config.run_dir / "manifest.json")) {
    st.manifest = load_manifest(config.run_dir);
  }
  {
    Fnv1a64 h;
    for (const auto& [k, v] : config.snapshot()) {
      h.update_framed(k);
      h.update_framed(v);
    }
    st.manifest.run_id = h.hex();
    st.manifest.config_snapshot = config.snapshot();
  }

  using StageFn = void (*)(PipelineState&);
  constexpr std::array<StageFn, 8> kStages = {stage_ingest,  stage_verify,  stage_extract,
                                              stage_variants, stage_predict, stage_annotate,
                                              stage_analyze, stage_report};
  for (int i = first; i <= last; ++i) {
    const std::string name = kStageNames[static_cast<std::size_t>(i)];
    if (config.resume && st.manifest.stage_done(name)) continue;
    kStages[static_cast<std::size_t>(i)](st);
  }
  st.persist_manifest();
  return st.manifest;
}

}  // namespace fieldsim::pipeline
