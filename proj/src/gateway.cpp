#include "fieldsim/gateway.hpp"

#include <cmath>
#include <fstream>

#include "fieldsim/digest.hpp"
#include "fieldsim/errors.hpp"
#include "json.hpp"

namespace fieldsim {

using nlohmann::json;

std::string role_name(Role role) {
  return role == Role::Preprocessor ? "preprocessor" : "predictor";
}

std::string cache_key(const ProviderRole& role, const std::vector<Turn>& transcript,
                      int attempt_index) {
  Fnv1a64 h;
  h.update_framed(role_name(role.role));
  h.update_framed(role.model_id);
  for (const Turn& turn : transcript) {
    h.update_framed(turn.speaker == Speaker::User ? "user" : "model");
    h.update_framed(turn.text);
  }
  h.update_framed(std::to_string(attempt_index));
  return h.hex();
}

ReplayProvider ReplayProvider::from_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("fixture file not found: " + path.string());
  std::map<std::string, Exchange> fixture;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("key") || !j.contains("response"))
      throw ParseError("malformed fixture record at " + path.string() + ":" +
                       std::to_string(lineno));
    Exchange ex;
    ex.response = j["response"].get<std::string>();
    ex.refused = j.value("refused", false);
    fixture[j["key"].get<std::string>()] = ex;
  }
  return ReplayProvider(std::move(fixture));
}

SendResult ReplayProvider::complete(const ChatSession& session, int attempt_index) {
  const std::string key = cache_key(session.role, session.transcript, attempt_index);
  auto it = fixture_.find(key);
  if (it == fixture_.end()) throw FixtureMissError(key);
  SendResult out;
  out.text = it->second.response;
  out.refused = it->second.refused;
  if (out.refused) out.refusal_reason = "recorded refusal";
  return out;
}

RecordingProvider::RecordingProvider(std::shared_ptr<Provider> inner,
                                     std::filesystem::path fixture_path)
    : inner_(std::move(inner)), path_(std::move(fixture_path)) {}

SendResult RecordingProvider::complete(const ChatSession& session, int attempt_index) {
  const SendResult result = inner_->complete(session, attempt_index);
  const std::string key = cache_key(session.role, session.transcript, attempt_index);
  if (!seen_.count(key)) {
    seen_[key] = true;
    json j;
    j["key"] = key;
    j["response"] = result.text;
    if (result.refused) j["refused"] = true;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw ConfigError("cannot open fixture for recording: " + path_.string());
    out << j.dump() << "\n";
  }
  return result;
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<Provider> preprocessor,
                 std::shared_ptr<Provider> predictor)
    : config_(std::move(config)), preprocessor_(std::move(preprocessor)),
      predictor_(std::move(predictor)), jitter_state_(config_.retry.jitter_seed * 2 + 1) {
  if (config_.preprocessor && config_.predictor &&
      config_.preprocessor->model_id == config_.predictor->model_id) {
    throw ConfigError("preprocessor and predictor must use distinct model ids (got '" +
                      config_.predictor->model_id + "' for both)");
  }
  if (config_.cache_dir) std::filesystem::create_directories(*config_.cache_dir);
}

ChatSession Gateway::open_session(Role role) const {
  const auto& configured =
      role == Role::Preprocessor ? config_.preprocessor : config_.predictor;
  if (!configured) throw ConfigError("role not configured: " + role_name(role));
  return ChatSession{*configured, {}};
}

std::shared_ptr<Provider>& Gateway::provider_for(Role role) {
  auto& provider = role == Role::Preprocessor ? preprocessor_ : predictor_;
  if (!provider) throw ConfigError("no provider bound for role: " + role_name(role));
  return provider;
}

SendResult Gateway::send(ChatSession& session, const std::string& message, int attempt_index) {
  if (message.empty()) throw PreconditionError("send: message must be non-empty");
  if (attempt_index < 0) throw PreconditionError("send: attempt_index must be >= 0");
  if (!session.transcript.empty() && session.transcript.back().speaker == Speaker::User)
    throw PreconditionError("send: transcript must alternate user/model");

  session.transcript.push_back({Speaker::User, message});
  const std::string key = cache_key(session.role, session.transcript, attempt_index);

  std::filesystem::path cache_file;
  if (config_.cache_dir) {
    cache_file = *config_.cache_dir / (key + ".json");
    std::ifstream in(cache_file);
    if (in) {
      json j = json::parse(in);
      SendResult cached;
      cached.text = j["response"].get<std::string>();
      cached.refused = j.value("refused", false);
      if (cached.refused) cached.refusal_reason = j.value("reason", "cached refusal");
      session.transcript.push_back({Speaker::Model, cached.text});
      return cached;
    }
  }

  SendResult result;
  const RetryPolicy& retry = config_.retry;
  std::string last_failure;
  bool done = false;
  for (int attempt = 0; attempt <= retry.max_retries; ++attempt) {
    try {
      result = provider_for(session.role.role)->complete(session, attempt_index);
      ++provider_calls_;
      done = true;
      break;
    } catch (const TransientFailure& failure) {
      last_failure = failure.detail;
      if (attempt == retry.max_retries) break;
      // xorshift64* jitter stream, deterministic per gateway instance
      jitter_state_ ^= jitter_state_ >> 12;
      jitter_state_ ^= jitter_state_ << 25;
      jitter_state_ ^= jitter_state_ >> 27;
      const double unit =
          static_cast<double>(jitter_state_ * 0x2545F4914F6CDD1DULL >> 11) / 9007199254740992.0;
      const double ceiling =
          retry.base_delay_seconds * std::pow(retry.multiplier, static_cast<double>(attempt));
      if (config_.sleeper) config_.sleeper(unit * ceiling);
    }
  }
  if (!done) {
    session.transcript.pop_back();
    throw ProviderError("provider failed after " + std::to_string(retry.max_retries) +
                        " retries: " + last_failure);
  }

  if (config_.cache_dir) {
    json j;
    j["response"] = result.text;
    if (result.refused) {
      j["refused"] = true;
      j["reason"] = result.refusal_reason;
    }
    std::ofstream out(cache_file);
    out << j.dump() << "\n";
  }

  session.transcript.push_back({Speaker::Model, result.text});
  return result;
}

}  // namespace fieldsim
