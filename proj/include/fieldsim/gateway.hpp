#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fieldsim {

enum class Role { Preprocessor, Predictor };

std::string role_name(Role role);

struct ProviderRole {
  Role role;
  std::string model_id;
};

enum class Speaker { User, Model };

struct Turn {
  Speaker speaker;
  std::string text;
};

/// One conversation bound to a role. The transcript alternates user/model
/// starting with user; Gateway::send enforces the alternation.
struct ChatSession {
  ProviderRole role;
  std::vector<Turn> transcript;
};

/// Provider answers are either text or an explicit content-filter refusal.
/// Refusals are data, not transport errors; downstream stages decide policy.
struct SendResult {
  std::string text;
  bool refused = false;
  std::string refusal_reason;
};

/// Key covering role, model, the full transcript prefix (pending user message
/// included), and the attempt index, so repeat sampling never collapses.
std::string cache_key(const ProviderRole& role, const std::vector<Turn>& transcript,
                      int attempt_index);

/// Transient transport failure; the gateway retries these with backoff.
struct TransientFailure {
  std::string detail;
};

class Provider {
 public:
  virtual ~Provider() = default;
  /// The last transcript turn is the pending user message.
  virtual SendResult complete(const ChatSession& session, int attempt_index) = 0;
};

/// Provider driven by a callback; the workhorse for tests and offline runs.
class ScriptedProvider : public Provider {
 public:
  using Script = std::function<SendResult(const ChatSession&, int)>;
  explicit ScriptedProvider(Script script) : script_(std::move(script)) {}

  SendResult complete(const ChatSession& session, int attempt_index) override {
    ++calls_;
    return script_(session, attempt_index);
  }

  int call_count() const { return calls_; }

 private:
  Script script_;
  int calls_ = 0;
};

/// Answers exactly from a recorded fixture, keyed by cache_key.
/// A missing key raises FixtureMissError naming the key.
class ReplayProvider : public Provider {
 public:
  struct Exchange {
    std::string response;
    bool refused = false;
  };

  explicit ReplayProvider(std::map<std::string, Exchange> fixture)
      : fixture_(std::move(fixture)) {}
  static ReplayProvider from_jsonl(const std::filesystem::path& path);

  SendResult complete(const ChatSession& session, int attempt_index) override;

 private:
  std::map<std::string, Exchange> fixture_;
};

/// Wraps another provider and appends every exchange to a fixture JSONL.
class RecordingProvider : public Provider {
 public:
  RecordingProvider(std::shared_ptr<Provider> inner, std::filesystem::path fixture_path);

  SendResult complete(const ChatSession& session, int attempt_index) override;

 private:
  std::shared_ptr<Provider> inner_;
  std::filesystem::path path_;
  std::map<std::string, bool> seen_;
};

struct RetryPolicy {
  int max_retries = 5;
  double base_delay_seconds = 1.0;
  double multiplier = 2.0;
  // Full jitter: each delay is uniform in [0, base * multiplier^attempt].
  std::uint64_t jitter_seed = 0;
};

struct GatewayConfig {
  std::optional<ProviderRole> preprocessor;
  std::optional<ProviderRole> predictor;
  RetryPolicy retry;
  std::optional<std::filesystem::path> cache_dir;  // caching enabled when set
  // Injected so tests never sleep for real.
  std::function<void(double seconds)> sleeper;
};

/// Uniform entry point for all LLM traffic. Holds one provider per role,
/// consults the on-disk cache first, and retries transient failures with
/// exponential backoff and full jitter.
class Gateway {
 public:
  Gateway(GatewayConfig config, std::shared_ptr<Provider> preprocessor,
          std::shared_ptr<Provider> predictor);

  ChatSession open_session(Role role) const;
  SendResult send(ChatSession& session, const std::string& message, int attempt_index = 0);

  int provider_calls() const { return provider_calls_; }

 private:
  std::shared_ptr<Provider>& provider_for(Role role);

  GatewayConfig config_;
  std::shared_ptr<Provider> preprocessor_;
  std::shared_ptr<Provider> predictor_;
  std::uint64_t jitter_state_;
  int provider_calls_ = 0;
};

}  // namespace fieldsim
