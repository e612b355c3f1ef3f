#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace coop {

struct LlmRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.7;
  int max_tokens = 256;
  std::vector<std::string> stop;
};

struct LlmResponse {
  std::string text;
  std::string model;
  double latency_ms = 0.0;
  bool from_cache = false;
};

enum class BackendErrorKind {
  Unreachable,
  HttpStatus,
  MalformedReply,
  CacheMiss,
  BadPrompt,
};

class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrorKind kind, std::string digest, const std::string& what)
      : std::runtime_error(what), kind_(kind), digest_(std::move(digest)) {}
  BackendErrorKind kind() const { return kind_; }
  const std::string& request_digest() const { return digest_; }

 private:
  BackendErrorKind kind_;
  std::string digest_;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual LlmResponse generate(const LlmRequest& req) = 0;
  virtual std::string describe() const = 0;
};

// Stable digest over (model, prompt, temperature, max_tokens, stop).
// Temperature is pinned to 0 in the key so replays of a recorded run hit
// regardless of the sampling temperature used live.
std::string cache_key(const LlmRequest& req);

// Deterministic greedy stand-in for a model; a pure function of the prompt.
std::string scripted_choice(const std::string& prompt);

class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::string policy = "greedy");
  LlmResponse generate(const LlmRequest& req) override;
  std::string describe() const override;

 private:
  std::string policy_;
};

// Ollama-style non-streaming HTTP client (POST {base}/api/generate).
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(std::string base_url,
                       std::chrono::seconds timeout = std::chrono::seconds(120));
  LlmResponse generate(const LlmRequest& req) override;
  std::string describe() const override;

 private:
  std::string base_url_;
  std::chrono::seconds timeout_;
};

// Cache of <digest>.json files. Hits replay the stored text; misses go to
// the fallback (recording the result atomically) or raise CacheMiss.
class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(std::filesystem::path cache_dir,
                         std::shared_ptr<Backend> fallback = nullptr);
  LlmResponse generate(const LlmRequest& req) override;
  std::string describe() const override;

 private:
  std::filesystem::path cache_dir_;
  std::shared_ptr<Backend> fallback_;
};

}  // namespace coop
