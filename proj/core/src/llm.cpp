#include "coop/llm.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "coop/sha256.hpp"
#include "httplib.h"
#include "json.hpp"

namespace coop {

std::string cache_key(const LlmRequest& req) {
  nlohmann::json canonical{{"model", req.model},
                           {"prompt", req.prompt},
                           {"temperature", 0.0},
                           {"max_tokens", req.max_tokens},
                           {"stop", req.stop}};
  return sha256_hex(canonical.dump());
}

namespace {

constexpr const char* kCommStatusLine = "Status: proceeding with my current target.";

struct Option {
  std::string label;
  std::string display;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool parse_option_line(const std::string& line, Option& out) {
  std::size_t i = 0;
  while (i < line.size() && line[i] >= 'A' && line[i] <= 'Z') ++i;
  if (i == 0 || i + 1 >= line.size() || line[i] != '.' || line[i + 1] != ' ') return false;
  out.label = line.substr(0, i);
  out.display = line.substr(i + 2);
  return true;
}

// Lines of the section that starts right after a line equal to `header`,
// ending at the first blank line.
std::vector<std::string> section_lines(const std::vector<std::string>& lines,
                                       const std::string& header) {
  std::vector<std::string> out;
  auto it = std::find(lines.begin(), lines.end(), header);
  if (it == lines.end()) return out;
  for (++it; it != lines.end() && !it->empty(); ++it) out.push_back(*it);
  return out;
}

std::string second_word_after(const std::string& text, const std::string& prefix) {
  std::string rest = text.substr(prefix.size());
  auto space = rest.find(' ');
  return space == std::string::npos ? rest : rest.substr(0, space);
}

}  // namespace

std::string scripted_choice(const std::string& prompt) {
  auto lines = split_lines(prompt);

  auto option_lines = section_lines(lines, "Available actions:");
  if (option_lines.empty()) {
    // Communication prompts carry no lettered list.
    if (std::find(lines.begin(), lines.end(), "Available actions:") == lines.end())
      return kCommStatusLine;
    throw BackendError(BackendErrorKind::BadPrompt, "",
                       "unparseable available-actions section");
  }

  std::vector<Option> options;
  for (const auto& line : option_lines) {
    Option o;
    if (parse_option_line(line, o)) options.push_back(o);
  }
  if (options.empty())
    throw BackendError(BackendErrorKind::BadPrompt, "",
                       "unparseable available-actions section");

  // Greedy policy: deposit, else grab the smallest object id, else explore
  // the first room not yet explored per the action history, else wait.
  for (const auto& o : options)
    if (o.display.rfind("go put", 0) == 0) return o.label;

  const Option* best_grab = nullptr;
  std::string best_id;
  for (const auto& o : options) {
    if (o.display.rfind("go grab ", 0) != 0) continue;
    std::string id = second_word_after(o.display, "go grab ");
    if (!best_grab || id < best_id) {
      best_grab = &o;
      best_id = id;
    }
  }
  if (best_grab) return best_grab->label;

  std::set<std::string> explored;
  for (const auto& line : section_lines(lines, "Actions taken:")) {
    if (line.rfind("explore the ", 0) == 0)
      explored.insert(second_word_after(line, "explore the "));
  }
  for (const auto& o : options) {
    if (o.display.rfind("explore the ", 0) != 0) continue;
    if (!explored.count(second_word_after(o.display, "explore the "))) return o.label;
  }

  for (const auto& o : options)
    if (o.display == "wait") return o.label;
  return options.front().label;
}

ScriptedBackend::ScriptedBackend(std::string policy) : policy_(std::move(policy)) {
  if (policy_ != "greedy")
    throw BackendError(BackendErrorKind::BadPrompt, "", "unknown scripted policy: " + policy_);
}

LlmResponse ScriptedBackend::generate(const LlmRequest& req) {
  if (req.prompt.empty())
    throw BackendError(BackendErrorKind::BadPrompt, cache_key(req), "empty prompt");
  try {
    return {scripted_choice(req.prompt), req.model, 0.0, false};
  } catch (const BackendError& e) {
    throw BackendError(e.kind(), cache_key(req), e.what());
  }
}

std::string ScriptedBackend::describe() const { return "scripted(" + policy_ + ")"; }

HttpBackend::HttpBackend(std::string base_url, std::chrono::seconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {}

LlmResponse HttpBackend::generate(const LlmRequest& req) {
  std::string digest = cache_key(req);
  if (req.prompt.empty())
    throw BackendError(BackendErrorKind::BadPrompt, digest, "empty prompt");

  nlohmann::json options{{"temperature", req.temperature}, {"num_predict", req.max_tokens}};
  if (!req.stop.empty()) options["stop"] = req.stop;
  nlohmann::json body{
      {"model", req.model}, {"prompt", req.prompt}, {"stream", false}, {"options", options}};

  httplib::Client client(base_url_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);

  auto started = std::chrono::steady_clock::now();
  auto res = client.Post("/api/generate", body.dump(), "application/json");
  auto elapsed = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - started)
                     .count();

  if (!res)
    throw BackendError(BackendErrorKind::Unreachable, digest,
                       "model server unreachable at " + base_url_ + " (" +
                           httplib::to_string(res.error()) + ")");
  if (res->status / 100 != 2)
    throw BackendError(BackendErrorKind::HttpStatus, digest,
                       "model server returned HTTP " + std::to_string(res->status) +
                           " from " + base_url_);

  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("response") || !reply["response"].is_string())
    throw BackendError(BackendErrorKind::MalformedReply, digest,
                       "malformed server reply (missing 'response' string)");

  return {reply["response"].get<std::string>(), req.model, elapsed, false};
}

std::string HttpBackend::describe() const { return "http(" + base_url_ + ")"; }

ReplayBackend::ReplayBackend(std::filesystem::path cache_dir, std::shared_ptr<Backend> fallback)
    : cache_dir_(std::move(cache_dir)), fallback_(std::move(fallback)) {}

LlmResponse ReplayBackend::generate(const LlmRequest& req) {
  std::string digest = cache_key(req);
  auto path = cache_dir_ / (digest + ".json");

  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    nlohmann::json entry = nlohmann::json::parse(in, nullptr, false);
    if (entry.is_discarded() || !entry.contains("response") ||
        !entry["response"].contains("text"))
      throw BackendError(BackendErrorKind::MalformedReply, digest,
                         "corrupt cache entry: " + path.string());
    return {entry["response"]["text"].get<std::string>(),
            entry["response"].value("model", req.model), 0.0, true};
  }

  if (!fallback_)
    throw BackendError(BackendErrorKind::CacheMiss, digest,
                       "cache miss with no fallback for request digest " + digest);

  LlmResponse resp = fallback_->generate(req);

  nlohmann::json entry{
      {"request",
       {{"model", req.model},
        {"prompt", req.prompt},
        {"temperature", req.temperature},
        {"max_tokens", req.max_tokens},
        {"stop", req.stop}}},
      {"response",
       {{"text", resp.text}, {"model", resp.model}, {"latency_ms", resp.latency_ms}}},
      {"timestamp", static_cast<long long>(std::time(nullptr))}};

  std::filesystem::create_directories(cache_dir_);
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  auto tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary);
    out << entry.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);  // atomic publish

  return resp;
}

std::string ReplayBackend::describe() const {
  return "replay(" + cache_dir_.string() +
         (fallback_ ? ", fallback=" + fallback_->describe() : "") + ")";
}

}  // namespace coop
