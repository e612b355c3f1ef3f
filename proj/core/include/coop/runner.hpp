#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "coop/agent.hpp"
#include "coop/llm.hpp"
#include "coop/metrics.hpp"
#include "coop/prompts.hpp"
#include "coop/task.hpp"
#include "coop/world.hpp"
#include "json.hpp"

namespace coop {

enum class Mode { Collaborative, Single };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct ModelRef {
  std::string name;   // server model tag, e.g. "gemma3:4b"
  std::string label;  // results column header, e.g. "gemma3"
};

struct BackendConfig {
  std::string kind = "scripted";  // scripted | http | replay
  std::string base_url;           // http; COOP_LLM_URL when empty
  std::string cache_dir;          // replay
  std::string fallback;           // replay: "", "scripted" or "http"
  int timeout_s = 120;
};

std::shared_ptr<Backend> make_backend(const BackendConfig& cfg);

struct TTestPair {
  std::string combo_a;
  std::string combo_b;
};

struct RunMatrix {
  std::vector<StrategyCombo> combos;
  std::vector<ModelRef> models;
  std::vector<Mode> modes;
  std::vector<std::uint64_t> seeds;  // one per (task, variation), shared across cells
  BackendConfig backend;
  std::filesystem::path output_dir = "results";
  std::vector<TTestPair> ttest_pairs;
  std::string prompt_pack_dir;
  double temperature = 0.7;
  int max_tokens = 256;
  int max_ticks = kDefaultMaxTicks;
  int jobs = 1;
  bool allow_failed = false;
};

// The benchmark defaults: 9 combos, the four reference models, both modes,
// 10 fixed seeds, the Base vs Improved Base + Cprompt4 significance pair.
RunMatrix default_run_config();

RunMatrix parse_run_config(const nlohmann::json& j);
RunMatrix load_run_config(const std::filesystem::path& path);
nlohmann::json run_config_json(const RunMatrix& m);  // normalized form

struct EpisodeRecord {
  std::string task_id;
  std::string variation_id;
  std::uint64_t seed = 0;
  StrategyCombo combo;
  std::string model;
  std::string model_label;
  Mode mode = Mode::Collaborative;
  std::vector<DecisionTrace> decisions;
  std::vector<Event> events;
  std::vector<Message> dialogue;
  EpisodeMetrics metrics;
  bool backend_failed = false;
  std::string failure_digest;

  nlohmann::json to_json() const;
};

struct RunOptions {
  int max_ticks = kDefaultMaxTicks;
  double temperature = 0.7;
  int max_tokens = 256;
};

// One episode: builds the world (2 agents collaborative, 1 single), runs the
// perceive/remember/decide/execute loop to completion or the tick cap.
// Backend errors mark the record failed and carry the request digest.
EpisodeRecord run_episode(const TaskSpec& task, const VariationSpec& variation,
                          const StrategyCombo& combo, const std::string& model, Mode mode,
                          std::uint64_t seed, Backend& backend, const PromptPack& pack,
                          const RunOptions& options);

struct TTestReport {
  std::string combo_a;
  std::string combo_b;
  std::string model_label;
  WelchResult result;
};

struct ResultsTable {
  std::vector<std::string> combo_names;
  std::vector<std::string> model_labels;
  std::map<std::string, CellStats> cells;  // key: cell_key()
  std::map<std::string, double> eff1;      // key: pair_key()
  std::map<std::string, double> eff2;
  std::vector<TTestReport> ttests;
  std::vector<EpisodeRecord> records;
};

std::string cell_key(const std::string& combo, const std::string& model, Mode mode);
std::string pair_key(const std::string& combo, const std::string& model);

ResultsTable run_matrix(const RunMatrix& m);

// steps.csv / turns.csv / efficiency1.csv / efficiency2.csv + results.json.
void export_tables(const ResultsTable& t, const std::filesystem::path& dir);
// Regenerates the four CSVs from an existing results.json.
void export_csv_from_json(const nlohmann::json& results, const std::filesystem::path& dir);
// Dialogue logs in the format the transcript tools read.
void export_dialogues(const ResultsTable& t, const std::filesystem::path& dir);

nlohmann::json results_to_json(const ResultsTable& t);

// Fixed-point rendering with truncation toward zero (the convention the
// reference tables use; 0.2267 renders as "0.22").
std::string format_fixed_trunc(double value, int decimals);

}  // namespace coop
