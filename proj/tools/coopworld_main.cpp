// coopworld: experiment runner and transcript tools.
//
// Subcommands: run, validate, tables, replay.
// Exit codes: 0 success, 1 usage, 2 backend failure, 3 validation.
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "coop/runner.hpp"
#include "coop/transcript.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBackend = 2;
constexpr int kExitValidation = 3;

void print_summary(const coop::ResultsTable& table) {
  std::cout << "steps (collaborative mean per combo x model)\n";
  std::cout << "  " << std::left << std::setw(36) << "prompt";
  for (const auto& label : table.model_labels) std::cout << std::setw(12) << label;
  std::cout << "\n";
  for (const auto& combo : table.combo_names) {
    std::cout << "  " << std::setw(36) << combo;
    for (const auto& label : table.model_labels) {
      auto it = table.cells.find(coop::cell_key(combo, label, coop::Mode::Collaborative));
      if (it == table.cells.end())
        it = table.cells.find(coop::cell_key(combo, label, coop::Mode::Single));
      std::cout << std::setw(12)
                << (it == table.cells.end() ? std::string("-")
                                            : coop::format_fixed_trunc(it->second.mean_steps, 1));
    }
    std::cout << "\n";
  }
  for (const auto& report : table.ttests) {
    std::cout << "t-test [" << report.model_label << "] " << report.combo_a << " vs "
              << report.combo_b << ": t=" << coop::format_fixed_trunc(report.result.t, 3)
              << " df=" << coop::format_fixed_trunc(report.result.df, 2)
              << " p=" << coop::format_fixed_trunc(report.result.p, 4) << "\n";
  }
}

int run_command(const std::string& config_path, int jobs, const std::string& backend_override,
                bool allow_failed, const std::string& output_override) {
  coop::RunMatrix matrix;
  try {
    matrix = coop::load_run_config(config_path);
    if (jobs > 0) matrix.jobs = jobs;
    if (allow_failed) matrix.allow_failed = true;
    if (!output_override.empty()) matrix.output_dir = output_override;
    if (!backend_override.empty()) {
      coop::BackendConfig cfg;
      cfg.kind = backend_override;
      cfg.base_url = matrix.backend.base_url;
      cfg.cache_dir = matrix.backend.cache_dir;
      cfg.timeout_s = matrix.backend.timeout_s;
      matrix.backend = cfg;
    }
  } catch (const coop::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    coop::ResultsTable table = coop::run_matrix(matrix);
    coop::export_tables(table, matrix.output_dir);
    coop::export_dialogues(table, matrix.output_dir);

    std::size_t failed = 0;
    for (const auto& record : table.records) failed += record.backend_failed ? 1 : 0;

    print_summary(table);
    std::cout << "wrote " << table.records.size() << " episode records to "
              << matrix.output_dir.string() << "\n";
    if (failed > 0) {
      std::cerr << failed << " episode(s) failed on backend errors\n";
      return matrix.allow_failed ? kExitOk : kExitBackend;
    }
    return kExitOk;
  } catch (const coop::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const coop::ConfigError& e) {
    // Aggregation refusals (all-failed cells) land here.
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackend;
  }
}

int validate_command(const std::string& config_path) {
  try {
    coop::RunMatrix matrix = coop::load_run_config(config_path);
    for (const auto& task : coop::builtin_task_suite()) coop::validate_task(task);
    std::cout << "OK: " << matrix.combos.size() << " combos, " << matrix.models.size()
              << " models, " << matrix.modes.size() << " modes, " << matrix.seeds.size()
              << " seeds, backend=" << matrix.backend.kind << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  }
}

int tables_command(const std::string& results_dir) {
  auto path = std::filesystem::path(results_dir) / "results.json";
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path.string() << "\n";
    return kExitValidation;
  }
  try {
    nlohmann::json results = nlohmann::json::parse(in);
    coop::export_csv_from_json(results, results_dir);
    for (const char* name : {"steps.csv", "turns.csv", "efficiency1.csv", "efficiency2.csv"})
      std::cout << (std::filesystem::path(results_dir) / name).string() << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "cannot rebuild tables: " << e.what() << "\n";
    return kExitValidation;
  }
}

int replay_command(const std::string& log_path, int delay_ms, const std::string& speech_cmd,
                   bool follow) {
  coop::ReplayOptions options;
  options.delay_ms = delay_ms;
  options.speech_command = speech_cmd;

  try {
    if (!follow) {
      coop::ParsedLog log = coop::parse_log(log_path);
      coop::ReplayStats stats = coop::replay(log.utterances, options);
      std::cerr << stats.printed << " utterance(s), " << log.skipped_lines
                << " non-dialogue line(s) skipped";
      if (stats.speech_failures > 0) std::cerr << ", " << stats.speech_failures
                                               << " speech failure(s)";
      std::cerr << "\n";
      return kExitOk;
    }

    coop::LogFollower follower(log_path);
    while (true) {
      auto batch = follower.poll();
      if (!batch.empty()) coop::replay(batch, options);
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
  } catch (const std::exception& e) {
    std::cerr << "replay failed: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coopworld: collaborative household-agent benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 0;
  std::string backend_override;
  bool allow_failed = false;
  std::string output_override;
  auto* run = app.add_subcommand("run", "run the episode matrix from a config file");
  run->add_option("config", config_path, "run config (json)")->required();
  run->add_option("--jobs", jobs, "parallel episode workers");
  run->add_option("--backend", backend_override, "override backend kind (scripted|http|replay)");
  run->add_flag("--allow-failed", allow_failed, "aggregate cells with zero completed episodes");
  run->add_option("--output", output_override, "override output directory");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "lint a run config and the task suite");
  validate->add_option("config", validate_path, "run config (json)")->required();

  std::string results_dir;
  auto* tables = app.add_subcommand("tables", "regenerate csv tables from results.json");
  tables->add_option("results_dir", results_dir, "directory with results.json")->required();

  std::string log_path, speech_cmd;
  int delay_ms = 0;
  bool follow = false;
  auto* replay = app.add_subcommand("replay", "replay a dialogue log in the terminal");
  replay->add_option("log", log_path, "dialogue log file")->required();
  replay->add_option("--delay-ms", delay_ms, "pause between utterances");
  replay->add_option("--speech-cmd", speech_cmd,
                     "command template run per utterance; $TEXT$ and $SPEAKER$ are substituted");
  replay->add_flag("--follow", follow, "keep reading appended utterances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed())
    return run_command(config_path, jobs, backend_override, allow_failed, output_override);
  if (validate->parsed()) return validate_command(validate_path);
  if (tables->parsed()) return tables_command(results_dir);
  if (replay->parsed()) return replay_command(log_path, delay_ms, speech_cmd, follow);
  return kExitUsage;
}
