#include "coop/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "coop/transcript.hpp"

namespace coop {

std::string to_string(Mode m) {
  return m == Mode::Collaborative ? "collaborative" : "single";
}

Mode mode_from_string(const std::string& s) {
  if (s == "collaborative") return Mode::Collaborative;
  if (s == "single") return Mode::Single;
  throw ConfigError("unknown mode: " + s);
}

std::shared_ptr<Backend> make_backend(const BackendConfig& cfg) {
  auto resolve_url = [&]() -> std::string {
    if (!cfg.base_url.empty()) return cfg.base_url;
    if (const char* env = std::getenv("COOP_LLM_URL")) return env;
    throw ConfigError("backend.base_url is empty and COOP_LLM_URL is unset");
  };

  if (cfg.kind == "scripted") return std::make_shared<ScriptedBackend>();
  if (cfg.kind == "http")
    return std::make_shared<HttpBackend>(resolve_url(), std::chrono::seconds(cfg.timeout_s));
  if (cfg.kind == "replay") {
    if (cfg.cache_dir.empty()) throw ConfigError("replay backend needs backend.cache_dir");
    std::shared_ptr<Backend> fallback;
    if (cfg.fallback == "scripted") fallback = std::make_shared<ScriptedBackend>();
    else if (cfg.fallback == "http")
      fallback = std::make_shared<HttpBackend>(resolve_url(), std::chrono::seconds(cfg.timeout_s));
    else if (!cfg.fallback.empty())
      throw ConfigError("unknown backend.fallback: " + cfg.fallback);
    return std::make_shared<ReplayBackend>(cfg.cache_dir, fallback);
  }
  throw ConfigError("unknown backend.kind: " + cfg.kind);
}

RunMatrix default_run_config() {
  RunMatrix m;
  m.combos = default_combos();
  m.models = {{"gemma3:4b", "gemma3"},
              {"mistral:7b", "mistral"},
              {"deepseek-r1:8b", "deepseek"},
              {"llama3.1:8b", "llama3.1"}};
  m.modes = {Mode::Collaborative, Mode::Single};
  m.seeds = {101, 102, 103, 104, 105, 106, 107, 108, 109, 110};
  m.backend.kind = "http";
  m.ttest_pairs = {{"Base", "Improved Base + Cprompt4"}};
  m.output_dir = "results";
  return m;
}

namespace {

const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "combos",     "models",      "modes",       "seeds",       "backend",
      "output_dir", "ttest_pairs", "prompt_pack", "temperature", "max_tokens",
      "max_ticks",  "jobs",        "allow_failed"};
  return keys;
}

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

std::string default_label(const std::string& model_name) {
  auto colon = model_name.find(':');
  return colon == std::string::npos ? model_name : model_name.substr(0, colon);
}

}  // namespace

RunMatrix parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  reject_unknown_keys(j, known_config_keys(), "config");

  RunMatrix m = default_run_config();
  m.backend = BackendConfig{};  // config must opt into a backend explicitly

  if (j.contains("combos")) {
    m.combos.clear();
    for (const auto& c : j.at("combos")) {
      if (c.is_string() && c.get<std::string>() == "default") {
        for (const auto& combo : default_combos()) m.combos.push_back(combo);
        continue;
      }
      reject_unknown_keys(c, {"planning", "comm", "action"}, "combos[]");
      StrategyCombo combo;
      combo.planning = planning_from_string(c.value("planning", "base"));
      combo.comm = comm_from_string(c.value("comm", "base"));
      combo.action = action_from_string(c.value("action", "base"));
      m.combos.push_back(combo);
    }
  }
  if (j.contains("models")) {
    m.models.clear();
    for (const auto& entry : j.at("models")) {
      if (entry.is_string()) {
        std::string name = entry.get<std::string>();
        m.models.push_back({name, default_label(name)});
      } else {
        reject_unknown_keys(entry, {"name", "label"}, "models[]");
        std::string name = entry.at("name").get<std::string>();
        m.models.push_back({name, entry.value("label", default_label(name))});
      }
    }
  }
  if (j.contains("modes")) {
    m.modes.clear();
    for (const auto& s : j.at("modes")) m.modes.push_back(mode_from_string(s.get<std::string>()));
  }
  if (j.contains("seeds")) {
    m.seeds.clear();
    for (const auto& s : j.at("seeds")) m.seeds.push_back(s.get<std::uint64_t>());
  }
  if (j.contains("backend")) {
    const auto& b = j.at("backend");
    reject_unknown_keys(b, {"kind", "base_url", "cache_dir", "fallback", "timeout_s"},
                        "backend");
    m.backend.kind = b.value("kind", "scripted");
    m.backend.base_url = b.value("base_url", "");
    m.backend.cache_dir = b.value("cache_dir", "");
    m.backend.fallback = b.value("fallback", "");
    m.backend.timeout_s = b.value("timeout_s", 120);
  }
  if (j.contains("output_dir")) m.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("ttest_pairs")) {
    m.ttest_pairs.clear();
    for (const auto& p : j.at("ttest_pairs")) {
      reject_unknown_keys(p, {"a", "b"}, "ttest_pairs[]");
      m.ttest_pairs.push_back({p.at("a").get<std::string>(), p.at("b").get<std::string>()});
    }
  } else {
    // The inherited default pair only applies when its combos are present.
    std::set<std::string> names;
    for (const auto& c : m.combos) names.insert(c.name());
    std::erase_if(m.ttest_pairs, [&](const TTestPair& p) {
      return !names.count(p.combo_a) || !names.count(p.combo_b);
    });
  }
  if (j.contains("prompt_pack") && !j.at("prompt_pack").is_null())
    m.prompt_pack_dir = j.at("prompt_pack").get<std::string>();
  if (j.contains("temperature")) m.temperature = j.at("temperature").get<double>();
  if (j.contains("max_tokens")) m.max_tokens = j.at("max_tokens").get<int>();
  if (j.contains("max_ticks")) m.max_ticks = j.at("max_ticks").get<int>();
  if (j.contains("jobs")) m.jobs = j.at("jobs").get<int>();
  if (j.contains("allow_failed")) m.allow_failed = j.at("allow_failed").get<bool>();

  // Field-named validation.
  if (m.combos.empty()) throw ConfigError("combos: must not be empty");
  if (m.models.empty()) throw ConfigError("models: must not be empty");
  if (m.modes.empty()) throw ConfigError("modes: must not be empty");
  if (m.seeds.empty()) throw ConfigError("seeds: must not be empty");
  if (m.max_tokens < 1) throw ConfigError("max_tokens: must be positive");
  if (m.max_ticks < 1) throw ConfigError("max_ticks: must be positive");
  if (m.jobs < 1) throw ConfigError("jobs: must be >= 1");
  std::set<std::string> combo_names;
  for (const auto& c : m.combos) {
    if (!combo_names.insert(c.name()).second)
      throw ConfigError("combos: duplicate combo " + c.name());
  }
  std::set<std::string> labels;
  for (const auto& model : m.models) {
    if (model.name.empty()) throw ConfigError("models: empty model name");
    if (!labels.insert(model.label).second)
      throw ConfigError("models: duplicate label " + model.label);
  }
  for (const auto& p : m.ttest_pairs) {
    if (!combo_names.count(p.combo_a))
      throw ConfigError("ttest_pairs: unknown combo '" + p.combo_a + "'");
    if (!combo_names.count(p.combo_b))
      throw ConfigError("ttest_pairs: unknown combo '" + p.combo_b + "'");
  }
  return m;
}

RunMatrix load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

nlohmann::json run_config_json(const RunMatrix& m) {
  nlohmann::json combos = nlohmann::json::array();
  for (const auto& c : m.combos)
    combos.push_back({{"planning", to_string(c.planning)},
                      {"comm", to_string(c.comm)},
                      {"action", to_string(c.action)}});
  nlohmann::json models = nlohmann::json::array();
  for (const auto& model : m.models)
    models.push_back({{"name", model.name}, {"label", model.label}});
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& mode : m.modes) modes.push_back(to_string(mode));
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : m.ttest_pairs) pairs.push_back({{"a", p.combo_a}, {"b", p.combo_b}});

  return {{"combos", combos},
          {"models", models},
          {"modes", modes},
          {"seeds", m.seeds},
          {"backend",
           {{"kind", m.backend.kind},
            {"base_url", m.backend.base_url},
            {"cache_dir", m.backend.cache_dir},
            {"fallback", m.backend.fallback},
            {"timeout_s", m.backend.timeout_s}}},
          {"output_dir", m.output_dir.string()},
          {"ttest_pairs", pairs},
          {"prompt_pack", m.prompt_pack_dir},
          {"temperature", m.temperature},
          {"max_tokens", m.max_tokens},
          {"max_ticks", m.max_ticks},
          {"jobs", m.jobs},
          {"allow_failed", m.allow_failed}};
}

namespace {

std::string match_kind_name(MatchKind k) {
  switch (k) {
    case MatchKind::Exact: return "exact";
    case MatchKind::Fuzzy: return "fuzzy";
    case MatchKind::Fallback: return "fallback";
  }
  return "fallback";
}

nlohmann::json trace_to_json(const DecisionTrace& t) {
  nlohmann::json j{{"tick", t.tick},
                   {"agent", t.agent},
                   {"planning_prompt", t.planning_prompt},
                   {"planning_raw", t.planning_raw},
                   {"chosen_display", t.chosen_display},
                   {"match_kind", match_kind_name(t.match_kind)},
                   {"match_score", t.match_score}};
  if (t.comm_prompt) j["comm_prompt"] = *t.comm_prompt;
  if (t.comm_raw) j["comm_raw"] = *t.comm_raw;
  if (t.message_text) j["message_text"] = *t.message_text;
  return j;
}

nlohmann::json event_to_json(const Event& e) {
  nlohmann::json j{{"tick", e.tick}, {"agent", e.agent}, {"kind", event_kind_name(e.kind)}};
  if (!e.object.empty()) j["object"] = e.object;
  if (!e.container.empty()) j["container"] = e.container;
  if (!e.room.empty()) j["room"] = e.room;
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

nlohmann::json metrics_to_json(const EpisodeMetrics& m) {
  return {{"step_count", m.step_count},
          {"turn_count", m.turn_count},
          {"fuzzy_count", m.fuzzy_count},
          {"fallback_count", m.fallback_count},
          {"completed", m.completed}};
}

}  // namespace

nlohmann::json EpisodeRecord::to_json() const {
  nlohmann::json decisions_json = nlohmann::json::array();
  for (const auto& d : decisions) decisions_json.push_back(trace_to_json(d));
  nlohmann::json events_json = nlohmann::json::array();
  for (const auto& e : events) events_json.push_back(event_to_json(e));
  nlohmann::json dialogue_json = nlohmann::json::array();
  for (const auto& msg : dialogue)
    dialogue_json.push_back(
        {{"from", msg.from}, {"to", msg.to}, {"tick", msg.tick}, {"text", msg.text}});

  return {{"task", task_id},
          {"variation", variation_id},
          {"seed", seed},
          {"combo",
           {{"planning", to_string(combo.planning)},
            {"comm", to_string(combo.comm)},
            {"action", to_string(combo.action)},
            {"name", combo.name()}}},
          {"model", model},
          {"model_label", model_label},
          {"mode", to_string(mode)},
          {"decisions", decisions_json},
          {"events", events_json},
          {"dialogue", dialogue_json},
          {"metrics", metrics_to_json(metrics)},
          {"backend_failed", backend_failed},
          {"failure_digest", failure_digest}};
}

namespace {

struct AgentRuntime {
  AgentId id;
  std::string name;
  AgentId oppo_id;
  std::string oppo_name;
  Memory memory;
  std::deque<Primitive> script;
  std::optional<std::string> pending_message;
  std::vector<Message> inbox;
};

// The agent offers the model only objects it has actually seen; the world
// list is ground truth, the semantic memory is the agent's own knowledge.
std::vector<HighLevelAction> filter_by_memory(const std::vector<HighLevelAction>& actions,
                                              const Memory& memory) {
  std::vector<HighLevelAction> out;
  for (const auto& a : actions) {
    if (a.kind == ActionKind::GoGrab && !memory.semantic.count(a.target)) continue;
    out.push_back(a);
  }
  return out;
}

}  // namespace

EpisodeRecord run_episode(const TaskSpec& task, const VariationSpec& variation,
                          const StrategyCombo& combo, const std::string& model, Mode mode,
                          std::uint64_t seed, Backend& backend, const PromptPack& pack,
                          const RunOptions& options) {
  EpisodeRecord record;
  record.task_id = task.id;
  record.variation_id = variation.id;
  record.seed = seed;
  record.combo = combo;
  record.model = model;
  record.mode = mode;

  TaskSpec varied = apply_variation(task, variation);
  World world = build_world(varied, seed, mode == Mode::Single ? 1 : 2);
  world.max_ticks = options.max_ticks;

  std::vector<AgentRuntime> agents;
  for (const auto& body : world.agents) {
    AgentRuntime rt;
    rt.id = body.id;
    rt.name = body.name;
    for (const auto& other : world.agents) {
      if (other.id != body.id) {
        rt.oppo_id = other.id;
        rt.oppo_name = other.name;
      }
    }
    agents.push_back(std::move(rt));
  }

  LlmRequest request_template;
  request_template.model = model;
  request_template.temperature = options.temperature;
  request_template.max_tokens = options.max_tokens;

  try {
    while (!is_complete(world) && world.tick < world.max_ticks) {
      // Agents re-plan only when their script is exhausted; Alice (list
      // order) decides first at equal ticks.
      for (auto& rt : agents) {
        if (!rt.script.empty()) continue;

        Observation obs = perceive(world, rt.id);
        update_memory(rt.memory, obs, rt.inbox);
        rt.inbox.clear();

        auto actions = filter_by_memory(available_actions(world, rt.id), rt.memory);
        Progress progress = goal_progress(world);
        PromptContext ctx =
            build_context(rt.memory, world.goal, progress, actions, rt.name, rt.oppo_name);

        Decision decision = decide(ctx, actions, combo, backend, pack, request_template);
        decision.trace.tick = world.tick;
        decision.trace.agent = rt.name;
        record.decisions.push_back(decision.trace);
        if (decision.trace.match_kind == MatchKind::Fuzzy) ++record.metrics.fuzzy_count;
        if (decision.trace.match_kind == MatchKind::Fallback) ++record.metrics.fallback_count;

        rt.memory.episodic.push_back({world.tick, EpisodeEventKind::ActionChosen, "",
                                      decision.action.display_text});
        rt.pending_message = decision.message_text;

        auto prims = expand_action(world, rt.id, decision.action);
        rt.script.assign(prims.begin(), prims.end());
      }

      std::map<AgentId, Primitive> moves;
      for (auto& rt : agents) {
        moves[rt.id] = rt.script.front();
        rt.script.pop_front();
      }

      std::vector<Event> events = step(world, moves);
      for (const auto& ev : events) {
        if (ev.kind == EventKind::Spoke) {
          auto& sender = *std::find_if(agents.begin(), agents.end(),
                                       [&](const AgentRuntime& rt) { return rt.id == ev.agent; });
          std::string text = sender.pending_message.value_or("(no message)");
          sender.pending_message.reset();
          Message msg{sender.id, sender.oppo_id, ev.tick, text};
          record.dialogue.push_back(msg);
          sender.memory.episodic.push_back(
              {ev.tick, EpisodeEventKind::MessageSent, sender.name, text});
          for (auto& rt : agents)
            if (rt.id == sender.oppo_id) rt.inbox.push_back(msg);
        }
        if (ev.kind == EventKind::GrabFailed || ev.kind == EventKind::PutFailed) {
          // Stale plan; drop the rest of the script and re-decide.
          for (auto& rt : agents)
            if (rt.id == ev.agent) rt.script.clear();
        }
      }
      record.events.insert(record.events.end(), events.begin(), events.end());
    }
  } catch (const BackendError& e) {
    record.backend_failed = true;
    record.failure_digest = e.request_digest();
  }

  record.metrics.completed = !record.backend_failed && is_complete(world);
  record.metrics.step_count = record.metrics.completed ? world.tick : options.max_ticks;
  record.metrics.turn_count = static_cast<int>(record.dialogue.size());

  // Trace consistency is asserted before the record leaves the runner.
  if (record.metrics.turn_count != static_cast<int>(record.dialogue.size()))
    throw MetricsError("episode record inconsistent: turn count vs dialogue");
  if (record.metrics.completed && record.metrics.step_count != world.tick)
    throw MetricsError("episode record inconsistent: step count vs final tick");
  return record;
}

std::string cell_key(const std::string& combo, const std::string& model, Mode mode) {
  return combo + "|" + model + "|" + to_string(mode);
}

std::string pair_key(const std::string& combo, const std::string& model) {
  return combo + "|" + model;
}

ResultsTable run_matrix(const RunMatrix& m) {
  const auto& suite = builtin_task_suite();
  std::size_t episodes_per_cell = 0;
  for (const auto& task : suite) episodes_per_cell += task.variations.size();
  if (m.seeds.size() != episodes_per_cell)
    throw ConfigError("seeds: need exactly " + std::to_string(episodes_per_cell) +
                      " (one per task variation), got " + std::to_string(m.seeds.size()));

  auto backend = make_backend(m.backend);
  PromptPack pack =
      m.prompt_pack_dir.empty() ? PromptPack::defaults() : PromptPack::load_dir(m.prompt_pack_dir);
  RunOptions options{m.max_ticks, m.temperature, m.max_tokens};

  struct WorkItem {
    const TaskSpec* task;
    const VariationSpec* variation;
    const StrategyCombo* combo;
    const ModelRef* model;
    Mode mode;
    std::uint64_t seed;
  };
  std::vector<WorkItem> work;
  for (const auto& combo : m.combos) {
    for (const auto& model : m.models) {
      for (Mode mode : m.modes) {
        std::size_t episode = 0;
        for (const auto& task : suite) {
          for (const auto& variation : task.variations) {
            work.push_back({&task, &variation, &combo, &model, mode, m.seeds[episode]});
            ++episode;
          }
        }
      }
    }
  }

  std::vector<EpisodeRecord> records(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      const WorkItem& item = work[i];
      records[i] = run_episode(*item.task, *item.variation, *item.combo, item.model->name,
                               item.mode, item.seed, *backend, pack, options);
      records[i].model_label = item.model->label;
    }
  };
  int jobs = std::max(1, m.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  ResultsTable table;
  for (const auto& combo : m.combos) table.combo_names.push_back(combo.name());
  for (const auto& model : m.models) table.model_labels.push_back(model.label);
  table.records = std::move(records);

  // Cell aggregation in declaration order.
  std::size_t idx = 0;
  for (const auto& combo : m.combos) {
    for (const auto& model : m.models) {
      for (Mode mode : m.modes) {
        std::vector<EpisodeMetrics> cell_metrics;
        for (std::size_t e = 0; e < episodes_per_cell; ++e)
          cell_metrics.push_back(table.records[idx++].metrics);
        bool any_completed = std::any_of(cell_metrics.begin(), cell_metrics.end(),
                                         [](const EpisodeMetrics& em) { return em.completed; });
        if (!any_completed && !m.allow_failed)
          throw ConfigError("cell " + cell_key(combo.name(), model.label, mode) +
                            " has zero completed episodes (use --allow-failed to aggregate)");
        table.cells[cell_key(combo.name(), model.label, mode)] = summarize(cell_metrics);
      }
    }
  }

  bool has_single = std::count(m.modes.begin(), m.modes.end(), Mode::Single) > 0;
  bool has_collab = std::count(m.modes.begin(), m.modes.end(), Mode::Collaborative) > 0;

  if (has_single && has_collab) {
    for (const auto& combo : m.combos) {
      for (const auto& model : m.models) {
        const auto& single = table.cells.at(cell_key(combo.name(), model.label, Mode::Single));
        const auto& collab =
            table.cells.at(cell_key(combo.name(), model.label, Mode::Collaborative));
        table.eff1[pair_key(combo.name(), model.label)] =
            efficiency_1(single.mean_steps, collab.mean_steps);
      }
    }
  }

  const std::string base_name = StrategyCombo{}.name();  // "Base"
  bool has_base = std::count(table.combo_names.begin(), table.combo_names.end(), base_name) > 0;
  if (has_base && has_collab) {
    for (const auto& combo : m.combos) {
      if (combo.name() == base_name) continue;
      for (const auto& model : m.models) {
        const auto& base = table.cells.at(cell_key(base_name, model.label, Mode::Collaborative));
        const auto& cell =
            table.cells.at(cell_key(combo.name(), model.label, Mode::Collaborative));
        table.eff2[pair_key(combo.name(), model.label)] =
            efficiency_2(base.mean_steps, cell.mean_steps);
      }
    }
  }

  if (has_collab) {
    for (const auto& pair : m.ttest_pairs) {
      for (const auto& model : m.models) {
        auto a_it = table.cells.find(cell_key(pair.combo_a, model.label, Mode::Collaborative));
        auto b_it = table.cells.find(cell_key(pair.combo_b, model.label, Mode::Collaborative));
        if (a_it == table.cells.end() || b_it == table.cells.end()) continue;
        std::vector<double> sample_a, sample_b;
        for (const auto& em : a_it->second.raw) sample_a.push_back(em.step_count);
        for (const auto& em : b_it->second.raw) sample_b.push_back(em.step_count);
        TTestReport report{pair.combo_a, pair.combo_b, model.label, {}};
        report.result = welch_t(sample_a, sample_b);
        table.ttests.push_back(report);
      }
    }
  }
  return table;
}

std::string format_fixed_trunc(double value, int decimals) {
  double factor = std::pow(10.0, decimals);
  double nudged = value * factor + (value >= 0 ? 1e-9 : -1e-9);
  double truncated = std::trunc(nudged) / factor;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, truncated);
  return buf;
}

nlohmann::json results_to_json(const ResultsTable& t) {
  nlohmann::json cells = nlohmann::json::object();
  for (const auto& [key, stats] : t.cells) {
    nlohmann::json raw = nlohmann::json::array();
    for (const auto& em : stats.raw) raw.push_back(metrics_to_json(em));
    cells[key] = {{"mean_steps", stats.mean_steps},
                  {"mean_turns", stats.mean_turns},
                  {"n", stats.n},
                  {"raw", raw}};
  }
  nlohmann::json ttests = nlohmann::json::array();
  for (const auto& report : t.ttests)
    ttests.push_back({{"combo_a", report.combo_a},
                      {"combo_b", report.combo_b},
                      {"model", report.model_label},
                      {"t", report.result.t},
                      {"df", report.result.df},
                      {"p", report.result.p}});
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : t.records) records.push_back(r.to_json());

  return {{"combo_names", t.combo_names},
          {"model_labels", t.model_labels},
          {"cells", cells},
          {"eff1", t.eff1},
          {"eff2", t.eff2},
          {"ttests", ttests},
          {"records", records}};
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

std::string csv_from_cells(const nlohmann::json& results, const std::string& field,
                           int decimals) {
  std::ostringstream out;
  out << "prompt";
  for (const auto& label : results.at("model_labels")) out << "," << label.get<std::string>();
  out << "\n";
  for (const auto& combo : results.at("combo_names")) {
    out << combo.get<std::string>();
    for (const auto& label : results.at("model_labels")) {
      std::string stem = combo.get<std::string>() + "|" + label.get<std::string>() + "|";
      out << ",";
      // Collaboration-mode cells are the table of record; single-only runs
      // still get a table.
      for (const char* mode : {"collaborative", "single"}) {
        if (results.at("cells").contains(stem + mode)) {
          out << format_fixed_trunc(
              results.at("cells").at(stem + mode).at(field).get<double>(), decimals);
          break;
        }
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string csv_from_pairs(const nlohmann::json& results, const std::string& table,
                           bool skip_base) {
  std::ostringstream out;
  out << "prompt";
  for (const auto& label : results.at("model_labels")) out << "," << label.get<std::string>();
  out << "\n";
  for (const auto& combo : results.at("combo_names")) {
    if (skip_base && combo.get<std::string>() == "Base") continue;
    out << combo.get<std::string>();
    for (const auto& label : results.at("model_labels")) {
      std::string key = combo.get<std::string>() + "|" + label.get<std::string>();
      out << ",";
      if (results.at(table).contains(key))
        out << format_fixed_trunc(results.at(table).at(key).get<double>(), 2);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace

void export_csv_from_json(const nlohmann::json& results, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "steps.csv", csv_from_cells(results, "mean_steps", 1));
  write_file(dir / "turns.csv", csv_from_cells(results, "mean_turns", 1));
  write_file(dir / "efficiency1.csv", csv_from_pairs(results, "eff1", false));
  write_file(dir / "efficiency2.csv", csv_from_pairs(results, "eff2", true));
}

void export_tables(const ResultsTable& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json results = results_to_json(t);
  write_file(dir / "results.json", results.dump() + "\n");
  export_csv_from_json(results, dir);
}

void export_dialogues(const ResultsTable& t, const std::filesystem::path& dir) {
  auto dialogues = dir / "dialogues";
  std::filesystem::create_directories(dialogues);
  for (const auto& record : t.records) {
    if (record.dialogue.empty()) continue;
    std::ostringstream name;
    name << record.combo.slug() << "__" << record.model_label << "__"
         << to_string(record.mode) << "__" << record.task_id << "-" << record.variation_id
         << "__s" << record.seed << ".log";
    std::ostringstream body;
    for (const auto& msg : record.dialogue)
      body << format_line(Utterance{msg.from, msg.tick, msg.text}) << "\n";
    write_file(dialogues / name.str(), body.str());
  }
}

}  // namespace coop
