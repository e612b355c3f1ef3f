// Acceptance suite: one test case per shipping criterion. Each prints a
// single [criterion N] PASS/FAIL line; ctest registers them individually.
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "coop/agent.hpp"
#include "coop/metrics.hpp"
#include "coop/rng.hpp"
#include "coop/runner.hpp"
#include "coop/transcript.hpp"
#include "prompt_fixture.hpp"
#include "welch_cases.hpp"

using namespace coop;

namespace {

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << "[criterion " << criterion << "] " << (pass ? "PASS" : "FAIL") << " - "
            << detail << "\n";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, std::string> dir_contents(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    out[std::filesystem::relative(entry.path(), root).string()] = slurp(entry.path());
  }
  return out;
}

RunMatrix scripted_default_matrix() {
  RunMatrix m = default_run_config();
  m.models = {{"scripted", "scripted"}};
  m.backend = BackendConfig{};  // scripted
  return m;
}

}  // namespace

TEST_CASE("criterion 1: efficiency-2 reconstruction of the reference step tables") {
  // Reference step-count means (Base and Improved Base + Cprompt4 rows) and
  // the reported efficiency row they imply, per evaluated model. The
  // reference tables print magnitudes at 2 decimals.
  struct Cell {
    const char* model;
    double base_steps;
    double combo_steps;
    double reported_lo;
    double reported_hi;
  };
  const Cell cells[] = {
      {"gemma3", 84.7, 65.5, 0.22, 0.22},
      {"mistral", 97.1, 94.4, 0.02, 0.02},
      {"deepseek", 85.4, 96.5, 0.11, 0.11},
      {"llama3.1", 79.7, 64.6, 0.18, 0.19},
  };

  bool all_pass = true;
  std::ostringstream detail;
  for (const auto& c : cells) {
    double computed = std::fabs(efficiency_2(c.base_steps, c.combo_steps));
    double delta;
    if (computed < c.reported_lo)
      delta = c.reported_lo - computed;
    else if (computed > c.reported_hi)
      delta = computed - c.reported_hi;
    else
      delta = 0.0;
    bool ok = delta <= 0.015;
    all_pass = all_pass && ok;
    detail << c.model << " computed=" << format_fixed_trunc(computed, 4)
           << " reported=" << format_fixed_trunc(c.reported_lo, 2)
           << " delta=" << format_fixed_trunc(delta, 4) << (ok ? " ok; " : " OUT OF TOLERANCE; ");
  }
  report(1, all_pass, detail.str());
  for (const auto& c : cells) {
    double computed = std::fabs(efficiency_2(c.base_steps, c.combo_steps));
    CHECK_MESSAGE(computed >= c.reported_lo - 0.015,
                  c.model, ": |efficiency_2| ", computed, " below reported ", c.reported_lo);
    CHECK_MESSAGE(computed <= c.reported_hi + 0.015,
                  c.model, ": |efficiency_2| ", computed, " above reported ", c.reported_hi);
  }
}

TEST_CASE("criterion 2: efficiency-1 inversion check") {
  double single_steps = 65.5 / (1.0 - 0.47);
  double computed = efficiency_1(single_steps, 65.5);
  bool ok = std::fabs(computed - 0.47) <= 0.005;
  report(2, ok, "efficiency_1(" + format_fixed_trunc(single_steps, 4) + ", 65.5) = " +
                    format_fixed_trunc(computed, 4));
  CHECK(computed == doctest::Approx(0.47).epsilon(0.005));
}

TEST_CASE("criterion 3: welch t-test equals the independent statistics oracle") {
  const auto& cases = coop_tests::welch_cases();
  REQUIRE(cases.size() >= 20);
  bool ok = true;
  double worst = 0.0;
  for (const auto& c : cases) {
    WelchResult r = welch_t(c.a, c.b);
    worst = std::max({worst, std::fabs(r.t - c.t), std::fabs(r.df - c.df),
                      std::fabs(r.p - c.p)});
    ok = ok && std::fabs(r.t - c.t) <= 1e-6 && std::fabs(r.df - c.df) <= 1e-6 &&
         std::fabs(r.p - c.p) <= 1e-6;

    WelchResult flipped = welch_t(c.b, c.a);
    ok = ok && std::fabs(flipped.t + r.t) <= 1e-9 && std::fabs(flipped.p - r.p) <= 1e-9;
  }

  // Pooled reduction: equal sizes and equal sample variances.
  std::vector<double> a{10, 12, 14, 16, 18}, b{30, 32, 34, 36, 38};
  WelchResult r = welch_t(a, b);
  double var = 10.0;
  double pooled_t = (14.0 - 34.0) / std::sqrt(var * (1.0 / 5 + 1.0 / 5));
  ok = ok && std::fabs(r.t - pooled_t) <= 1e-9 && std::fabs(r.df - 8.0) <= 1e-9;

  std::ostringstream detail;
  detail << cases.size() << " oracle pairs, worst |error| = " << worst
         << ", symmetry and pooled reduction " << (ok ? "hold" : "violated");
  report(3, ok, detail.str());

  for (const auto& c : cases) {
    WelchResult w = welch_t(c.a, c.b);
    CHECK(std::fabs(w.t - c.t) <= 1e-6);
    CHECK(std::fabs(w.df - c.df) <= 1e-6);
    CHECK(std::fabs(w.p - c.p) <= 1e-6);
  }
  CHECK(std::fabs(r.t - pooled_t) <= 1e-9);
}

TEST_CASE("criterion 4: scripted default matrix is fast and byte-deterministic") {
  auto started = std::chrono::steady_clock::now();

  auto base = std::filesystem::temp_directory_path() / "coop_acceptance_c4";
  std::filesystem::remove_all(base);
  std::filesystem::path dirs[2] = {base / "run_a", base / "run_b"};

  RunMatrix m = scripted_default_matrix();
  for (const auto& dir : dirs) {
    ResultsTable t = run_matrix(m);
    export_tables(t, dir);
    export_dialogues(t, dir);
  }

  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                       .count();

  auto a = dir_contents(dirs[0]);
  auto b = dir_contents(dirs[1]);
  bool identical = (a == b);
  bool on_time = elapsed < 60.0;
  bool substantial = a.size() >= 5 && a.count("results.json") && a.count("steps.csv");

  std::ostringstream detail;
  detail << "9 combos x 2 modes x 10 episodes, two full runs in "
         << format_fixed_trunc(elapsed, 2) << "s; " << a.size()
         << " output files " << (identical ? "byte-identical" : "DIFFER");
  report(4, identical && on_time && substantial, detail.str());

  CHECK(identical);
  CHECK(on_time);
  CHECK(substantial);
  std::filesystem::remove_all(base);
}

TEST_CASE("criterion 5: collaboration beats single-agent for every combo") {
  RunMatrix m = scripted_default_matrix();
  ResultsTable t = run_matrix(m);

  bool all_positive = true;
  double min_eff = 1.0;
  for (const auto& combo : t.combo_names) {
    double eff = t.eff1.at(pair_key(combo, "scripted"));
    min_eff = std::min(min_eff, eff);
    all_positive = all_positive && eff > 0.0;
  }
  std::ostringstream detail;
  detail << "efficiency-1 over 9 combos, minimum " << format_fixed_trunc(min_eff, 4);
  report(5, all_positive, detail.str());

  for (const auto& combo : t.combo_names)
    CHECK_MESSAGE(t.eff1.at(pair_key(combo, "scripted")) > 0.0, "combo ", combo);
}

TEST_CASE("criterion 6: prompt-pack conformance (goldens, composition, hygiene)") {
  PromptPack pack = PromptPack::defaults();
  PromptContext ctx = coop_tests::fixture_ctx();

  bool goldens_ok = true;
  const std::pair<std::string, std::string> renders[] = {
      {"planning_base", pack.render_planning(PlanningStrategy::Base, ctx)},
      {"planning_improved_base", pack.render_planning(PlanningStrategy::ImprovedBase, ctx)},
      {"planning_structured_reasoning",
       pack.render_planning(PlanningStrategy::StructuredReasoning, ctx)},
      {"comm_base", pack.render_comm(CommStrategy::Base, ctx)},
      {"comm_c1", pack.render_comm(CommStrategy::C1, ctx)},
      {"comm_c2", pack.render_comm(CommStrategy::C2, ctx)},
      {"comm_c3", pack.render_comm(CommStrategy::C3, ctx)},
      {"comm_c4", pack.render_comm(CommStrategy::C4, ctx)},
      {"action_base", pack.render_action(ActionStrategy::Base, ctx)},
      {"action_one_shot", pack.render_action(ActionStrategy::OneShot, ctx)},
  };
  for (const auto& [name, rendered] : renders) {
    std::string expected = coop_tests::read_golden(name);
    goldens_ok = goldens_ok && !expected.empty() && rendered == expected;
    CHECK_MESSAGE(rendered == expected, "golden mismatch: ", name);
  }

  SplitMix64 rng(20250808);
  bool merge_ok = true;
  for (int i = 0; i < 100; ++i) {
    PromptContext random = coop_tests::random_ctx(rng);
    std::string direct = pack.render_comm(CommStrategy::C4, random);
    std::string merged = coop_tests::surgical_c4(pack, random);
    merge_ok = merge_ok && !merged.empty() && direct == merged;
    CHECK(direct == merged);
  }

  bool hygiene_ok = true;
  for (int i = 0; i < 1000; ++i) {
    PromptContext random = coop_tests::random_ctx(rng);
    for (auto p : {PlanningStrategy::Base, PlanningStrategy::ImprovedBase,
                   PlanningStrategy::StructuredReasoning})
      hygiene_ok =
          hygiene_ok && !coop_tests::has_unresolved_token(pack.render_planning(p, random));
    for (auto c : {CommStrategy::Base, CommStrategy::C1, CommStrategy::C2, CommStrategy::C3,
                   CommStrategy::C4})
      hygiene_ok = hygiene_ok && !coop_tests::has_unresolved_token(pack.render_comm(c, random));
    for (auto a : {ActionStrategy::Base, ActionStrategy::OneShot})
      hygiene_ok =
          hygiene_ok && !coop_tests::has_unresolved_token(pack.render_action(a, random));
  }
  CHECK(hygiene_ok);

  std::ostringstream detail;
  detail << "10 golden renders " << (goldens_ok ? "match" : "MISMATCH")
         << "; c4 merge x100 " << (merge_ok ? "byte-equal" : "DIFFER")
         << "; 1000 fuzzed contexts " << (hygiene_ok ? "token-free" : "LEAK TOKENS");
  report(6, goldens_ok && merge_ok && hygiene_ok, detail.str());
}

TEST_CASE("criterion 7: fuzzy-parse robustness over the 30-case fixture") {
  const std::vector<HighLevelAction> actions = {
      {ActionKind::Explore, "bedroom", "explore the bedroom"},
      {ActionKind::Explore, "hall", "explore the hall"},
      {ActionKind::Explore, "kitchen", "explore the kitchen"},
      {ActionKind::GoGrab, "plate_1", "go grab plate_1 (plate)"},
      {ActionKind::GoPut, "bin", "go put carried objects into bin"},
      {ActionKind::SendMessage, "", "send a message to Bob"},
      {ActionKind::Wait, "", "wait"},
  };

  struct Case {
    const char* raw;
    MatchKind kind;
    std::size_t index;  // expected option
  };
  const Case cases[] = {
      // Bare letters in assorted dress.
      {"D", MatchKind::Exact, 3},
      {"d", MatchKind::Exact, 3},
      {" D. ", MatchKind::Exact, 3},
      {"(D)", MatchKind::Exact, 3},
      {"G", MatchKind::Exact, 6},
      {"a", MatchKind::Exact, 0},
      {"F\n", MatchKind::Exact, 5},
      // Full display text.
      {"go grab plate_1 (plate)", MatchKind::Exact, 3},
      {"GO GRAB PLATE_1 (PLATE)", MatchKind::Exact, 3},
      {"wait", MatchKind::Exact, 6},
      {"explore the kitchen.", MatchKind::Exact, 2},
      {"send a message to bob", MatchKind::Exact, 5},
      // Display text embedded in a sentence (token overlap >= 0.5).
      {"go grab the plate please", MatchKind::Fuzzy, 3},
      {"I will go grab plate_1 (plate) now", MatchKind::Fuzzy, 3},
      {"best choice: go grab plate_1 (plate)", MatchKind::Fuzzy, 3},
      {"Let's explore the kitchen first", MatchKind::Fuzzy, 2},
      {"put carried objects into bin", MatchKind::Fuzzy, 4},
      {"go put carried objects into the bin now", MatchKind::Fuzzy, 4},
      {"Sure! I'd send a message to Bob", MatchKind::Fuzzy, 5},
      {"explore bedroom", MatchKind::Fuzzy, 0},
      {"go grab plate_1", MatchKind::Fuzzy, 3},
      {"explore the", MatchKind::Fuzzy, 0},  // three-way tie, earliest wins
      // Unrelated prose.
      {"I think we should consider our options carefully...", MatchKind::Fallback, 6},
      {"", MatchKind::Fallback, 6},
      {"Hello there, how are you today?", MatchKind::Fallback, 6},
      {"The weather in the simulation is lovely.", MatchKind::Fallback, 6},
      {"Let us coordinate and split the work between us.", MatchKind::Fallback, 6},
      // Reasoning-heavy replies: overlap drowns unless the phrasing is tight.
      {"<think>The goal needs plates. plate_1 is nearby. I should grab it.</think> go grab "
       "plate_1 (plate)",
       MatchKind::Fallback, 6},
      {"Thinking step by step: the plates are in the kitchen, so the efficient move is: go "
       "grab plate_1 (plate)",
       MatchKind::Fallback, 6},
      {"Reasoning: I hold nothing. Best is D", MatchKind::Fallback, 6},
  };
  static_assert(sizeof(cases) / sizeof(cases[0]) == 30);

  int passed = 0;
  for (const auto& c : cases) {
    MatchResult r = parse_action_choice(c.raw, actions);
    bool ok = r.kind == c.kind && r.chosen == actions[c.index];
    if (r.kind == MatchKind::Exact) ok = ok && r.score == 1.0;
    if (r.kind == MatchKind::Fuzzy) ok = ok && r.score >= 0.5;
    if (r.kind == MatchKind::Fallback) ok = ok && r.score < 0.5;
    if (ok) ++passed;
    CHECK_MESSAGE(ok, "case '", c.raw, "' resolved to '", r.chosen.display_text,
                  "' kind=", static_cast<int>(r.kind), " score=", r.score);
  }
  std::ostringstream detail;
  detail << passed << "/30 cases resolved as designed";
  report(7, passed == 30, detail.str());
}

TEST_CASE("criterion 8: replay integrity (round trip, idempotence, ordering)") {
  bool round_trip_ok = true;
  SplitMix64 rng(9090);
  for (int i = 0; i < 500; ++i) {
    Utterance u{rng.below(2) ? "Alice" : "Bob",
                rng.below(3) ? std::optional<int>(static_cast<int>(rng.below(500)))
                             : std::nullopt,
                clean_text(coop_tests::random_words(rng, 12))};
    if (u.text.empty()) continue;
    auto back = parse_line(format_line(u));
    round_trip_ok = round_trip_ok && back.has_value() && *back == u;
  }
  CHECK(round_trip_ok);

  bool idempotent = true;
  static const char* kPieces[] = {"**", "*",  "`", "\"", "'", "[",  "]",    " ",  "  ",
                                  "a",  "bc", ".", "!",  "_", "12", "\x02", "\t", "word"};
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    std::size_t n = rng.below(20);
    for (std::size_t k = 0; k < n; ++k) s += kPieces[rng.below(18)];
    std::string once = clean_text(s);
    idempotent = idempotent && clean_text(once) == once;
  }
  CHECK(idempotent);

  // Deliberately slow speech command; printed order must match input order.
  std::vector<Utterance> utterances;
  for (int i = 1; i <= 5; ++i)
    utterances.push_back({i % 2 ? "Alice" : "Bob", i, "utterance number " + std::to_string(i)});
  std::ostringstream out, err;
  ReplayOptions options;
  options.out = &out;
  options.err = &err;
  options.color = false;
  options.speech_command = "sleep 0.05";
  ReplayStats stats = replay(utterances, options);

  bool ordered = stats.printed == 5 && stats.speech_failures == 0;
  std::string text = out.str();
  std::size_t at = 0;
  for (const auto& u : utterances) {
    std::size_t pos = text.find(u.text, at);
    ordered = ordered && pos != std::string::npos;
    if (pos != std::string::npos) at = pos;
  }
  CHECK(ordered);

  std::ostringstream detail;
  detail << "round trip x500 " << (round_trip_ok ? "ok" : "BROKEN") << "; clean idempotence x10000 "
         << (idempotent ? "ok" : "BROKEN") << "; slow-speech ordering "
         << (ordered ? "preserved" : "VIOLATED");
  report(8, round_trip_ok && idempotent && ordered, detail.str());
}

TEST_CASE("criterion 9: live-backend smoke test (gated on COOP_LLM_URL)") {
  const char* url = std::getenv("COOP_LLM_URL");
  if (!url || !*url) {
    report(9, true, "SKIPPED: COOP_LLM_URL unset");
    return;
  }
  const char* model_env = std::getenv("COOP_LLM_MODEL");
  std::string model = model_env && *model_env ? model_env : "gemma3:4b";

  HttpBackend backend(url, std::chrono::seconds(120));
  PromptPack pack = PromptPack::defaults();
  const auto& suite = builtin_task_suite();
  RunOptions options;
  EpisodeRecord rec = run_episode(suite[0], suite[0].variations[0], StrategyCombo{}, model,
                                  Mode::Collaborative, 7, backend, pack, options);

  bool ok = !rec.backend_failed;
  std::ostringstream detail;
  detail << "model " << model << " at " << url << ": "
         << (rec.metrics.completed ? "completed" : "hit the cap") << " in "
         << rec.metrics.step_count << " steps, " << rec.metrics.turn_count << " turns"
         << (ok ? "" : "; BACKEND ERROR " + rec.failure_digest);
  report(9, ok, detail.str());
  CHECK(ok);
}
