#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coop/prompts.hpp"
#include "coop/rng.hpp"
#include "prompt_fixture.hpp"

using namespace coop;
using coop_tests::fixture_ctx;
using coop_tests::golden_dir;
using coop_tests::has_unresolved_token;
using coop_tests::random_ctx;
using coop_tests::surgical_c4;

namespace {

PromptContext empty_ctx() {
  PromptContext ctx;
  ctx.agent_name = "Alice";
  ctx.oppo_name = "Bob";
  ctx.goal_text = "goal";
  ctx.progress_text = "progress";
  ctx.available_actions = {{"A", "wait"}};
  return ctx;
}

void check_golden(const std::string& name, const std::string& rendered) {
  auto path = golden_dir() / (name + ".txt");
  if (std::getenv("COOP_REGEN_GOLDEN")) {
    std::filesystem::create_directories(golden_dir());
    std::ofstream out(path, std::ios::binary);
    out << rendered;
    return;
  }
  std::string expected = coop_tests::read_golden(name);
  REQUIRE_MESSAGE(!expected.empty(), "missing golden file ", path.string());
  CHECK_MESSAGE(rendered == expected, "golden mismatch for ", name);
}

// Independent derivation of the lettered-label rule.
std::string oracle_label(std::size_t n) {
  std::string prefix = n >= 26 ? oracle_label(n / 26 - 1) : "";
  return prefix + static_cast<char>('A' + n % 26);
}

std::size_t example_line_count(const std::string& rendered) {
  auto begin = rendered.find("Example dialogue:\n");
  if (begin == std::string::npos) return 0;
  begin += std::string("Example dialogue:\n").size();
  auto end = rendered.find("\n\n", begin);
  std::size_t lines = 1;
  for (std::size_t i = begin; i < end; ++i)
    if (rendered[i] == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_CASE("option labels run A..Z then AA, matching the independent rule") {
  CHECK(option_label(0) == "A");
  CHECK(option_label(25) == "Z");
  CHECK(option_label(26) == "AA");
  CHECK(option_label(27) == "AB");
  CHECK(option_label(51) == "AZ");
  CHECK(option_label(52) == "BA");
  CHECK(option_label(702) == "AAA");
  for (std::size_t i = 0; i < 800; ++i) CHECK(option_label(i) == oracle_label(i));
}

TEST_CASE("substitute resolves tokens and rejects leftovers") {
  CHECK(substitute("hi $NAME$!", {{"NAME", "Bob"}}) == "hi Bob!");
  CHECK(substitute("$A$$B$", {{"A", "x"}, {"B", "y"}}) == "xy");
  CHECK(substitute("$5 is not a token", {}) == "$5 is not a token");
  CHECK(substitute("a $ lone dollar $ pair", {}) == "a $ lone dollar $ pair");
  CHECK_THROWS_AS(substitute("$MISSING$", {}), PromptError);
  // Values must not smuggle tokens into the output.
  CHECK_THROWS_AS(substitute("$A$", {{"A", "$B$"}}), PromptError);
}

TEST_CASE("planning prompts keep the fixed section order and strategy wording") {
  PromptPack pack = PromptPack::defaults();
  PromptContext ctx = fixture_ctx();

  for (auto strategy : {PlanningStrategy::Base, PlanningStrategy::ImprovedBase,
                        PlanningStrategy::StructuredReasoning}) {
    std::string out = pack.render_planning(strategy, ctx);
    std::size_t goal = out.find("Goal: ");
    std::size_t progress = out.find("Progress: ");
    std::size_t dialogue = out.find("Dialogue history:");
    std::size_t taken = out.find("Actions taken:");
    std::size_t available = out.find("Available actions:");
    REQUIRE(goal != std::string::npos);
    CHECK(goal < progress);
    CHECK(progress < dialogue);
    CHECK(dialogue < taken);
    CHECK(taken < available);
    CHECK(out.find(ctx.goal_text) != std::string::npos);
    CHECK(out.find(ctx.progress_text) != std::string::npos);
    CHECK(out.find("A. explore the bedroom") != std::string::npos);
    CHECK_FALSE(has_unresolved_token(out));
  }

  CHECK(pack.render_planning(PlanningStrategy::Base, ctx)
            .find("Please help me choose the best available action") != std::string::npos);
  CHECK(pack.render_planning(PlanningStrategy::ImprovedBase, ctx)
            .find("You should select the most efficient action based on the goal, progress, "
                  "and available options. Ensure your choice contributes directly to goal "
                  "completion.") != std::string::npos);
  std::string structured = pack.render_planning(PlanningStrategy::StructuredReasoning, ctx);
  CHECK(structured.find("step by step") != std::string::npos);
  CHECK(structured.find("1.") != std::string::npos);
  CHECK(structured.find("4.") != std::string::npos);

  std::string empty = pack.render_planning(PlanningStrategy::Base, empty_ctx());
  CHECK(empty.find("Dialogue history:\n(none)") != std::string::npos);
  CHECK(empty.find("Actions taken:\n(none)") != std::string::npos);
}

TEST_CASE("communication prompts carry the strategy-specific blocks") {
  PromptPack pack = PromptPack::defaults();
  PromptContext ctx = fixture_ctx();

  std::string base = pack.render_comm(CommStrategy::Base, ctx);
  CHECK(base.find("brief, accurate message") != std::string::npos);
  CHECK(base.find("Example dialogue:") == std::string::npos);

  std::string c1 = pack.render_comm(CommStrategy::C1, ctx);
  CHECK(c1.find("Respond as if speaking directly to Bob") != std::string::npos);
  CHECK(c1.find("no explanations") != std::string::npos);

  CHECK(example_line_count(pack.render_comm(CommStrategy::C2, ctx)) == 2);  // one exchange
  CHECK(example_line_count(pack.render_comm(CommStrategy::C3, ctx)) == 6);  // three exchanges
  CHECK(example_line_count(pack.render_comm(CommStrategy::C3, ctx)) >= 3);

  std::string c4 = pack.render_comm(CommStrategy::C4, ctx);
  CHECK(c4.find("Example dialogue:") != std::string::npos);
  CHECK(c4.find("Respond as if speaking directly to Bob") != std::string::npos);

  for (auto s : {CommStrategy::Base, CommStrategy::C1, CommStrategy::C2, CommStrategy::C3,
                 CommStrategy::C4}) {
    std::string out = pack.render_comm(s, ctx);
    CHECK(out.find(ctx.goal_text) != std::string::npos);
    CHECK(out.find(ctx.progress_text) != std::string::npos);
    CHECK(out.find("I will clear the kitchen.") != std::string::npos);
    // Communication prompts never show a lettered list.
    CHECK(out.find("Available actions:") == std::string::npos);
  }
}

TEST_CASE("cprompt4 equals the programmatic c1+c2 merge on randomized contexts") {
  PromptPack pack = PromptPack::defaults();
  CHECK(pack.render_comm(CommStrategy::C4, fixture_ctx()) ==
        surgical_c4(pack, fixture_ctx()));

  SplitMix64 rng(20250808);
  for (int i = 0; i < 100; ++i) {
    PromptContext ctx = random_ctx(rng);
    CHECK(pack.render_comm(CommStrategy::C4, ctx) == surgical_c4(pack, ctx));
  }
}

TEST_CASE("action prompts: base is list+ask, one-shot adds a worked example") {
  PromptPack pack = PromptPack::defaults();
  PromptContext ctx = fixture_ctx();

  std::string base = pack.render_action(ActionStrategy::Base, ctx);
  CHECK(base.find("Available actions:") != std::string::npos);
  CHECK(base.find("A. explore the bedroom") != std::string::npos);
  CHECK(base.find("Example") == std::string::npos);
  CHECK(base.find("Goal:") == std::string::npos);

  std::string one_shot = pack.render_action(ActionStrategy::OneShot, ctx);
  CHECK(one_shot.find("Example input:") != std::string::npos);
  CHECK(one_shot.find("Example answer: B") != std::string::npos);
  CHECK(one_shot.find("A. explore the bedroom") != std::string::npos);
  // The worked example must not spoof the real section header.
  CHECK(one_shot.find("Available actions:") == one_shot.rfind("Available actions:"));
  CHECK(pack.one_shot_suffix().find("Example answer: B") != std::string::npos);
}

TEST_CASE("rendered prompts match the frozen golden files") {
  PromptPack pack = PromptPack::defaults();
  PromptContext ctx = fixture_ctx();
  check_golden("planning_base", pack.render_planning(PlanningStrategy::Base, ctx));
  check_golden("planning_improved_base",
               pack.render_planning(PlanningStrategy::ImprovedBase, ctx));
  check_golden("planning_structured_reasoning",
               pack.render_planning(PlanningStrategy::StructuredReasoning, ctx));
  check_golden("comm_base", pack.render_comm(CommStrategy::Base, ctx));
  check_golden("comm_c1", pack.render_comm(CommStrategy::C1, ctx));
  check_golden("comm_c2", pack.render_comm(CommStrategy::C2, ctx));
  check_golden("comm_c3", pack.render_comm(CommStrategy::C3, ctx));
  check_golden("comm_c4", pack.render_comm(CommStrategy::C4, ctx));
  check_golden("action_base", pack.render_action(ActionStrategy::Base, ctx));
  check_golden("action_one_shot", pack.render_action(ActionStrategy::OneShot, ctx));
}

TEST_CASE("placeholder hygiene holds across fuzzed contexts") {
  PromptPack pack = PromptPack::defaults();
  SplitMix64 rng(77);
  for (int i = 0; i < 300; ++i) {
    PromptContext ctx = random_ctx(rng);
    for (auto p : {PlanningStrategy::Base, PlanningStrategy::ImprovedBase,
                   PlanningStrategy::StructuredReasoning})
      CHECK_FALSE(has_unresolved_token(pack.render_planning(p, ctx)));
    for (auto c : {CommStrategy::Base, CommStrategy::C1, CommStrategy::C2, CommStrategy::C3,
                   CommStrategy::C4})
      CHECK_FALSE(has_unresolved_token(pack.render_comm(c, ctx)));
    for (auto a : {ActionStrategy::Base, ActionStrategy::OneShot})
      CHECK_FALSE(has_unresolved_token(pack.render_action(a, ctx)));
  }
}

TEST_CASE("changing the goal changes every rendered prompt") {
  PromptPack pack = PromptPack::defaults();
  PromptContext ctx = fixture_ctx();
  PromptContext other = ctx;
  other.goal_text = "A completely different objective.";

  for (auto p : {PlanningStrategy::Base, PlanningStrategy::ImprovedBase,
                 PlanningStrategy::StructuredReasoning})
    CHECK(pack.render_planning(p, ctx) != pack.render_planning(p, other));
  for (auto c : {CommStrategy::Base, CommStrategy::C1, CommStrategy::C2, CommStrategy::C3,
                 CommStrategy::C4})
    CHECK(pack.render_comm(c, ctx) != pack.render_comm(c, other));
}

TEST_CASE("all strategies render on the empty-history context") {
  PromptPack pack = PromptPack::defaults();
  PromptContext ctx = empty_ctx();
  for (auto p : {PlanningStrategy::Base, PlanningStrategy::ImprovedBase,
                 PlanningStrategy::StructuredReasoning})
    CHECK_FALSE(pack.render_planning(p, ctx).empty());
  for (auto c : {CommStrategy::Base, CommStrategy::C1, CommStrategy::C2, CommStrategy::C3,
                 CommStrategy::C4})
    CHECK_FALSE(pack.render_comm(c, ctx).empty());
  for (auto a : {ActionStrategy::Base, ActionStrategy::OneShot})
    CHECK_FALSE(pack.render_action(a, ctx).empty());
}

TEST_CASE("prompt pack files override and reproduce the embedded defaults") {
  auto pack_dir = std::filesystem::path(COOP_SOURCE_DIR) / "configs" / "prompts";
  REQUIRE(std::filesystem::exists(pack_dir));
  PromptPack from_files = PromptPack::load_dir(pack_dir);
  PromptPack defaults = PromptPack::defaults();
  PromptContext ctx = fixture_ctx();
  for (auto p : {PlanningStrategy::Base, PlanningStrategy::ImprovedBase,
                 PlanningStrategy::StructuredReasoning})
    CHECK(from_files.render_planning(p, ctx) == defaults.render_planning(p, ctx));
  for (auto c : {CommStrategy::Base, CommStrategy::C1, CommStrategy::C2, CommStrategy::C3,
                 CommStrategy::C4})
    CHECK(from_files.render_comm(c, ctx) == defaults.render_comm(c, ctx));
  for (auto a : {ActionStrategy::Base, ActionStrategy::OneShot})
    CHECK(from_files.render_action(a, ctx) == defaults.render_action(a, ctx));

  // An override with a bad token surfaces as an unresolved-placeholder error.
  auto tmp = std::filesystem::temp_directory_path() / "coop_bad_pack";
  std::filesystem::create_directories(tmp);
  {
    std::ofstream out(tmp / "planning_base.txt", std::ios::binary);
    out << "Goal: $GOAL$ but also $BOGUS$\n";
  }
  PromptPack bad = PromptPack::load_dir(tmp);
  CHECK_THROWS_AS(bad.render_planning(PlanningStrategy::Base, ctx), PromptError);
  std::filesystem::remove_all(tmp);
}

TEST_CASE("the nine default combos carry the reference row names") {
  const auto& combos = default_combos();
  REQUIRE(combos.size() == 9);
  std::vector<std::string> names;
  for (const auto& c : combos) names.push_back(c.name());
  CHECK(names == std::vector<std::string>{
                     "Base",
                     "Base + Cprompt1",
                     "Base + Cprompt2",
                     "Base + Cprompt3",
                     "Base + Cprompt4",
                     "Improved Base",
                     "Improved Base + Cprompt1",
                     "Improved Base + Cprompt4",
                     "Base + Cprompt4 + action one shot",
                 });
}
