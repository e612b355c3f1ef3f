// Micro-benchmarks for the hot paths: prompt rendering, reply parsing,
// whole scripted episodes, the t-test, and the cache digest.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "coop/agent.hpp"
#include "coop/metrics.hpp"
#include "coop/rng.hpp"
#include "coop/runner.hpp"
#include "coop/sha256.hpp"

using namespace coop;

namespace {

volatile std::size_t g_sink = 0;

void bench(const char* name, std::size_t iterations, const std::function<void()>& fn) {
  for (std::size_t i = 0; i < iterations / 10 + 1; ++i) fn();  // warmup

  auto started = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < iterations; ++i) fn();
  auto elapsed = std::chrono::steady_clock::now() - started;

  double total_ms = std::chrono::duration<double, std::milli>(elapsed).count();
  double ns_per_op =
      std::chrono::duration<double, std::nano>(elapsed).count() / double(iterations);
  std::printf("%-28s %10zu iters %12.2f ms total %12.0f ns/op\n", name, iterations, total_ms,
              ns_per_op);
}

PromptContext bench_ctx() {
  PromptContext ctx;
  ctx.agent_name = "Alice";
  ctx.oppo_name = "Bob";
  ctx.goal_text = "Put all plates and forks into the bin in the kitchen.";
  ctx.progress_text = "Transported 2 of 5 target objects; 1 plate and 2 forks remaining.";
  for (int i = 0; i < 6; ++i)
    ctx.dialogue_history.emplace_back(i % 2 ? "Bob" : "Alice", "short status update number " +
                                                                   std::to_string(i));
  for (int i = 0; i < 10; ++i) ctx.action_history.push_back("explore the room_" + std::to_string(i));
  for (int i = 0; i < 12; ++i)
    ctx.available_actions.emplace_back(option_label(i), "go grab item_" + std::to_string(i) +
                                                            " (item)");
  return ctx;
}

}  // namespace

int main() {
  PromptPack pack = PromptPack::defaults();
  PromptContext ctx = bench_ctx();

  std::vector<HighLevelAction> actions;
  for (const auto& [label, display] : ctx.available_actions)
    actions.push_back({ActionKind::GoGrab, display, display});
  actions.push_back({ActionKind::Wait, "", "wait"});

  std::vector<double> sample_a, sample_b;
  SplitMix64 rng(7);
  for (int i = 0; i < 30; ++i) {
    sample_a.push_back(40.0 + double(rng.below(600)) / 10.0);
    sample_b.push_back(50.0 + double(rng.below(600)) / 10.0);
  }

  std::string blob(1024, 'x');
  const auto& suite = builtin_task_suite();
  ScriptedBackend backend;
  StrategyCombo combo;
  RunOptions options;

  bench("render_planning", 20000, [&] {
    g_sink += pack.render_planning(PlanningStrategy::StructuredReasoning, ctx).size();
  });
  bench("render_comm_c4", 20000,
        [&] { g_sink += pack.render_comm(CommStrategy::C4, ctx).size(); });
  bench("parse_action_choice", 20000, [&] {
    g_sink += parse_action_choice("go grab the item_3 please", actions).chosen.display_text.size();
  });
  bench("welch_t_30x30", 20000, [&] { g_sink += std::size_t(welch_t(sample_a, sample_b).p * 1e6); });
  bench("sha256_1kb", 20000, [&] { g_sink += sha256_hex(blob).size(); });
  bench("scripted_episode", 200, [&] {
    g_sink += run_episode(suite[0], suite[0].variations[0], combo, "scripted",
                          Mode::Collaborative, 7, backend, pack, options)
                  .metrics.step_count;
  });
  return g_sink == 0 ? 1 : 0;
}
