#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coop/errors.hpp"

namespace coop {

enum class PlanningStrategy { Base, ImprovedBase, StructuredReasoning };
enum class CommStrategy { Base, C1, C2, C3, C4 };
enum class ActionStrategy { Base, OneShot };

struct StrategyCombo {
  PlanningStrategy planning = PlanningStrategy::Base;
  CommStrategy comm = CommStrategy::Base;
  ActionStrategy action = ActionStrategy::Base;

  bool operator==(const StrategyCombo&) const = default;

  // Human-readable row label, e.g. "Improved Base + Cprompt4" or
  // "Base + Cprompt4 + action one shot".
  std::string name() const;
  // Filesystem-safe variant of name().
  std::string slug() const;
};

// The nine benchmark rows, in table order.
const std::vector<StrategyCombo>& default_combos();

std::string to_string(PlanningStrategy s);
std::string to_string(CommStrategy s);
std::string to_string(ActionStrategy s);
PlanningStrategy planning_from_string(const std::string& s);
CommStrategy comm_from_string(const std::string& s);
ActionStrategy action_from_string(const std::string& s);

// Everything a prompt template can reference.
struct PromptContext {
  std::string agent_name;
  std::string oppo_name;
  std::string goal_text;
  std::string progress_text;
  std::vector<std::pair<std::string, std::string>> dialogue_history;  // (speaker, text)
  std::vector<std::string> action_history;                            // display texts
  std::vector<std::pair<std::string, std::string>> available_actions; // (letter, display)
};

// "A".."Z", then "AA", "AB", ... (bijective base 26).
std::string option_label(std::size_t index);

// Replaces $UPPER_SNAKE$ tokens. Throws PromptError when the template uses a
// token missing from `vars`, or when a token survives into the output.
std::string substitute(std::string_view tmpl, const std::map<std::string, std::string>& vars);

// Template set for the three prompt kinds. Defaults are embedded; load_dir()
// overrides individual pieces from UTF-8 files (see README for file names).
class PromptPack {
 public:
  static PromptPack defaults();
  static PromptPack load_dir(const std::filesystem::path& dir);

  std::string render_planning(PlanningStrategy s, const PromptContext& ctx) const;
  std::string render_comm(CommStrategy s, const PromptContext& ctx) const;
  std::string render_action(ActionStrategy s, const PromptContext& ctx) const;

  // Format-and-example block the agent appends to the planning prompt when
  // the action strategy is OneShot.
  std::string one_shot_suffix() const;

  // Building blocks, exposed so tests and tooling can verify composition.
  const std::string& comm_example_block(CommStrategy s) const;
  const std::string& comm_instruction(CommStrategy s) const;

 private:
  std::string planning_base_;
  std::string planning_improved_;
  std::string planning_structured_;
  std::string comm_skeleton_;
  std::string comm_instruction_base_;
  std::string comm_instruction_concise_;  // Cprompt1
  std::string comm_example_one_shot_;     // Cprompt2
  std::string comm_example_multi_shot_;   // Cprompt3
  std::string action_base_;
  std::string action_one_shot_example_;

  std::string render_comm_parts(const std::string& example, const std::string& instruction,
                                const PromptContext& ctx) const;
};

// Rendering helpers shared with the agent module.
std::string render_dialogue_lines(const PromptContext& ctx);
std::string render_action_history_lines(const PromptContext& ctx);
std::string render_available_action_lines(const PromptContext& ctx);

}  // namespace coop
