#include "coop/prompts.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "coop/prompts_defaults.hpp"

namespace coop {

std::string to_string(PlanningStrategy s) {
  switch (s) {
    case PlanningStrategy::Base: return "base";
    case PlanningStrategy::ImprovedBase: return "improved_base";
    case PlanningStrategy::StructuredReasoning: return "structured_reasoning";
  }
  return "base";
}

std::string to_string(CommStrategy s) {
  switch (s) {
    case CommStrategy::Base: return "base";
    case CommStrategy::C1: return "c1";
    case CommStrategy::C2: return "c2";
    case CommStrategy::C3: return "c3";
    case CommStrategy::C4: return "c4";
  }
  return "base";
}

std::string to_string(ActionStrategy s) {
  return s == ActionStrategy::OneShot ? "one_shot" : "base";
}

PlanningStrategy planning_from_string(const std::string& s) {
  if (s == "base") return PlanningStrategy::Base;
  if (s == "improved_base") return PlanningStrategy::ImprovedBase;
  if (s == "structured_reasoning") return PlanningStrategy::StructuredReasoning;
  throw ConfigError("unknown planning strategy: " + s);
}

CommStrategy comm_from_string(const std::string& s) {
  if (s == "base") return CommStrategy::Base;
  if (s == "c1") return CommStrategy::C1;
  if (s == "c2") return CommStrategy::C2;
  if (s == "c3") return CommStrategy::C3;
  if (s == "c4") return CommStrategy::C4;
  throw ConfigError("unknown communication strategy: " + s);
}

ActionStrategy action_from_string(const std::string& s) {
  if (s == "base") return ActionStrategy::Base;
  if (s == "one_shot") return ActionStrategy::OneShot;
  throw ConfigError("unknown action strategy: " + s);
}

std::string StrategyCombo::name() const {
  std::string out;
  switch (planning) {
    case PlanningStrategy::Base: out = "Base"; break;
    case PlanningStrategy::ImprovedBase: out = "Improved Base"; break;
    case PlanningStrategy::StructuredReasoning: out = "Structured Reasoning"; break;
  }
  switch (comm) {
    case CommStrategy::Base: break;
    case CommStrategy::C1: out += " + Cprompt1"; break;
    case CommStrategy::C2: out += " + Cprompt2"; break;
    case CommStrategy::C3: out += " + Cprompt3"; break;
    case CommStrategy::C4: out += " + Cprompt4"; break;
  }
  if (action == ActionStrategy::OneShot) out += " + action one shot";
  return out;
}

std::string StrategyCombo::slug() const {
  return to_string(planning) + "-" + to_string(comm) + "-" + to_string(action);
}

const std::vector<StrategyCombo>& default_combos() {
  using P = PlanningStrategy;
  using C = CommStrategy;
  using A = ActionStrategy;
  static const std::vector<StrategyCombo> combos = {
      {P::Base, C::Base, A::Base},
      {P::Base, C::C1, A::Base},
      {P::Base, C::C2, A::Base},
      {P::Base, C::C3, A::Base},
      {P::Base, C::C4, A::Base},
      {P::ImprovedBase, C::Base, A::Base},
      {P::ImprovedBase, C::C1, A::Base},
      {P::ImprovedBase, C::C4, A::Base},
      {P::Base, C::C4, A::OneShot},
  };
  return combos;
}

std::string option_label(std::size_t index) {
  std::size_t n = index + 1;  // bijective base 26
  std::string out;
  while (n > 0) {
    n -= 1;
    out.insert(out.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return out;
}

namespace {

bool token_shape(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isupper(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
      return false;
  }
  return true;
}

// First $TOKEN$ occurrence at or after `pos`; npos when none.
std::size_t find_token(std::string_view s, std::size_t pos, std::size_t& end,
                       std::string& name) {
  while (pos < s.size()) {
    std::size_t open = s.find('$', pos);
    if (open == std::string_view::npos) return std::string_view::npos;
    std::size_t close = s.find('$', open + 1);
    if (close == std::string_view::npos) return std::string_view::npos;
    std::string_view candidate = s.substr(open + 1, close - open - 1);
    if (token_shape(candidate)) {
      end = close + 1;
      name.assign(candidate);
      return open;
    }
    pos = open + 1;
  }
  return std::string_view::npos;
}

}  // namespace

std::string substitute(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    std::size_t end = 0;
    std::string name;
    std::size_t open = find_token(tmpl, pos, end, name);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    auto it = vars.find(name);
    if (it == vars.end()) throw PromptError("unresolved placeholder $" + name + "$");
    out.append(it->second);
    pos = end;
  }

  // A token-shaped survivor means a context value smuggled one in; treat it
  // the same as an unresolved placeholder.
  std::size_t end = 0;
  std::string name;
  if (find_token(out, 0, end, name) != std::string_view::npos)
    throw PromptError("unresolved placeholder $" + name + "$ in rendered output");
  return out;
}

std::string render_dialogue_lines(const PromptContext& ctx) {
  if (ctx.dialogue_history.empty()) return "(none)";
  std::ostringstream out;
  for (std::size_t i = 0; i < ctx.dialogue_history.size(); ++i) {
    if (i > 0) out << "\n";
    out << ctx.dialogue_history[i].first << ": " << ctx.dialogue_history[i].second;
  }
  return out.str();
}

std::string render_action_history_lines(const PromptContext& ctx) {
  if (ctx.action_history.empty()) return "(none)";
  std::ostringstream out;
  for (std::size_t i = 0; i < ctx.action_history.size(); ++i) {
    if (i > 0) out << "\n";
    out << ctx.action_history[i];
  }
  return out.str();
}

std::string render_available_action_lines(const PromptContext& ctx) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ctx.available_actions.size(); ++i) {
    if (i > 0) out << "\n";
    out << ctx.available_actions[i].first << ". " << ctx.available_actions[i].second;
  }
  return out.str();
}

namespace {

std::map<std::string, std::string> context_vars(const PromptContext& ctx) {
  return {
      {"AGENT_NAME", ctx.agent_name},
      {"OPPO_NAME", ctx.oppo_name},
      {"GOAL", ctx.goal_text},
      {"PROGRESS", ctx.progress_text},
      {"DIALOGUE", render_dialogue_lines(ctx)},
      {"ACTIONS_TAKEN", render_action_history_lines(ctx)},
      {"AVAILABLE_ACTIONS", render_available_action_lines(ctx)},
  };
}

}  // namespace

PromptPack PromptPack::defaults() {
  PromptPack p;
  p.planning_base_ = defaults::kPlanningBase;
  p.planning_improved_ = defaults::kPlanningImproved;
  p.planning_structured_ = defaults::kPlanningStructured;
  p.comm_skeleton_ = defaults::kCommSkeleton;
  p.comm_instruction_base_ = defaults::kCommInstructionBase;
  p.comm_instruction_concise_ = defaults::kCommInstructionConcise;
  p.comm_example_one_shot_ = defaults::kCommExampleOneShot;
  p.comm_example_multi_shot_ = defaults::kCommExampleMultiShot;
  p.action_base_ = defaults::kActionBase;
  p.action_one_shot_example_ = defaults::kActionOneShotExample;
  return p;
}

PromptPack PromptPack::load_dir(const std::filesystem::path& dir) {
  PromptPack p = defaults();
  auto load = [&](const char* file, std::string& into) {
    auto path = dir / file;
    if (!std::filesystem::exists(path)) return;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PromptError("cannot read prompt file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    into = buf.str();
  };
  load("planning_base.txt", p.planning_base_);
  load("planning_improved_base.txt", p.planning_improved_);
  load("planning_structured_reasoning.txt", p.planning_structured_);
  load("comm_skeleton.txt", p.comm_skeleton_);
  load("comm_instruction_base.txt", p.comm_instruction_base_);
  load("comm_instruction_concise.txt", p.comm_instruction_concise_);
  load("comm_example_one_shot.txt", p.comm_example_one_shot_);
  load("comm_example_multi_shot.txt", p.comm_example_multi_shot_);
  load("action_base.txt", p.action_base_);
  load("action_one_shot_example.txt", p.action_one_shot_example_);
  return p;
}

std::string PromptPack::render_planning(PlanningStrategy s, const PromptContext& ctx) const {
  const std::string* tmpl = &planning_base_;
  if (s == PlanningStrategy::ImprovedBase) tmpl = &planning_improved_;
  if (s == PlanningStrategy::StructuredReasoning) tmpl = &planning_structured_;
  return substitute(*tmpl, context_vars(ctx));
}

std::string PromptPack::render_comm_parts(const std::string& example,
                                          const std::string& instruction,
                                          const PromptContext& ctx) const {
  auto vars = context_vars(ctx);
  std::map<std::string, std::string> name_vars = {{"AGENT_NAME", ctx.agent_name},
                                                  {"OPPO_NAME", ctx.oppo_name}};
  std::string example_section;
  if (!example.empty())
    example_section = "Example dialogue:\n" + substitute(example, name_vars) + "\n\n";
  vars["EXAMPLE"] = example_section;
  vars["INSTRUCTION"] = substitute(instruction, name_vars);
  return substitute(comm_skeleton_, vars);
}

std::string PromptPack::render_comm(CommStrategy s, const PromptContext& ctx) const {
  switch (s) {
    case CommStrategy::Base: return render_comm_parts("", comm_instruction_base_, ctx);
    case CommStrategy::C1: return render_comm_parts("", comm_instruction_concise_, ctx);
    case CommStrategy::C2:
      return render_comm_parts(comm_example_one_shot_, comm_instruction_base_, ctx);
    case CommStrategy::C3:
      return render_comm_parts(comm_example_multi_shot_, comm_instruction_base_, ctx);
    case CommStrategy::C4:
      // Compositional by construction: Cprompt2's example in Cprompt1's frame.
      return render_comm_parts(comm_example_one_shot_, comm_instruction_concise_, ctx);
  }
  throw PromptError("unhandled communication strategy");
}

std::string PromptPack::render_action(ActionStrategy s, const PromptContext& ctx) const {
  if (s == ActionStrategy::Base) return substitute(action_base_, context_vars(ctx));
  std::string tmpl = action_one_shot_example_ +
                     "\n\nAvailable actions:\n$AVAILABLE_ACTIONS$\n\n"
                     "Answer with exactly one option letter and nothing else.\n";
  return substitute(tmpl, context_vars(ctx));
}

std::string PromptPack::one_shot_suffix() const { return action_one_shot_example_; }

const std::string& PromptPack::comm_example_block(CommStrategy s) const {
  static const std::string empty;
  switch (s) {
    case CommStrategy::C2:
    case CommStrategy::C4: return comm_example_one_shot_;
    case CommStrategy::C3: return comm_example_multi_shot_;
    default: return empty;
  }
}

const std::string& PromptPack::comm_instruction(CommStrategy s) const {
  switch (s) {
    case CommStrategy::C1:
    case CommStrategy::C4: return comm_instruction_concise_;
    default: return comm_instruction_base_;
  }
}

}  // namespace coop
