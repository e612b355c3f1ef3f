#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coop/llm.hpp"
#include "coop/prompts.hpp"
#include "coop/world.hpp"

namespace coop {

struct Observation {
  RoomId room;
  std::vector<std::pair<ObjectId, std::string>> visible_objects;  // (id, class)
  std::vector<ContainerId> visible_containers;
  bool other_agent_present = false;
  int tick = 0;
};

struct Message {
  AgentId from;
  AgentId to;
  int tick = 0;
  std::string text;
};

enum class EpisodeEventKind { Observed, ActionChosen, MessageSent, MessageReceived };

struct EpisodeEvent {
  int tick = 0;
  EpisodeEventKind kind = EpisodeEventKind::Observed;
  std::string speaker;  // message events only
  std::string text;
};

struct SemanticEntry {
  RoomId room;
  std::string class_name;
  int last_seen_tick = 0;
};

// Three-level store. The procedural level is the expand_action script table
// and is shared, not copied.
struct Memory {
  std::map<ObjectId, SemanticEntry> semantic;
  std::vector<EpisodeEvent> episodic;  // append-only, ordered by tick

  int last_tick() const { return episodic.empty() ? -1 : episodic.back().tick; }
};

// Pure snapshot of the agent's room: objects lying in the room or in its
// (open) containers, the containers themselves, and whether the partner is
// physically present. Agents mid-edge are visible nowhere.
Observation perceive(const World& w, const AgentId& agent);

// Applies an observation plus drained inbox. Inbox events are appended in
// (tick, sender) order before the observation digest; newer sightings win
// in the semantic map. Throws AgentError on an out-of-order observation.
void update_memory(Memory& memory, const Observation& obs, const std::vector<Message>& inbox);

PromptContext build_context(const Memory& memory, const GoalSpec& goal, const Progress& progress,
                            const std::vector<HighLevelAction>& actions,
                            const std::string& self_name, const std::string& oppo_name);

enum class MatchKind { Exact, Fuzzy, Fallback };

struct MatchResult {
  HighLevelAction chosen;
  MatchKind kind = MatchKind::Fallback;
  double score = 0.0;
};

// Total function. Cascade: exact letter/display equality after
// normalization, then best token-set Jaccard >= 0.5 (ties to list order),
// then the list's Wait action.
MatchResult parse_action_choice(const std::string& raw,
                                const std::vector<HighLevelAction>& actions);

// Lowercase, non-[a-z0-9_] mapped to space, whitespace collapsed.
std::string normalize_for_match(std::string_view s);
double token_jaccard(std::string_view a, std::string_view b);

struct DecisionTrace {
  int tick = 0;
  std::string agent;
  std::string planning_prompt;
  std::string planning_raw;
  std::string chosen_display;
  MatchKind match_kind = MatchKind::Fallback;
  double match_score = 0.0;
  std::optional<std::string> comm_prompt;
  std::optional<std::string> comm_raw;
  std::optional<std::string> message_text;
};

struct Decision {
  HighLevelAction action;
  std::optional<std::string> message_text;  // set when action is SendMessage
  DecisionTrace trace;
};

// One planning call; a second communication call when SendMessage wins.
// The message text is the cleaned model output. `request_template` supplies
// model and sampling settings; its prompt field is ignored.
Decision decide(const PromptContext& ctx, const std::vector<HighLevelAction>& actions,
                const StrategyCombo& strategies, Backend& backend, const PromptPack& pack,
                const LlmRequest& request_template);

}  // namespace coop
