#include "coop/agent.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "coop/transcript.hpp"

namespace coop {

Observation perceive(const World& w, const AgentId& agent) {
  const AgentBody* body = w.find_agent(agent);
  if (!body) throw WorldError("unknown agent: " + agent);

  Observation obs;
  obs.room = body->room;
  obs.tick = w.tick;

  for (const auto& obj : w.objects) {
    auto room = w.object_room(obj);
    if (room && *room == body->room) obs.visible_objects.emplace_back(obj.id, obj.class_name);
  }
  std::sort(obs.visible_objects.begin(), obs.visible_objects.end());

  for (const auto& c : w.containers)
    if (c.room == body->room) obs.visible_containers.push_back(c.id);
  std::sort(obs.visible_containers.begin(), obs.visible_containers.end());

  for (const auto& other : w.agents) {
    if (other.id != agent && !other.transit && other.room == body->room)
      obs.other_agent_present = true;
  }
  return obs;
}

namespace {

std::string observation_digest(const Observation& obs) {
  std::ostringstream out;
  out << obs.room << ": ";
  if (obs.visible_objects.empty()) {
    out << "(no objects)";
  } else {
    for (std::size_t i = 0; i < obs.visible_objects.size(); ++i) {
      if (i > 0) out << ", ";
      out << obs.visible_objects[i].first << " (" << obs.visible_objects[i].second << ")";
    }
  }
  return out.str();
}

}  // namespace

void update_memory(Memory& memory, const Observation& obs, const std::vector<Message>& inbox) {
  if (obs.tick < memory.last_tick())
    throw AgentError("out-of-order observation: tick " + std::to_string(obs.tick) +
                     " after " + std::to_string(memory.last_tick()));

  std::vector<Message> sorted = inbox;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Message& a, const Message& b) {
    return std::tie(a.tick, a.from) < std::tie(b.tick, b.from);
  });
  for (const auto& msg : sorted)
    memory.episodic.push_back({msg.tick, EpisodeEventKind::MessageReceived, msg.from, msg.text});

  for (const auto& [id, class_name] : obs.visible_objects) {
    auto it = memory.semantic.find(id);
    if (it == memory.semantic.end() || it->second.last_seen_tick <= obs.tick)
      memory.semantic[id] = {obs.room, class_name, obs.tick};
  }

  memory.episodic.push_back(
      {obs.tick, EpisodeEventKind::Observed, "", observation_digest(obs)});
}

PromptContext build_context(const Memory& memory, const GoalSpec& goal, const Progress& progress,
                            const std::vector<HighLevelAction>& actions,
                            const std::string& self_name, const std::string& oppo_name) {
  if (actions.empty()) throw AgentError("build_context: empty action list");

  PromptContext ctx;
  ctx.agent_name = self_name;
  ctx.oppo_name = oppo_name;
  ctx.goal_text = goal.description;
  ctx.progress_text = progress.text;

  for (const auto& ev : memory.episodic) {
    switch (ev.kind) {
      case EpisodeEventKind::MessageSent:
        ctx.dialogue_history.emplace_back(self_name, ev.text);
        break;
      case EpisodeEventKind::MessageReceived:
        ctx.dialogue_history.emplace_back(ev.speaker, ev.text);
        break;
      case EpisodeEventKind::ActionChosen:
        ctx.action_history.push_back(ev.text);
        break;
      case EpisodeEventKind::Observed:
        break;
    }
  }

  for (std::size_t i = 0; i < actions.size(); ++i)
    ctx.available_actions.emplace_back(option_label(i), actions[i].display_text);
  return ctx;
}

std::string normalize_for_match(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    unsigned char uc = static_cast<unsigned char>(c);
    char mapped;
    if (std::isalnum(uc)) {
      mapped = static_cast<char>(std::tolower(uc));
    } else if (c == '_') {
      mapped = '_';
    } else {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(mapped);
  }
  return out;
}

namespace {

std::set<std::string> token_set(std::string_view normalized) {
  std::set<std::string> tokens;
  std::istringstream in{std::string(normalized)};
  std::string t;
  while (in >> t) tokens.insert(t);
  return tokens;
}

}  // namespace

double token_jaccard(std::string_view a, std::string_view b) {
  auto ta = token_set(normalize_for_match(a));
  auto tb = token_set(normalize_for_match(b));
  if (ta.empty() && tb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : ta) common += tb.count(t);
  std::size_t total = ta.size() + tb.size() - common;
  return total == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(total);
}

MatchResult parse_action_choice(const std::string& raw,
                                const std::vector<HighLevelAction>& actions) {
  if (actions.empty()) throw AgentError("parse_action_choice: empty action list");

  std::string norm = normalize_for_match(raw);

  for (std::size_t i = 0; i < actions.size(); ++i) {
    std::string label = normalize_for_match(option_label(i));
    if (norm == label || norm == normalize_for_match(actions[i].display_text))
      return {actions[i], MatchKind::Exact, 1.0};
  }

  double best = -1.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    double score = token_jaccard(raw, actions[i].display_text);
    if (score > best) {
      best = score;
      best_index = i;
    }
  }
  if (best >= 0.5) return {actions[best_index], MatchKind::Fuzzy, best};

  for (const auto& a : actions)
    if (a.kind == ActionKind::Wait) return {a, MatchKind::Fallback, std::max(best, 0.0)};
  return {actions.front(), MatchKind::Fallback, std::max(best, 0.0)};
}

Decision decide(const PromptContext& ctx, const std::vector<HighLevelAction>& actions,
                const StrategyCombo& strategies, Backend& backend, const PromptPack& pack,
                const LlmRequest& request_template) {
  if (actions.size() != ctx.available_actions.size())
    throw AgentError("decide: context and action list disagree");

  std::string prompt = pack.render_planning(strategies.planning, ctx);
  if (strategies.action == ActionStrategy::OneShot)
    prompt += "\n" + pack.one_shot_suffix() + "\n";

  LlmRequest req = request_template;
  req.prompt = prompt;
  LlmResponse resp = backend.generate(req);
  MatchResult match = parse_action_choice(resp.text, actions);

  Decision d;
  d.action = match.chosen;
  d.trace.planning_prompt = prompt;
  d.trace.planning_raw = resp.text;
  d.trace.chosen_display = match.chosen.display_text;
  d.trace.match_kind = match.kind;
  d.trace.match_score = match.score;

  if (match.chosen.kind == ActionKind::SendMessage) {
    std::string comm_prompt = pack.render_comm(strategies.comm, ctx);
    LlmRequest creq = request_template;
    creq.prompt = comm_prompt;
    LlmResponse cresp = backend.generate(creq);
    std::string text = clean_text(cresp.text);
    if (text.empty()) text = "(no message)";
    d.message_text = text;
    d.trace.comm_prompt = comm_prompt;
    d.trace.comm_raw = cresp.text;
    d.trace.message_text = text;
  }
  return d;
}

}  // namespace coop
