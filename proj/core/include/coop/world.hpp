#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coop/errors.hpp"
#include "coop/task.hpp"

namespace coop {

using RoomId = std::string;
using ObjectId = std::string;
using ContainerId = std::string;
using AgentId = std::string;

inline constexpr int kDefaultMaxTicks = 250;
inline constexpr int kHandSlots = 2;

// Undirected room graph with integer edge lengths (ticks to traverse).
class RoomGraph {
 public:
  void add_room(const RoomId& r);
  void add_edge(const RoomId& a, const RoomId& b, int length);

  bool has_room(const RoomId& r) const;
  // 0 when no such edge.
  int edge_length(const RoomId& a, const RoomId& b) const;
  std::vector<RoomId> neighbors(const RoomId& r) const;  // sorted
  const std::vector<RoomId>& rooms() const { return rooms_; }
  bool connected() const;

 private:
  std::vector<RoomId> rooms_;  // insertion order
  std::map<std::pair<RoomId, RoomId>, int> edges_;  // key: (min, max)
};

struct InRoom {
  RoomId room;
};
struct InContainer {
  ContainerId container;
};
struct InHand {
  AgentId agent;
  int slot = 0;
};
using ObjectLocation = std::variant<InRoom, InContainer, InHand>;

struct ObjectInstance {
  ObjectId id;
  std::string class_name;
  ObjectLocation location;
};

struct Container {
  ContainerId id;
  RoomId room;
};

struct Transit {
  RoomId target;
  int remaining_ticks = 0;  // >= 1 while engaged
};

struct AgentBody {
  AgentId id;
  std::string name;
  RoomId room;
  std::vector<ObjectId> held;  // at most kHandSlots
  std::optional<Transit> transit;
};

struct GoalRequirement {
  std::string class_name;
  int count = 0;
  ContainerId container;
};

struct GoalSpec {
  std::vector<GoalRequirement> requirements;
  std::string description;
};

enum class ActionKind { Explore, GoGrab, GoPut, SendMessage, Wait };

struct HighLevelAction {
  ActionKind kind = ActionKind::Wait;
  std::string target;  // room / object / container id; empty for SendMessage and Wait
  std::string display_text;

  bool operator==(const HighLevelAction&) const = default;
};

enum class PrimitiveKind { TraverseEdge, Grab, Put, Speak, Idle };

// One primitive consumes exactly one tick. TraverseEdge advances one tick
// along the edge toward `target`; an edge of length L takes L of them.
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::Idle;
  std::string target;  // next room / object / container, per kind

  bool operator==(const Primitive&) const = default;
};

enum class EventKind {
  Arrived,
  Transit,
  Grabbed,
  GrabFailed,
  Deposited,
  PutFailed,
  Spoke
};

struct Event {
  int tick = 0;
  AgentId agent;
  EventKind kind = EventKind::Arrived;
  std::string object;
  std::string container;
  std::string room;
  std::string detail;  // failure reason, transit countdown, ...
};

std::string event_kind_name(EventKind k);
// Line-delimited JSON record: {"tick","agent","event_kind","payload"}.
std::string event_to_json_line(const Event& e);

struct Progress {
  int satisfied = 0;
  int required = 0;
  std::string text;
};

struct World {
  RoomGraph graph;
  std::vector<ObjectInstance> objects;
  std::vector<Container> containers;
  std::vector<AgentBody> agents;
  GoalSpec goal;
  int tick = 0;
  std::uint64_t seed = 0;
  int max_ticks = kDefaultMaxTicks;

  const ObjectInstance* find_object(const ObjectId& id) const;
  ObjectInstance* find_object(const ObjectId& id);
  const AgentBody* find_agent(const AgentId& id) const;
  AgentBody* find_agent(const AgentId& id);
  const Container* find_container(const ContainerId& id) const;

  // Room an object can be reached in: its own room, or its container's
  // room. Empty when the object is in someone's hand.
  std::optional<RoomId> object_room(const ObjectInstance& obj) const;
};

// Deterministic construction: placement is a pure function of (task, seed).
// `agent_count` is 2 for collaborative episodes, 1 for single-agent runs.
World build_world(const TaskSpec& task, std::uint64_t seed, int agent_count = 2);

// Ground-truth enumeration, sorted by (kind, target). SendMessage appears
// only when a partner agent exists; GoPut only while holding something;
// GoGrab only for goal-class objects that are not in a hand and not already
// deposited where their requirement wants them.
std::vector<HighLevelAction> available_actions(const World& w, const AgentId& agent);

// Procedural script table: turns one high-level action into a primitive
// sequence (shortest path expansion, one primitive per tick).
std::vector<Primitive> expand_action(const World& w, const AgentId& agent,
                                     const HighLevelAction& action);

// Applies one primitive per agent simultaneously and advances the tick.
// Grab conflicts resolve to the lexicographically smaller AgentId; the
// loser gets a GrabFailed event.
std::vector<Event> step(World& w, const std::map<AgentId, Primitive>& moves);

Progress goal_progress(const World& w);
bool is_complete(const World& w);

// Lexicographically smallest shortest path, endpoints included.
std::vector<RoomId> shortest_path(const RoomGraph& g, const RoomId& from, const RoomId& to);
int path_ticks(const RoomGraph& g, const std::vector<RoomId>& path);

// Canonical display strings shown in prompts.
std::string display_explore(const RoomId& room);
std::string display_go_grab(const ObjectId& id, const std::string& class_name);
std::string display_go_put(const ContainerId& id);
std::string display_send_message(const std::string& oppo_name);
std::string display_wait();

}  // namespace coop
