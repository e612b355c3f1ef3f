#include "coop/world.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "coop/rng.hpp"
#include "json.hpp"

namespace coop {

namespace {

std::pair<RoomId, RoomId> edge_key(const RoomId& a, const RoomId& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

void RoomGraph::add_room(const RoomId& r) {
  if (!has_room(r)) rooms_.push_back(r);
}

void RoomGraph::add_edge(const RoomId& a, const RoomId& b, int length) {
  if (!has_room(a) || !has_room(b))
    throw SpecError("edge references unknown room: " + a + " -- " + b);
  if (length < 1) throw SpecError("edge length must be >= 1: " + a + " -- " + b);
  edges_[edge_key(a, b)] = length;
}

bool RoomGraph::has_room(const RoomId& r) const {
  return std::find(rooms_.begin(), rooms_.end(), r) != rooms_.end();
}

int RoomGraph::edge_length(const RoomId& a, const RoomId& b) const {
  auto it = edges_.find(edge_key(a, b));
  return it == edges_.end() ? 0 : it->second;
}

std::vector<RoomId> RoomGraph::neighbors(const RoomId& r) const {
  std::vector<RoomId> out;
  for (const auto& [key, len] : edges_) {
    (void)len;
    if (key.first == r) out.push_back(key.second);
    if (key.second == r) out.push_back(key.first);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool RoomGraph::connected() const {
  if (rooms_.empty()) return false;
  std::set<RoomId> seen{rooms_.front()};
  std::queue<RoomId> frontier;
  frontier.push(rooms_.front());
  while (!frontier.empty()) {
    RoomId r = frontier.front();
    frontier.pop();
    for (const auto& n : neighbors(r)) {
      if (seen.insert(n).second) frontier.push(n);
    }
  }
  return seen.size() == rooms_.size();
}

const ObjectInstance* World::find_object(const ObjectId& id) const {
  for (const auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

ObjectInstance* World::find_object(const ObjectId& id) {
  for (auto& o : objects)
    if (o.id == id) return &o;
  return nullptr;
}

const AgentBody* World::find_agent(const AgentId& id) const {
  for (const auto& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

AgentBody* World::find_agent(const AgentId& id) {
  for (auto& a : agents)
    if (a.id == id) return &a;
  return nullptr;
}

const Container* World::find_container(const ContainerId& id) const {
  for (const auto& c : containers)
    if (c.id == id) return &c;
  return nullptr;
}

std::optional<RoomId> World::object_room(const ObjectInstance& obj) const {
  if (const auto* in_room = std::get_if<InRoom>(&obj.location)) return in_room->room;
  if (const auto* in_cont = std::get_if<InContainer>(&obj.location)) {
    const Container* c = find_container(in_cont->container);
    if (c) return c->room;
  }
  return std::nullopt;
}

std::string display_explore(const RoomId& room) { return "explore the " + room; }

std::string display_go_grab(const ObjectId& id, const std::string& class_name) {
  return "go grab " + id + " (" + class_name + ")";
}

std::string display_go_put(const ContainerId& id) {
  return "go put carried objects into " + id;
}

std::string display_send_message(const std::string& oppo_name) {
  return "send a message to " + oppo_name;
}

std::string display_wait() { return "wait"; }

World build_world(const TaskSpec& task, std::uint64_t seed, int agent_count) {
  validate_task(task);
  if (agent_count < 1 || agent_count > 2)
    throw SpecError("agent_count must be 1 or 2");

  World w;
  w.seed = seed;
  for (const auto& r : task.rooms) w.graph.add_room(r);
  for (const auto& e : task.edges) w.graph.add_edge(e.a, e.b, e.length);
  if (!w.graph.connected()) throw SpecError("room graph is not connected: " + task.id);

  for (const auto& c : task.containers) w.containers.push_back({c.id, c.room});

  // Placement draws one value per object, in spec order, from a single
  // splitmix64 stream; this is the cross-implementation contract.
  SplitMix64 rng(seed);
  for (const auto& spec : task.objects) {
    for (int i = 1; i <= spec.count; ++i) {
      RoomId room = spec.placement_hint.empty()
                        ? task.rooms[rng.below(task.rooms.size())]
                        : spec.placement_hint;
      std::ostringstream id;
      id << spec.class_name << "_" << i;
      w.objects.push_back({id.str(), spec.class_name, InRoom{room}});
    }
  }

  for (const auto& g : task.goal)
    w.goal.requirements.push_back({g.class_name, g.count, g.container});
  w.goal.description = task.goal_description;

  static const char* kNames[] = {"Alice", "Bob"};
  for (int i = 0; i < agent_count; ++i)
    w.agents.push_back({kNames[i], kNames[i], task.rooms.front(), {}, std::nullopt});

  w.tick = 0;
  return w;
}

namespace {

// True when the object already sits in the container its requirement
// targets; such objects are no longer offered for grabbing.
bool already_deposited(const World& w, const ObjectInstance& obj) {
  const auto* in_cont = std::get_if<InContainer>(&obj.location);
  if (!in_cont) return false;
  for (const auto& req : w.goal.requirements) {
    if (req.class_name == obj.class_name && req.container == in_cont->container)
      return true;
  }
  return false;
}

bool is_goal_class(const World& w, const std::string& class_name) {
  for (const auto& req : w.goal.requirements)
    if (req.class_name == class_name) return true;
  return false;
}

}  // namespace

std::vector<HighLevelAction> available_actions(const World& w, const AgentId& agent) {
  const AgentBody* body = w.find_agent(agent);
  if (!body) throw WorldError("unknown agent: " + agent);
  if (body->transit) throw WorldError("agent in transit cannot act: " + agent);

  std::vector<HighLevelAction> out;

  std::vector<RoomId> rooms = w.graph.rooms();
  std::sort(rooms.begin(), rooms.end());
  for (const auto& r : rooms)
    out.push_back({ActionKind::Explore, r, display_explore(r)});

  if ((int)body->held.size() < kHandSlots) {
    std::vector<const ObjectInstance*> grabbable;
    for (const auto& obj : w.objects) {
      if (!is_goal_class(w, obj.class_name)) continue;
      if (std::holds_alternative<InHand>(obj.location)) continue;
      if (already_deposited(w, obj)) continue;
      grabbable.push_back(&obj);
    }
    std::sort(grabbable.begin(), grabbable.end(),
              [](const ObjectInstance* a, const ObjectInstance* b) { return a->id < b->id; });
    for (const auto* obj : grabbable)
      out.push_back({ActionKind::GoGrab, obj->id, display_go_grab(obj->id, obj->class_name)});
  }

  if (!body->held.empty()) {
    std::vector<ContainerId> targets;
    for (const auto& req : w.goal.requirements) targets.push_back(req.container);
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (const auto& c : targets)
      out.push_back({ActionKind::GoPut, c, display_go_put(c)});
  }

  for (const auto& other : w.agents) {
    if (other.id != agent) {
      out.push_back({ActionKind::SendMessage, "", display_send_message(other.name)});
      break;
    }
  }

  out.push_back({ActionKind::Wait, "", display_wait()});
  return out;
}

std::vector<RoomId> shortest_path(const RoomGraph& g, const RoomId& from, const RoomId& to) {
  if (!g.has_room(from) || !g.has_room(to))
    throw WorldError("shortest_path: unknown room");
  if (from == to) return {from};

  // Dijkstra from the target, then walk forward always taking the smallest
  // room that stays on a shortest path; this yields the unique
  // lexicographically smallest room sequence.
  std::map<RoomId, int> dist;
  for (const auto& r : g.rooms()) dist[r] = std::numeric_limits<int>::max();
  dist[to] = 0;
  using Entry = std::pair<int, RoomId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  pq.push({0, to});
  while (!pq.empty()) {
    auto [d, r] = pq.top();
    pq.pop();
    if (d > dist[r]) continue;
    for (const auto& n : g.neighbors(r)) {
      int nd = d + g.edge_length(r, n);
      if (nd < dist[n]) {
        dist[n] = nd;
        pq.push({nd, n});
      }
    }
  }
  if (dist[from] == std::numeric_limits<int>::max())
    throw WorldError("no path between " + from + " and " + to);

  std::vector<RoomId> path{from};
  RoomId cur = from;
  while (cur != to) {
    for (const auto& n : g.neighbors(cur)) {  // neighbors() is sorted
      if (dist[n] != std::numeric_limits<int>::max() &&
          g.edge_length(cur, n) + dist[n] == dist[cur]) {
        path.push_back(n);
        cur = n;
        break;
      }
    }
  }
  return path;
}

int path_ticks(const RoomGraph& g, const std::vector<RoomId>& path) {
  int total = 0;
  for (std::size_t i = 1; i < path.size(); ++i)
    total += g.edge_length(path[i - 1], path[i]);
  return total;
}

std::vector<Primitive> expand_action(const World& w, const AgentId& agent,
                                     const HighLevelAction& action) {
  const AgentBody* body = w.find_agent(agent);
  if (!body) throw WorldError("unknown agent: " + agent);

  auto walk_to = [&](const RoomId& dest) {
    std::vector<Primitive> prims;
    auto path = shortest_path(w.graph, body->room, dest);
    for (std::size_t i = 1; i < path.size(); ++i) {
      int len = w.graph.edge_length(path[i - 1], path[i]);
      for (int t = 0; t < len; ++t) prims.push_back({PrimitiveKind::TraverseEdge, path[i]});
    }
    return prims;
  };

  switch (action.kind) {
    case ActionKind::Wait:
      return {{PrimitiveKind::Idle, ""}};
    case ActionKind::SendMessage:
      return {{PrimitiveKind::Speak, ""}};
    case ActionKind::Explore: {
      if (!w.graph.has_room(action.target))
        throw WorldError("explore: unknown room " + action.target);
      auto prims = walk_to(action.target);
      prims.push_back({PrimitiveKind::Idle, ""});
      return prims;
    }
    case ActionKind::GoGrab: {
      const ObjectInstance* obj = w.find_object(action.target);
      if (!obj) throw WorldError("grab: unknown object " + action.target);
      if (std::holds_alternative<InHand>(obj->location))
        throw WorldError("grab: object already taken: " + action.target);
      if ((int)body->held.size() >= kHandSlots)
        throw WorldError("grab: hands full: " + agent);
      auto room = w.object_room(*obj);
      if (!room) throw WorldError("grab: object unreachable: " + action.target);
      auto prims = walk_to(*room);
      prims.push_back({PrimitiveKind::Grab, obj->id});
      return prims;
    }
    case ActionKind::GoPut: {
      const Container* c = w.find_container(action.target);
      if (!c) throw WorldError("put: unknown container " + action.target);
      if (body->held.empty()) throw WorldError("put: holding nothing: " + agent);
      auto prims = walk_to(c->room);
      prims.push_back({PrimitiveKind::Put, c->id});
      return prims;
    }
  }
  throw WorldError("expand_action: unhandled action");
}

namespace {

void apply_traverse(World& w, AgentBody& agent, const Primitive& p,
                    std::vector<Event>& events) {
  int tick = w.tick;
  if (agent.transit) {
    if (agent.transit->target != p.target)
      throw WorldError("traverse: " + agent.id + " is mid-edge toward " +
                       agent.transit->target + ", not " + p.target);
    agent.transit->remaining_ticks -= 1;
    if (agent.transit->remaining_ticks == 0) {
      agent.room = agent.transit->target;
      agent.transit.reset();
      events.push_back({tick, agent.id, EventKind::Arrived, "", "", agent.room, ""});
    } else {
      events.push_back({tick, agent.id, EventKind::Transit, "", "", p.target,
                        std::to_string(agent.transit->remaining_ticks) + " ticks left"});
    }
    return;
  }
  int len = w.graph.edge_length(agent.room, p.target);
  if (len == 0) throw WorldError("traverse: no edge " + agent.room + " -> " + p.target);
  if (len == 1) {
    agent.room = p.target;
    events.push_back({tick, agent.id, EventKind::Arrived, "", "", agent.room, ""});
  } else {
    agent.transit = Transit{p.target, len - 1};
    events.push_back({tick, agent.id, EventKind::Transit, "", "", p.target,
                      std::to_string(len - 1) + " ticks left"});
  }
}

void apply_grab(World& w, AgentBody& agent, const ObjectId& target,
                std::vector<Event>& events) {
  int tick = w.tick;
  ObjectInstance* obj = w.find_object(target);
  if (!obj) {
    events.push_back({tick, agent.id, EventKind::GrabFailed, target, "", "", "unknown object"});
    return;
  }
  if (std::holds_alternative<InHand>(obj->location)) {
    events.push_back({tick, agent.id, EventKind::GrabFailed, target, "", "", "already taken"});
    return;
  }
  auto room = w.object_room(*obj);
  if (!room || *room != agent.room) {
    events.push_back({tick, agent.id, EventKind::GrabFailed, target, "", "", "not here"});
    return;
  }
  if ((int)agent.held.size() >= kHandSlots) {
    events.push_back({tick, agent.id, EventKind::GrabFailed, target, "", "", "hands full"});
    return;
  }
  obj->location = InHand{agent.id, (int)agent.held.size()};
  agent.held.push_back(obj->id);
  events.push_back({tick, agent.id, EventKind::Grabbed, target, "", agent.room, ""});
}

void apply_put(World& w, AgentBody& agent, const ContainerId& target,
               std::vector<Event>& events) {
  int tick = w.tick;
  const Container* c = w.find_container(target);
  if (!c || c->room != agent.room || agent.held.empty()) {
    events.push_back({tick, agent.id, EventKind::PutFailed, "", target, agent.room,
                      !c ? "unknown container" : (agent.held.empty() ? "holding nothing" : "not here")});
    return;
  }
  // Deposits everything carried; a container has unbounded capacity.
  for (const auto& id : agent.held) {
    ObjectInstance* obj = w.find_object(id);
    obj->location = InContainer{c->id};
    events.push_back({tick, agent.id, EventKind::Deposited, id, c->id, agent.room, ""});
  }
  agent.held.clear();
}

}  // namespace

std::vector<Event> step(World& w, const std::map<AgentId, Primitive>& moves) {
  if (w.tick >= w.max_ticks) throw WorldError("tick budget exhausted");
  if (moves.size() != w.agents.size())
    throw WorldError("step: every agent needs exactly one primitive");
  for (const auto& [id, p] : moves) {
    (void)p;
    if (!w.find_agent(id)) throw WorldError("step: unknown agent " + id);
  }

  std::vector<Event> events;

  // Resolve simultaneous grabs of the same object: the lexicographically
  // smaller AgentId wins, every other contender fails this tick.
  std::set<AgentId> grab_losers;
  std::map<ObjectId, AgentId> grab_winner;
  for (const auto& [id, p] : moves) {
    if (p.kind != PrimitiveKind::Grab) continue;
    auto it = grab_winner.find(p.target);
    if (it == grab_winner.end()) {
      grab_winner[p.target] = id;
    } else if (id < it->second) {
      grab_losers.insert(it->second);
      it->second = id;
    } else {
      grab_losers.insert(id);
    }
  }

  // Apply in AgentId order for a deterministic event sequence.
  std::vector<AgentId> order;
  for (const auto& [id, p] : moves) {
    (void)p;
    order.push_back(id);
  }
  std::sort(order.begin(), order.end());

  for (const auto& id : order) {
    AgentBody& agent = *w.find_agent(id);
    const Primitive& p = moves.at(id);
    switch (p.kind) {
      case PrimitiveKind::Idle:
        break;
      case PrimitiveKind::Speak:
        events.push_back({w.tick, id, EventKind::Spoke, "", "", agent.room, ""});
        break;
      case PrimitiveKind::TraverseEdge:
        apply_traverse(w, agent, p, events);
        break;
      case PrimitiveKind::Grab:
        if (grab_losers.count(id)) {
          events.push_back({w.tick, id, EventKind::GrabFailed, p.target, "", "", "grab conflict"});
        } else {
          apply_grab(w, agent, p.target, events);
        }
        break;
      case PrimitiveKind::Put:
        apply_put(w, agent, p.target, events);
        break;
    }
  }

  w.tick += 1;
  return events;
}

namespace {

int deposited_count(const World& w, const GoalRequirement& req) {
  int n = 0;
  for (const auto& obj : w.objects) {
    if (obj.class_name != req.class_name) continue;
    const auto* in_cont = std::get_if<InContainer>(&obj.location);
    if (in_cont && in_cont->container == req.container) ++n;
  }
  return std::min(n, req.count);
}

std::string plural(const std::string& noun, int n) {
  return n == 1 ? noun : noun + "s";
}

}  // namespace

Progress goal_progress(const World& w) {
  Progress p;
  std::vector<std::string> remaining;
  for (const auto& req : w.goal.requirements) {
    int done = deposited_count(w, req);
    p.satisfied += done;
    p.required += req.count;
    int left = req.count - done;
    if (left > 0)
      remaining.push_back(std::to_string(left) + " " + plural(req.class_name, left));
  }

  std::ostringstream text;
  text << "Transported " << p.satisfied << " of " << p.required << " target objects; ";
  if (remaining.empty()) {
    text << "task complete.";
  } else {
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (i > 0) text << (i + 1 == remaining.size() ? " and " : ", ");
      text << remaining[i];
    }
    text << " remaining.";
  }
  p.text = text.str();
  return p;
}

bool is_complete(const World& w) {
  for (const auto& req : w.goal.requirements)
    if (deposited_count(w, req) < req.count) return false;
  return true;
}

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Arrived: return "arrived";
    case EventKind::Transit: return "transit";
    case EventKind::Grabbed: return "grabbed";
    case EventKind::GrabFailed: return "grab_failed";
    case EventKind::Deposited: return "deposited";
    case EventKind::PutFailed: return "put_failed";
    case EventKind::Spoke: return "spoke";
  }
  return "unknown";
}

std::string event_to_json_line(const Event& e) {
  nlohmann::json payload;
  if (!e.object.empty()) payload["object"] = e.object;
  if (!e.container.empty()) payload["container"] = e.container;
  if (!e.room.empty()) payload["room"] = e.room;
  if (!e.detail.empty()) payload["detail"] = e.detail;
  nlohmann::json j{{"tick", e.tick},
                   {"agent", e.agent},
                   {"event_kind", event_kind_name(e.kind)},
                   {"payload", payload}};
  return j.dump();
}

}  // namespace coop
