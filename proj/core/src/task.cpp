#include "coop/task.hpp"

#include <algorithm>
#include <set>

#include "coop/errors.hpp"

namespace coop {

namespace {

bool single_token(const std::string& s) {
  return !s.empty() && s.find_first_of(" \t\n") == std::string::npos;
}

}  // namespace

void validate_task(const TaskSpec& task) {
  if (task.id.empty()) throw SpecError("task.id is empty");
  if (task.rooms.empty()) throw SpecError(task.id + ": task.rooms is empty");

  std::set<std::string> rooms;
  for (const auto& r : task.rooms) {
    if (!single_token(r)) throw SpecError(task.id + ": room id must be a single token: '" + r + "'");
    if (!rooms.insert(r).second) throw SpecError(task.id + ": duplicate room " + r);
  }
  for (const auto& e : task.edges) {
    if (!rooms.count(e.a) || !rooms.count(e.b))
      throw SpecError(task.id + ": edge references unknown room " + e.a + " -- " + e.b);
    if (e.length < 1) throw SpecError(task.id + ": edge length < 1");
  }

  std::set<std::string> containers;
  for (const auto& c : task.containers) {
    if (!single_token(c.id)) throw SpecError(task.id + ": bad container id '" + c.id + "'");
    if (!containers.insert(c.id).second)
      throw SpecError(task.id + ": duplicate container " + c.id);
    if (!rooms.count(c.room))
      throw SpecError(task.id + ": container " + c.id + " in unknown room " + c.room);
  }

  std::set<std::string> classes;
  for (const auto& o : task.objects) {
    if (!single_token(o.class_name))
      throw SpecError(task.id + ": bad object class '" + o.class_name + "'");
    if (!classes.insert(o.class_name).second)
      throw SpecError(task.id + ": duplicate object class " + o.class_name);
    if (o.count < 1) throw SpecError(task.id + ": object count < 1 for " + o.class_name);
    if (!o.placement_hint.empty() && !rooms.count(o.placement_hint))
      throw SpecError(task.id + ": placement hint names unknown room " + o.placement_hint);
  }

  if (task.goal.empty()) throw SpecError(task.id + ": goal is empty");
  for (const auto& g : task.goal) {
    if (g.count < 1) throw SpecError(task.id + ": goal count < 1 for " + g.class_name);
    if (!containers.count(g.container))
      throw SpecError(task.id + ": goal container " + g.container + " does not exist");
    auto it = std::find_if(task.objects.begin(), task.objects.end(),
                           [&](const ObjectSpec& o) { return o.class_name == g.class_name; });
    if (it == task.objects.end())
      throw SpecError(task.id + ": goal class " + g.class_name + " has no object supply");
    if (it->count < g.count)
      throw SpecError(task.id + ": goal needs " + std::to_string(g.count) + " " +
                      g.class_name + " but supply is " + std::to_string(it->count));
  }

  if (task.variations.empty()) throw SpecError(task.id + ": needs at least one variation");
  std::set<std::string> var_ids;
  for (const auto& v : task.variations) {
    if (!var_ids.insert(v.id).second) throw SpecError(task.id + ": duplicate variation " + v.id);
    for (const auto& [cls, count] : v.object_counts) {
      if (!classes.count(cls))
        throw SpecError(task.id + ": variation " + v.id + " overrides unknown class " + cls);
      if (count < 1)
        throw SpecError(task.id + ": variation " + v.id + " sets count < 1 for " + cls);
    }
  }
}

TaskSpec apply_variation(const TaskSpec& task, const VariationSpec& variation) {
  TaskSpec out = task;
  for (const auto& [cls, count] : variation.object_counts) {
    bool found = false;
    for (auto& o : out.objects) {
      if (o.class_name == cls) {
        o.count = count;
        found = true;
      }
    }
    if (!found)
      throw SpecError(task.id + ": variation " + variation.id + " overrides unknown class " + cls);
    for (auto& g : out.goal) {
      if (g.class_name == cls) g.count = count;
    }
  }
  validate_task(out);
  return out;
}

namespace {

TaskSpec make_clear_the_table() {
  TaskSpec t;
  t.id = "clear_the_table";
  t.description = "Clear leftover tableware into the kitchen bin.";
  t.rooms = {"hallway", "kitchen", "dining_room", "pantry"};
  t.edges = {{"hallway", "kitchen", 2},
             {"hallway", "dining_room", 2},
             {"hallway", "pantry", 3},
             {"kitchen", "dining_room", 1}};
  t.containers = {{"bin", "kitchen"}};
  t.objects = {{"plate", 2, ""}, {"fork", 3, ""}};
  t.goal = {{"plate", 2, "bin"}, {"fork", 3, "bin"}};
  t.goal_description = "Put all plates and forks into the bin in the kitchen.";
  t.variations = {{"a", {{"plate", 2}, {"fork", 3}}}, {"b", {{"plate", 1}, {"fork", 4}}}};
  return t;
}

TaskSpec make_laundry_run() {
  TaskSpec t;
  t.id = "laundry_run";
  t.description = "Collect stray laundry into the basket.";
  t.rooms = {"corridor", "bathroom", "bedroom_a", "bedroom_b", "laundry"};
  t.edges = {{"corridor", "bathroom", 1},
             {"corridor", "bedroom_a", 2},
             {"corridor", "bedroom_b", 2},
             {"corridor", "laundry", 3},
             {"bedroom_a", "bedroom_b", 1}};
  t.containers = {{"basket", "laundry"}};
  t.objects = {{"sock", 3, ""}, {"shirt", 2, ""}};
  t.goal = {{"sock", 3, "basket"}, {"shirt", 2, "basket"}};
  t.goal_description = "Put all socks and shirts into the basket in the laundry.";
  t.variations = {{"a", {{"sock", 3}, {"shirt", 2}}}, {"b", {{"sock", 2}, {"shirt", 2}}}};
  return t;
}

TaskSpec make_toy_cleanup() {
  TaskSpec t;
  t.id = "toy_cleanup";
  t.description = "Return scattered toys to the toybox.";
  t.rooms = {"landing", "playroom", "nursery", "storage", "lounge", "study"};
  t.edges = {{"landing", "playroom", 1},
             {"landing", "nursery", 2},
             {"landing", "lounge", 2},
             {"playroom", "storage", 2},
             {"lounge", "study", 1},
             {"nursery", "storage", 4}};
  t.containers = {{"toybox", "storage"}};
  t.objects = {{"block", 3, ""}, {"doll", 2, ""}};
  t.goal = {{"block", 3, "toybox"}, {"doll", 2, "toybox"}};
  t.goal_description = "Put all blocks and dolls into the toybox in the storage room.";
  t.variations = {{"a", {{"block", 3}, {"doll", 2}}}, {"b", {{"block", 2}, {"doll", 3}}}};
  return t;
}

TaskSpec make_book_return() {
  TaskSpec t;
  t.id = "book_return";
  t.description = "Return reading material to the library shelf.";
  t.rooms = {"foyer",     "library",    "office", "reading_nook",
             "guest_room", "attic",      "sunroom"};
  t.edges = {{"foyer", "library", 2},   {"foyer", "office", 1},
             {"foyer", "guest_room", 3}, {"library", "reading_nook", 1},
             {"office", "attic", 4},     {"guest_room", "sunroom", 1},
             {"library", "office", 1}};
  t.containers = {{"shelf", "library"}};
  t.objects = {{"book", 3, ""}, {"magazine", 2, ""}};
  t.goal = {{"book", 3, "shelf"}, {"magazine", 2, "shelf"}};
  t.goal_description = "Put all books and magazines onto the shelf in the library.";
  t.variations = {{"a", {{"book", 3}, {"magazine", 2}}}, {"b", {{"book", 2}, {"magazine", 2}}}};
  return t;
}

TaskSpec make_dish_collection() {
  TaskSpec t;
  t.id = "dish_collection";
  t.description = "Gather used dishes into the kitchenette sink.";
  t.rooms = {"entry",  "den",        "parlor",  "kitchenette",
             "terrace", "cellar",     "workshop", "mudroom"};
  t.edges = {{"entry", "den", 1},       {"entry", "parlor", 2},
             {"den", "kitchenette", 2}, {"parlor", "terrace", 3},
             {"kitchenette", "cellar", 1}, {"entry", "workshop", 4},
             {"workshop", "mudroom", 1},   {"parlor", "cellar", 2}};
  t.containers = {{"sink", "kitchenette"}};
  t.objects = {{"cup", 3, ""}, {"bowl", 2, ""}};
  t.goal = {{"cup", 3, "sink"}, {"bowl", 2, "sink"}};
  t.goal_description = "Put all cups and bowls into the sink in the kitchenette.";
  t.variations = {{"a", {{"cup", 3}, {"bowl", 2}}}, {"b", {{"cup", 2}, {"bowl", 3}}}};
  return t;
}

}  // namespace

const std::vector<TaskSpec>& builtin_task_suite() {
  static const std::vector<TaskSpec> suite = {
      make_clear_the_table(), make_laundry_run(), make_toy_cleanup(),
      make_book_return(), make_dish_collection()};
  return suite;
}

}  // namespace coop
