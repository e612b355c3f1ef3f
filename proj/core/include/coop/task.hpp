#pragma once

#include <map>
#include <string>
#include <vector>

namespace coop {

struct EdgeSpec {
  std::string a;
  std::string b;
  int length = 1;  // 1..4 in the shipped suite
};

struct ContainerSpec {
  std::string id;
  std::string room;
};

struct ObjectSpec {
  std::string class_name;
  int count = 0;
  std::string placement_hint;  // room id, or empty for seeded placement
};

struct TaskGoalSpec {
  std::string class_name;
  int count = 0;
  std::string container;
};

// Object-count overrides applied to both the object supply and the goal.
struct VariationSpec {
  std::string id;
  std::map<std::string, int> object_counts;
};

struct TaskSpec {
  std::string id;
  std::string description;
  std::vector<std::string> rooms;
  std::vector<EdgeSpec> edges;
  std::vector<ContainerSpec> containers;
  std::vector<ObjectSpec> objects;
  std::vector<TaskGoalSpec> goal;
  std::string goal_description;
  std::vector<VariationSpec> variations;
};

// Throws SpecError naming the offending field.
void validate_task(const TaskSpec& task);

// Returns a copy with the variation's counts applied. The variation must
// belong to the task.
TaskSpec apply_variation(const TaskSpec& task, const VariationSpec& variation);

// The shipped suite: 5 transport tasks with 2 variations each (10 episodes).
const std::vector<TaskSpec>& builtin_task_suite();

}  // namespace coop
