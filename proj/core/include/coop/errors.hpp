#pragma once

#include <stdexcept>
#include <string>

namespace coop {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WorldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AgentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PromptError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MetricsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace coop
