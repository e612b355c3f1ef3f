#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coop {

struct Utterance {
  std::string speaker;
  std::optional<int> tick;
  std::string text;

  bool operator==(const Utterance&) const = default;
};

struct ParsedLog {
  std::vector<Utterance> utterances;
  std::size_t skipped_lines = 0;
};

// Strips markdown emphasis (* and `), surrounding quotes, bracketed stage
// directions, and control characters; collapses whitespace. Idempotent.
std::string clean_text(std::string_view raw);

// One dialogue line: "<tick> <name>: <text>". Text is cleaned on parse.
std::optional<Utterance> parse_line(std::string_view line);
std::string format_line(const Utterance& u);

ParsedLog parse_log_text(std::string_view text);
ParsedLog parse_log(const std::filesystem::path& path);  // throws on unreadable file

// Incremental reader for live-updating logs; poll() returns utterances
// appended since the previous call (only complete lines).
class LogFollower {
 public:
  explicit LogFollower(std::filesystem::path path);
  std::vector<Utterance> poll();
  std::size_t skipped_lines() const { return skipped_; }

 private:
  std::filesystem::path path_;
  std::streamoff offset_ = 0;
  std::string pending_;
  std::size_t skipped_ = 0;
};

struct ReplayOptions {
  int delay_ms = 0;
  // Command template run per utterance; $TEXT$ and $SPEAKER$ are substituted
  // shell-quoted. Synthesis of the next utterance overlaps playback of the
  // current one; printing never waits on the command.
  std::string speech_command;
  std::ostream* out = nullptr;  // defaults to std::cout
  std::ostream* err = nullptr;  // defaults to std::cerr
  bool color = true;
};

struct ReplayStats {
  std::size_t printed = 0;
  std::size_t speech_failures = 0;
};

ReplayStats replay(const std::vector<Utterance>& utterances, const ReplayOptions& options);

}  // namespace coop
