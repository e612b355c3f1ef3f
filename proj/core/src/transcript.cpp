#include "coop/transcript.hpp"

#include <cctype>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "coop/errors.hpp"

namespace coop {

namespace {

bool is_control(unsigned char c) { return c < 0x20 || c == 0x7f; }

std::string drop_bracketed(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] == '[') {
      std::size_t close = s.find(']', pos + 1);
      if (close != std::string::npos) {
        pos = close + 1;
        continue;
      }
    }
    out.push_back(s[pos]);
    ++pos;
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(' ');
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(' ');
  return s.substr(begin, end - begin + 1);
}

bool quote_pair(const std::string& s) {
  if (s.size() < 2) return false;
  char a = s.front(), b = s.back();
  return (a == '"' && b == '"') || (a == '\'' && b == '\'');
}

}  // namespace

std::string clean_text(std::string_view raw) {
  std::string s;
  s.reserve(raw.size());
  for (char c : raw) s.push_back(is_control(static_cast<unsigned char>(c)) ? ' ' : c);

  s = drop_bracketed(s);

  std::string no_emphasis;
  no_emphasis.reserve(s.size());
  for (char c : s)
    if (c != '*' && c != '`') no_emphasis.push_back(c);
  s = trim(no_emphasis);

  while (quote_pair(s)) s = trim(s.substr(1, s.size() - 2));

  std::string collapsed;
  collapsed.reserve(s.size());
  bool in_space = false;
  for (char c : s) {
    if (c == ' ') {
      in_space = true;
      continue;
    }
    if (in_space && !collapsed.empty()) collapsed.push_back(' ');
    in_space = false;
    collapsed.push_back(c);
  }
  return collapsed;
}

namespace {

bool name_shaped(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

std::optional<Utterance> parse_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

  std::size_t colon = line.find(": ");
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;

  std::string_view head = line.substr(0, colon);
  std::string_view text = line.substr(colon + 2);

  std::optional<int> tick;
  std::string_view name = head;
  std::size_t space = head.find(' ');
  if (space != std::string_view::npos) {
    std::string_view tick_part = head.substr(0, space);
    name = head.substr(space + 1);
    if (tick_part.empty() ||
        tick_part.find_first_not_of("0123456789") != std::string_view::npos)
      return std::nullopt;
    tick = std::stoi(std::string(tick_part));
  }
  if (!name_shaped(name)) return std::nullopt;

  std::string cleaned = clean_text(text);
  if (cleaned.empty()) return std::nullopt;
  return Utterance{std::string(name), tick, cleaned};
}

std::string format_line(const Utterance& u) {
  std::ostringstream out;
  if (u.tick) out << *u.tick << " ";
  out << u.speaker << ": " << u.text;
  return out.str();
}

ParsedLog parse_log_text(std::string_view text) {
  ParsedLog log;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    if (!line.empty()) {
      if (auto u = parse_line(line)) {
        log.utterances.push_back(std::move(*u));
      } else {
        ++log.skipped_lines;
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return log;
}

ParsedLog parse_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read log file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_log_text(buf.str());
}

LogFollower::LogFollower(std::filesystem::path path) : path_(std::move(path)) {}

std::vector<Utterance> LogFollower::poll() {
  std::vector<Utterance> out;
  std::ifstream in(path_, std::ios::binary);
  if (!in) return out;
  in.seekg(0, std::ios::end);
  std::streamoff size = in.tellg();
  if (size <= offset_) return out;
  in.seekg(offset_);
  std::string chunk(static_cast<std::size_t>(size - offset_), '\0');
  in.read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  offset_ = size;

  pending_ += chunk;
  std::size_t pos = 0;
  while (true) {
    std::size_t nl = pending_.find('\n', pos);
    if (nl == std::string::npos) break;
    std::string_view line(pending_.data() + pos, nl - pos);
    if (!line.empty()) {
      if (auto u = parse_line(line)) {
        out.push_back(std::move(*u));
      } else {
        ++skipped_;
      }
    }
    pos = nl + 1;
  }
  pending_.erase(0, pos);
  return out;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  out += "'";
  return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string speech_command_for(const std::string& tmpl, const Utterance& u) {
  std::string cmd = replace_all(tmpl, "$TEXT$", shell_quote(u.text));
  return replace_all(cmd, "$SPEAKER$", shell_quote(u.speaker));
}

const char* speaker_color(const std::string& speaker) {
  static const char* kPalette[] = {"\033[36m", "\033[33m", "\033[32m", "\033[35m"};
  std::size_t h = std::hash<std::string>{}(speaker);
  return kPalette[h % 4];
}

}  // namespace

ReplayStats replay(const std::vector<Utterance>& utterances, const ReplayOptions& options) {
  std::ostream& out = options.out ? *options.out : std::cout;
  std::ostream& err = options.err ? *options.err : std::cerr;

  ReplayStats stats;
  std::future<int> pending;
  std::string pending_speaker;

  auto finish_pending = [&] {
    if (!pending.valid()) return;
    int rc = pending.get();
    if (rc != 0) {
      ++stats.speech_failures;
      err << "speech command failed (exit " << rc << ") for " << pending_speaker << "\n";
    }
  };

  for (const auto& u : utterances) {
    if (options.color) {
      out << speaker_color(u.speaker) << u.speaker << ":\033[0m " << u.text << "\n";
    } else {
      out << u.speaker << ": " << u.text << "\n";
    }
    out.flush();
    ++stats.printed;

    if (!options.speech_command.empty()) {
      // One background lane: wait for the previous utterance's command only
      // when the next one is ready to start. Printing stays ahead.
      finish_pending();
      std::string cmd = speech_command_for(options.speech_command, u);
      pending = std::async(std::launch::async,
                           [cmd] { return std::system(cmd.c_str()); });
      pending_speaker = u.speaker;
    }

    if (options.delay_ms > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(options.delay_ms));
  }
  finish_pending();
  return stats;
}

}  // namespace coop
