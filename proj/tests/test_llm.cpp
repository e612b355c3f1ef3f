#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <thread>

#include "coop/llm.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace coop;

namespace {

std::string planning_prompt(const std::vector<std::string>& options,
                            const std::vector<std::string>& taken = {}) {
  std::string out = "Goal: test\n\nActions taken:\n";
  if (taken.empty()) out += "(none)\n";
  for (const auto& t : taken) out += t + "\n";
  out += "\nAvailable actions:\n";
  char label = 'A';
  for (const auto& o : options) {
    out += std::string(1, label) + ". " + o + "\n";
    ++label;
  }
  out += "\nPlease help me choose the best available action.\n";
  return out;
}

}  // namespace

TEST_CASE("cache_key is stable, sensitive to content, temperature-pinned") {
  LlmRequest req{"gemma3:4b", "hello world", 0.7, 256, {}};
  CHECK(cache_key(req) == cache_key(req));
  CHECK(cache_key(req).size() == 64);

  LlmRequest other = req;
  other.prompt = "hello world!";
  CHECK(cache_key(other) != cache_key(req));

  other = req;
  other.model = "mistral:7b";
  CHECK(cache_key(other) != cache_key(req));

  other = req;
  other.max_tokens = 257;
  CHECK(cache_key(other) != cache_key(req));

  other = req;
  other.stop = {"\n"};
  CHECK(cache_key(other) != cache_key(req));

  // Replays must hit regardless of live sampling temperature.
  other = req;
  other.temperature = 0.0;
  CHECK(cache_key(other) == cache_key(req));
}

TEST_CASE("scripted_choice follows the greedy priority order") {
  SUBCASE("grab the lexicographically smallest object id") {
    auto prompt = planning_prompt({"wait", "go grab fork_1 (fork)", "go grab fork_2 (fork)"});
    CHECK(scripted_choice(prompt) == "B");
    auto reversed = planning_prompt({"wait", "go grab fork_2 (fork)", "go grab fork_1 (fork)"});
    CHECK(scripted_choice(reversed) == "C");
  }
  SUBCASE("put beats grab") {
    auto prompt = planning_prompt(
        {"go grab fork_1 (fork)", "go put carried objects into bin", "wait"});
    CHECK(scripted_choice(prompt) == "B");
  }
  SUBCASE("explore skips rooms already in the action history") {
    auto prompt = planning_prompt({"explore the bedroom", "explore the hall", "wait"},
                                  {"explore the bedroom"});
    CHECK(scripted_choice(prompt) == "B");
  }
  SUBCASE("everything explored and nothing to carry means wait") {
    auto prompt = planning_prompt({"explore the bedroom", "wait"}, {"explore the bedroom"});
    CHECK(scripted_choice(prompt) == "B");
  }
  SUBCASE("communication prompts get the fixed status line") {
    CHECK(scripted_choice("Goal: g\n\nPlease reply with a brief, accurate message.\n") ==
          "Status: proceeding with my current target.");
  }
  SUBCASE("a header with no parseable options is an error carrying the digest") {
    CHECK_THROWS_AS(scripted_choice("Available actions:\n\nnothing here"), BackendError);
    ScriptedBackend backend;
    LlmRequest req{"scripted", "Available actions:\n\nnothing here", 0.0, 16, {}};
    try {
      backend.generate(req);
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.kind() == BackendErrorKind::BadPrompt);
      CHECK(e.request_digest() == cache_key(req));
    }
  }
  SUBCASE("an empty prompt is rejected") {
    ScriptedBackend backend;
    CHECK_THROWS_AS(backend.generate(LlmRequest{"scripted", "", 0.0, 16, {}}), BackendError);
  }
  SUBCASE("pure function of the prompt") {
    auto prompt = planning_prompt({"wait", "go grab a_1 (a)"});
    ScriptedBackend backend;
    LlmRequest req{"scripted", prompt, 0.0, 16, {}};
    CHECK(backend.generate(req).text == backend.generate(req).text);
  }
}

TEST_CASE("replay backend: hit, miss, record, corrupt entry") {
  auto dir = std::filesystem::temp_directory_path() / "coop_replay_test";
  std::filesystem::remove_all(dir);

  LlmRequest req{"scripted", planning_prompt({"wait"}), 0.7, 64, {}};

  SUBCASE("miss without fallback carries the digest") {
    ReplayBackend replay(dir);
    try {
      replay.generate(req);
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.kind() == BackendErrorKind::CacheMiss);
      CHECK(e.request_digest() == cache_key(req));
    }
  }

  SUBCASE("fallback records, second call replays byte-identically") {
    ReplayBackend replay(dir, std::make_shared<ScriptedBackend>());
    LlmResponse first = replay.generate(req);
    CHECK_FALSE(first.from_cache);
    CHECK(std::filesystem::exists(dir / (cache_key(req) + ".json")));

    LlmResponse second = replay.generate(req);
    CHECK(second.from_cache);
    CHECK(second.text == first.text);

    ReplayBackend no_fallback(dir);
    CHECK(no_fallback.generate(req).text == first.text);
  }

  SUBCASE("corrupt cache entry is a malformed-reply error") {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / (cache_key(req) + ".json"));
    out << "{ not json";
    out.close();
    ReplayBackend replay(dir);
    try {
      replay.generate(req);
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.kind() == BackendErrorKind::MalformedReply);
    }
  }

  std::filesystem::remove_all(dir);
}

TEST_CASE("http backend speaks the non-streaming generate protocol") {
  httplib::Server server;
  nlohmann::json last_body;
  server.Post("/api/generate", [&](const httplib::Request& req, httplib::Response& res) {
    last_body = nlohmann::json::parse(req.body);
    std::string prompt = last_body["prompt"].get<std::string>();
    if (prompt == "RETURN_500") {
      res.status = 500;
      return;
    }
    if (prompt == "RETURN_GARBAGE") {
      res.set_content("not json at all", "text/plain");
      return;
    }
    nlohmann::json reply{{"model", last_body["model"]}, {"response", "B"}, {"done", true}};
    res.set_content(reply.dump(), "application/json");
  });

  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  std::string base = "http://127.0.0.1:" + std::to_string(port);
  HttpBackend backend(base, std::chrono::seconds(5));

  {
    LlmRequest req{"gemma3:4b", "pick one", 0.7, 99, {"\n\n"}};
    LlmResponse resp = backend.generate(req);
    CHECK(resp.text == "B");
    CHECK_FALSE(resp.from_cache);
    CHECK(last_body["model"] == "gemma3:4b");
    CHECK(last_body["prompt"] == "pick one");
    CHECK(last_body["stream"] == false);
    CHECK(last_body["options"]["num_predict"] == 99);
    CHECK(last_body["options"]["temperature"] == doctest::Approx(0.7));
    CHECK(last_body["options"]["stop"][0] == "\n\n");
  }

  {
    LlmRequest req{"m", "RETURN_500", 0.0, 8, {}};
    try {
      backend.generate(req);
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.kind() == BackendErrorKind::HttpStatus);
      CHECK(std::string(e.what()).find("500") != std::string::npos);
    }
  }

  {
    LlmRequest req{"m", "RETURN_GARBAGE", 0.0, 8, {}};
    try {
      backend.generate(req);
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.kind() == BackendErrorKind::MalformedReply);
    }
  }

  server.stop();
  server_thread.join();

  {
    HttpBackend dead("http://127.0.0.1:9", std::chrono::seconds(1));
    LlmRequest req{"m", "x", 0.0, 8, {}};
    try {
      dead.generate(req);
      FAIL("expected BackendError");
    } catch (const BackendError& e) {
      CHECK(e.kind() == BackendErrorKind::Unreachable);
      CHECK(std::string(e.what()).find("127.0.0.1:9") != std::string::npos);
      CHECK(e.request_digest() == cache_key(req));
    }
  }
}
