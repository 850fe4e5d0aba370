#include <doctest.h>

#include <filesystem>

#include "scholarmetrics/config.hpp"
#include "scholarmetrics/error.hpp"
#include "scholarmetrics/pipeline.hpp"

using namespace scholarmetrics;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::IoError;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("document parsing") {
  auto doc = config::parse_document(R"(
# comment
[run]
stages = ["build", "metrics"]   # trailing
workers = 4
[metrics]
js_log_base = 2.5
disabled = [
  "h_index",
  "industry_rate",
]
name = "a # not a comment"
flag = true
)");
  CHECK(std::get<std::vector<std::string>>(doc["run"]["stages"].value).size() == 2);
  CHECK(std::get<std::int64_t>(doc["run"]["workers"].value) == 4);
  CHECK(doc["run"]["workers"].line == 5);
  CHECK(std::get<double>(doc["metrics"]["js_log_base"].value) == 2.5);
  CHECK(std::get<std::vector<std::string>>(doc["metrics"]["disabled"].value).size() == 2);
  CHECK(std::get<std::string>(doc["metrics"]["name"].value) == "a # not a comment");
  CHECK(std::get<bool>(doc["metrics"]["flag"].value));

  CHECK(kind_of([] { config::parse_document("[run]\nx = 1\nx = 2\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { config::parse_document("[run]\n[run]\n"); }) == ErrorKind::ConfigError);
  CHECK(message_of([] { config::parse_document("[run]\nx = \"open\n"); }).find("2") !=
        std::string::npos);
}

TEST_CASE("overrides") {
  auto doc = config::parse_document("[run]\nworkers = 1\n");
  config::apply_override(doc, "run.workers=8");
  config::apply_override(doc, "metrics.top_k_scope=per_window");
  CHECK(std::get<std::int64_t>(doc["run"]["workers"].value) == 8);
  CHECK(std::get<std::string>(doc["metrics"]["top_k_scope"].value) == "per_window");
  CHECK(kind_of([&] { config::apply_override(doc, "novalue"); }) == ErrorKind::ConfigError);
}

TEST_CASE("run config from text") {
  const fs::path base = "/tmp/sm_cfg";
  auto c = run_config_from_text(R"(
[run]
stages = ["build", "metrics", "export"]
output_dir = "out"
[build]
input = "works.jsonl"
start_year = 2005
end_year = 2024
[metrics]
velocity_threshold = 10
stability_inactive = "zero"
[export]
metrics = ["h_index"]
)",
                                base);
  CHECK(c.stages == std::vector<Stage>{Stage::Build, Stage::Metrics, Stage::Export});
  CHECK(c.output_dir == base / "out");
  CHECK(*c.build_input == base / "works.jsonl");
  CHECK(c.window_start == 2005);
  CHECK(c.metrics.velocity_threshold == 10);
  CHECK(c.metrics.stability_policy == collab::InactivePolicy::Zero);
  CHECK(c.export_metrics->front() == "h_index");
  CHECK(c.corpus_path() == base / "out" / "corpus" / "corpus.jsonl");

  auto with_env = run_config_from_text("[harvest]\nvenues = [\"AAAI\"]\n", base, {}, "me@example.org");
  CHECK(with_env.harvest.policy.contact_email == "me@example.org");
  auto explicit_email = run_config_from_text(
      "[harvest]\ncontact_email = \"x@example.org\"\n", base, {}, "me@example.org");
  CHECK(explicit_email.harvest.policy.contact_email == "x@example.org");

  auto overridden = run_config_from_text("", base, {"build.window_width=10"});
  CHECK(overridden.window_width == 10);
}

TEST_CASE("config errors") {
  const fs::path base = "/tmp";
  auto parse = [&](const std::string& text) { return run_config_from_text(text, base); };
  CHECK(kind_of([&] { parse("[bogus]\nx = 1\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { parse("[run]\ntypo = 1\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { parse("[run]\nworkers = \"four\"\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { parse("[run]\nstages = [\"deploy\"]\n"); }) == ErrorKind::ConfigError);
  CHECK(message_of([&] { parse("[run]\ntypo = 1\n"); }).find("typo") != std::string::npos);

  auto v = [&](const std::string& text) { validate(parse(text)); };
  CHECK(kind_of([&] { v("[run]\nstages = [\"metrics\", \"build\"]\n"); }) ==
        ErrorKind::ConfigError);
  CHECK(kind_of([&] { v("[harvest]\nvenues = [\"NOTAVENUE\"]\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { v("[run]\nstages = [\"build\"]\n[build]\ninput = \"missing.jsonl\"\n"); }) ==
        ErrorKind::ConfigError);
  CHECK(kind_of([&] {
          v("[run]\nstages = [\"metrics\"]\n[build]\nstart_year = 2020\nend_year = 2010\n");
        }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { v("[run]\nstages = [\"metrics\"]\n[metrics]\ntop_percent = 0\n"); }) ==
        ErrorKind::ConfigError);
  CHECK(kind_of([&] { v("[run]\nstages = [\"export\"]\n[export]\nmetrics = [\"nope\"]\n"); }) ==
        ErrorKind::ConfigError);
  CHECK(kind_of([&] { v("[run]\nstages = [\"metrics\"]\n[metrics]\ndisabled = [\"nope\"]\n"); }) ==
        ErrorKind::ConfigError);
}

TEST_CASE("shipped example config validates") {
  auto c = load_run_config(fs::path(SCHOLARMETRICS_SOURCE_DIR) / "configs" / "example.toml");
  CHECK_NOTHROW(validate(c));
  CHECK(c.harvest.venues.size() == 13);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::ConfigError) == 2);
  CHECK(exit_code_for(ErrorKind::TransientError) == 3);
  CHECK(exit_code_for(ErrorKind::SchemaError) == 4);
  RunReport ok;
  CHECK(exit_code(ok) == 0);
  RunReport partial;
  partial.harvest_complete = false;
  CHECK(exit_code(partial) == 4);
}
