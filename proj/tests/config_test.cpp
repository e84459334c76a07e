#include <gtest/gtest.h>

#include <cstdlib>

#include "scw/config.hpp"

namespace scw {
namespace {

TEST(KeyValues, SectionsQuotesAndComments) {
  const auto kv = parse_key_values(
      "# workbench\n"
      "top = 1\n"
      "[llm]\n"
      "url = \"http://host:9/v1\"  # trailing\n"
      "model = gpt-4 # bare\n"
      "[llm.params]\n"
      "temperature = 0.7\n"
      "note = \"a \\\"quoted\\\" \\\\ value\"\n");
  EXPECT_EQ(kv.at("top"), "1");
  EXPECT_EQ(kv.at("llm.url"), "http://host:9/v1");
  EXPECT_EQ(kv.at("llm.model"), "gpt-4");
  EXPECT_EQ(kv.at("llm.params.temperature"), "0.7");
  EXPECT_EQ(kv.at("llm.params.note"), "a \"quoted\" \\ value");
}

TEST(KeyValues, Errors) {
  EXPECT_THROW(parse_key_values("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_key_values("no equals\n"), ConfigError);
  EXPECT_THROW(parse_key_values("a = \"open\n"), ConfigError);
  EXPECT_THROW(parse_key_values("[broken\n"), ConfigError);
  EXPECT_THROW(parse_key_values("a =\n"), ConfigError);
  EXPECT_THROW(parse_key_values("a = \"x\" junk\n"), ConfigError);
}

TEST(Config, DefaultsForEveryKey) {
  const auto cfg = config_from_key_values({});
  EXPECT_EQ(cfg.llm.wire, "chat");
  EXPECT_EQ(cfg.wrap, 30u);
  EXPECT_FALSE(cfg.allow_multiple_roots);
  EXPECT_TRUE(cfg.llm.params.empty());
}

TEST(Config, OverridesAndParams) {
  const auto cfg = config_from_key_values(parse_key_values(
      "[llm]\nwire = prompt\nsingle_flight = true\ntimeout_seconds = 9\n"
      "[llm.params]\ntemperature = 0.2\nmax_tokens = 800\nstop = \"END\"\n"
      "[validator]\nallow_multiple_roots = true\n[render]\nwrap = 20\n[grading]\nscale = \"50:P\"\n"));
  EXPECT_EQ(cfg.llm.wire, "prompt");
  EXPECT_TRUE(cfg.llm.single_flight);
  EXPECT_EQ(cfg.llm.timeout_seconds, 9);
  EXPECT_EQ(cfg.llm.params["temperature"], 0.2);
  EXPECT_EQ(cfg.llm.params["max_tokens"], 800);
  EXPECT_EQ(cfg.llm.params["stop"], "END");
  EXPECT_TRUE(cfg.allow_multiple_roots);
  EXPECT_EQ(cfg.wrap, 20u);
  EXPECT_EQ(cfg.grade_scale, "50:P");
}

TEST(Config, RejectsUnknownAndBadValues) {
  EXPECT_THROW(config_from_key_values({{"llm.ulr", "x"}}), ConfigError);
  EXPECT_THROW(config_from_key_values({{"llm.wire", "grpc"}}), ConfigError);
  EXPECT_THROW(config_from_key_values({{"render.wrap", "0"}}), ConfigError);
  EXPECT_THROW(config_from_key_values({{"render.wrap", "ten"}}), ConfigError);
  EXPECT_THROW(config_from_key_values({{"llm.single_flight", "yes"}}), ConfigError);
}

TEST(Config, CredentialsFromEnvironment) {
  ::setenv(std::string(kLlmKeyEnv).c_str(), "k-llm", 1);
  ::setenv(std::string(kEmbedKeyEnv).c_str(), "k-embed", 1);
  const auto cfg = load_config(std::nullopt);
  EXPECT_EQ(cfg.llm.api_key, "k-llm");
  EXPECT_EQ(cfg.embed.api_key, "k-embed");
  ::unsetenv(std::string(kLlmKeyEnv).c_str());
  ::unsetenv(std::string(kEmbedKeyEnv).c_str());
  EXPECT_THROW(load_config(std::filesystem::path("/nonexistent/workbench.toml")), ConfigError);
}

}  // namespace
}  // namespace scw
