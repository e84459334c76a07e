#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

namespace scw {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flat view of a TOML-style file: `[section]` headers prefix the keys that
/// follow ("llm.url"). Values are double-quoted strings (\" \\ \n \t escapes)
/// or bare scalars such as numbers and booleans.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::filesystem::path& path);

inline constexpr std::string_view kLlmKeyEnv = "SCW_LLM_API_KEY";
inline constexpr std::string_view kEmbedKeyEnv = "SCW_EMBED_API_KEY";

struct WorkbenchConfig {
  struct Llm {
    std::string url = "http://127.0.0.1:8080/v1/complete";
    std::string model = "gpt-4";
    std::string wire = "chat";  // chat | prompt
    int timeout_seconds = 120;
    bool single_flight = false;
    nlohmann::json params = nlohmann::json::object();  // keys under [llm.params]
    std::string api_key;
  } llm;

  struct Embed {
    std::string url = "http://127.0.0.1:8081/v1/embed";
    int timeout_seconds = 60;
    std::string api_key;
  } embed;

  bool allow_multiple_roots = false;
  std::size_t wrap = 30;
  std::string out_dir = "runs";
  std::string replay_dir = "replay";
  std::string grade_scale;  // empty: built-in table
};

/// Unknown keys are rejected so typos surface early.
WorkbenchConfig config_from_key_values(const KeyValues& kv);

/// Reads the file when given, applies defaults otherwise, then takes API keys
/// from the environment.
WorkbenchConfig load_config(const std::optional<std::filesystem::path>& path);

}  // namespace scw
