#include "scw/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace scw {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

std::string unquote(std::string_view raw, int line) {
  std::string out;
  std::size_t i = 1;
  for (; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '"') break;
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i >= raw.size()) fail(line, "dangling escape");
    switch (raw[i]) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      default: fail(line, std::string("unknown escape \\") + raw[i]);
    }
  }
  if (i >= raw.size()) fail(line, "unterminated string");
  const std::string_view rest = trim(raw.substr(i + 1));
  if (!rest.empty() && rest.front() != '#') fail(line, "unexpected text after string");
  return out;
}

int to_int(const KeyValues& kv, const std::string& key, int fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + it->second + "'");
  }
}

bool to_bool(const KeyValues& kv, const std::string& key, bool fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (it->second == "true") return true;
  if (it->second == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + it->second + "'");
}

std::string to_str(const KeyValues& kv, const std::string& key, std::string fallback) {
  const auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

// Bare scalars that look numeric or boolean keep their JSON type.
nlohmann::json scalar_json(const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used == value.size()) {
      if (value.find_first_of(".eE") == std::string::npos) return static_cast<long long>(d);
      return d;
    }
  } catch (const std::exception&) {
  }
  return value;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::string section;
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) fail(lineno, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(lineno, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(lineno, "empty key");
    const std::string_view raw = trim(line.substr(eq + 1));
    std::string value;
    if (!raw.empty() && raw.front() == '"') {
      value = unquote(raw, lineno);
    } else {
      const auto hash = raw.find('#');
      value = std::string(trim(raw.substr(0, hash)));
      if (value.empty()) fail(lineno, "missing value for " + key);
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (!out.emplace(full, value).second) fail(lineno, "duplicate key " + full);
    if (start > text.size()) break;
  }
  return out;
}

KeyValues load_key_values(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_key_values(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

WorkbenchConfig config_from_key_values(const KeyValues& kv) {
  static const char* const kKnown[] = {
      "llm.url",         "llm.model",  "llm.wire",       "llm.timeout_seconds", "llm.single_flight",
      "embed.url",       "embed.timeout_seconds",        "validator.allow_multiple_roots",
      "render.wrap",     "paths.out_dir", "paths.replay_dir", "grading.scale",
  };
  WorkbenchConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key.starts_with("llm.params.")) {
      cfg.llm.params[key.substr(11)] = scalar_json(value);
      continue;
    }
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw ConfigError("unknown configuration key '" + key + "'");
  }
  cfg.llm.url = to_str(kv, "llm.url", cfg.llm.url);
  cfg.llm.model = to_str(kv, "llm.model", cfg.llm.model);
  cfg.llm.wire = to_str(kv, "llm.wire", cfg.llm.wire);
  if (cfg.llm.wire != "chat" && cfg.llm.wire != "prompt") {
    throw ConfigError("llm.wire must be 'chat' or 'prompt'");
  }
  cfg.llm.timeout_seconds = to_int(kv, "llm.timeout_seconds", cfg.llm.timeout_seconds);
  cfg.llm.single_flight = to_bool(kv, "llm.single_flight", cfg.llm.single_flight);
  cfg.embed.url = to_str(kv, "embed.url", cfg.embed.url);
  cfg.embed.timeout_seconds = to_int(kv, "embed.timeout_seconds", cfg.embed.timeout_seconds);
  cfg.allow_multiple_roots = to_bool(kv, "validator.allow_multiple_roots", cfg.allow_multiple_roots);
  const int wrap = to_int(kv, "render.wrap", static_cast<int>(cfg.wrap));
  if (wrap < 1) throw ConfigError("render.wrap must be positive");
  cfg.wrap = static_cast<std::size_t>(wrap);
  cfg.out_dir = to_str(kv, "paths.out_dir", cfg.out_dir);
  cfg.replay_dir = to_str(kv, "paths.replay_dir", cfg.replay_dir);
  cfg.grade_scale = to_str(kv, "grading.scale", cfg.grade_scale);
  return cfg;
}

WorkbenchConfig load_config(const std::optional<std::filesystem::path>& path) {
  WorkbenchConfig cfg = path ? config_from_key_values(load_key_values(*path)) : WorkbenchConfig{};
  if (const char* key = std::getenv(std::string(kLlmKeyEnv).c_str())) cfg.llm.api_key = key;
  if (const char* key = std::getenv(std::string(kEmbedKeyEnv).c_str())) cfg.embed.api_key = key;
  return cfg;
}

}  // namespace scw
