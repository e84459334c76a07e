#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scw/config.hpp"
#include "scw/gsn.hpp"

namespace scw::gen {

// --- prompt material -------------------------------------------------------

inline constexpr std::string_view kRoleStatement =
    "You are a professional safety case developer assistant. I want you to create a safety case for "
    "the given system in Goal Structuring Notation (GSN) Format.";

inline constexpr std::string_view kQaIntro =
    "I will give you the following information in the form of Questions and Answers:";

inline constexpr std::string_view kSafetyCaseDefinition =
    "A safety case is a structured argument, supported by evidence, intended to justify that a system "
    "is acceptably safe.";

/// Question line that opens the domain-knowledge Q&A pair.
inline constexpr std::string_view kDomainSentinel = "What domain knowledge is relevant to the system?";

/// First line of the GSN syntax block.
inline constexpr std::string_view kSyntaxSentinel = "GSN syntax reference:";

inline constexpr std::string_view kRq1Preparatory =
    "You are an assistant that helps me answer questions about Goal structuring notation (GSN). GSN "
    "always refers to Goal Structuring Notation from this point. Your answers should be concise and to "
    "the point. It should not be more than 2-3 lines";

struct SystemBrief {
  std::string system_name;
  std::string system_description;  // answer to "what is the system"
  std::string objective;           // answer to "what is the main objective"
  std::optional<std::string> domain_paragraph;
  bool reconstructed = false;  // description or domain text was written locally, not quoted

  friend bool operator==(const SystemBrief&, const SystemBrief&) = default;
};

/// Briefs for the "ml-tnr" and "xray" corpus cases; nullopt otherwise.
std::optional<SystemBrief> bundled_brief(std::string_view label);

/// Reads a key/value brief file (system_name, system_description, objective,
/// domain_paragraph). Throws ConfigError on missing required keys.
SystemBrief load_brief(const std::filesystem::path& path);

/// Table of connection and text-form rules followed by the map-system case
/// in structured prose. Begins with kSyntaxSentinel.
const std::string& default_syntax_block();

struct ExperimentConfig {
  int experiment = 1;  // 1..4
  int rounds_k = 4;
  SystemBrief brief;
  std::string syntax_block = default_syntax_block();
  std::string seed_label = "run";
  nlohmann::json params = nlohmann::json::object();  // passed through to the endpoint

  bool uses_domain_knowledge() const { return experiment == 2 || experiment == 4; }
  bool uses_syntax() const { return experiment == 3 || experiment == 4; }

  /// Throws ConfigError when an invariant does not hold.
  void check() const;
};

std::string build_prompt(const ExperimentConfig& config);

// --- completion endpoints --------------------------------------------------

struct CompletionRequest {
  std::string prompt;
  nlohmann::json params = nlohmann::json::object();
  std::string seed_label;
  int experiment = 1;
  int round = 1;
};

class CompletionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;

  /// Each call is an independent conversation. Throws CompletionError.
  virtual std::string complete(const CompletionRequest& request) = 0;

  /// True when calls must not overlap; the runner then issues rounds serially.
  virtual bool single_flight() const { return false; }

  /// Replay-style clients produce byte-stable manifests (timestamps zeroed).
  virtual bool deterministic() const { return false; }

  virtual std::string name() const = 0;
};

/// Canned responses from `<dir>/<seed_label>.exp<e>.round<r>.txt`.
class ReplayClient final : public CompletionClient {
 public:
  explicit ReplayClient(std::filesystem::path directory);

  std::string complete(const CompletionRequest& request) override;
  bool deterministic() const override { return true; }
  std::string name() const override { return "replay"; }

  static std::string file_name(std::string_view seed_label, int experiment, int round);

 private:
  std::filesystem::path directory_;
};

enum class WireShape {
  Chat,    // {"model", "messages": [{"role": "user", "content": ...}], "params"}
  Prompt,  // {"model", "prompt", "params"}
};

struct HttpEndpoint {
  std::string url;
  std::string model;
  WireShape wire = WireShape::Chat;
  std::string api_key;  // sent as a bearer token when non-empty
  int timeout_seconds = 120;
  bool single_flight = false;
};

/// JSON-over-HTTP completion endpoint; the response must carry a "text" field.
class HttpCompletionClient final : public CompletionClient {
 public:
  explicit HttpCompletionClient(HttpEndpoint endpoint);

  std::string complete(const CompletionRequest& request) override;
  bool single_flight() const override { return endpoint_.single_flight; }
  std::string name() const override { return "live"; }

  /// The request body for a prompt, exposed for inspection and tests.
  nlohmann::json request_body(const CompletionRequest& request) const;

 private:
  HttpEndpoint endpoint_;
};

// --- experiment runs -------------------------------------------------------

inline constexpr int kManifestVersion = 1;
inline constexpr std::string_view kZeroTimestamp = "1970-01-01T00:00:00Z";

struct ParseSummary {
  std::size_t elements = 0;
  std::size_t relationships = 0;
  std::size_t warnings = 0;
  std::optional<std::string> root;
};

struct RoundRecord {
  int round = 0;
  std::string prompt;
  std::optional<std::string> response;
  std::optional<std::string> error;
  std::optional<SafetyCase> parsed;  // lenient parse of the response
  ParseSummary summary;
  std::string timestamp;
};

struct RunManifest {
  ExperimentConfig config;
  std::string client;
  std::vector<RoundRecord> rounds;

  bool partial_failure() const;
};

/// Issues rounds_k completions of the same prompt, each parsed leniently.
/// A failing round is recorded and the remaining rounds still run.
RunManifest run_experiment(const ExperimentConfig& config, CompletionClient& client);

nlohmann::json to_json(const RunManifest& manifest);

/// Pretty-printed manifest JSON with sorted keys and a trailing newline.
std::string dump_manifest(const RunManifest& manifest);

// --- RQ1 question battery --------------------------------------------------

enum class QuestionCategory { RuleStructural, RuleSemantic, Generation };

std::string_view to_string(QuestionCategory c);
std::optional<QuestionCategory> parse_category(std::string_view s);

struct Question {
  std::string id;
  QuestionCategory category = QuestionCategory::RuleStructural;
  std::string text;
  std::string source;  // "published", "reconstructed" or "user"
};

class QuestionBank {
 public:
  QuestionBank() = default;
  explicit QuestionBank(std::vector<Question> questions) : questions_(std::move(questions)) {}

  /// 13 rule-based (structural + semantic) and 6 generation questions.
  static QuestionBank defaults();

  /// One `<category>|<question>` per line; blank and '#' lines skipped.
  /// Throws ConfigError naming the offending line.
  static QuestionBank parse(std::string_view text);
  static QuestionBank load(const std::filesystem::path& path);

  QuestionBank filtered(QuestionCategory category) const;

  const std::vector<Question>& questions() const { return questions_; }
  std::size_t rule_based_count() const;
  std::size_t generation_count() const;
  bool empty() const { return questions_.empty(); }

 private:
  std::vector<Question> questions_;
};

struct Rq1Session {
  std::vector<std::string> prompts;  // preparatory statement first, then each question
  bool single_conversation = true;   // all prompts go to one conversation, in order
};

/// Throws ConfigError for an empty bank.
Rq1Session build_rq1_session(const QuestionBank& bank);

}  // namespace scw::gen
