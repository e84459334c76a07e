#include "scw/generation.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <sstream>

#include "http.hpp"
#include "scw/corpus.hpp"
#include "scw/prose.hpp"

namespace scw::gen {

// --- briefs and prompt blocks ----------------------------------------------

std::optional<SystemBrief> bundled_brief(std::string_view label) {
  if (label == "ml-tnr") {
    SystemBrief b;
    b.system_name = "ML algorithm";
    b.system_description =
        "The system is a Machine Learning (ML) algorithm that is used to implement the classification "
        "function of a Tire Noise Recognition (TNR) component of a vehicle.";
    b.objective =
        "The objective of the safety case is to develop a structured and convincing argument that the "
        "classifier fulfilled its technical requirements, with respect to functional inefficiencies that "
        "could lead to False Positives (FP) identifications of dry road surface conditions.";
    b.domain_paragraph =
        "The tire noise recognition component listens to microphones mounted near the wheels and labels "
        "the road surface condition from the recorded audio. Chassis control and powertrain functions "
        "consume that label to adapt their control parameters and keep traction consistent. The "
        "classification has to run in real time, and reporting a dry road while the surface is wet or "
        "icy is the failure that matters most for safety.";
    b.reconstructed = true;
    return b;
  }
  if (label == "xray") {
    SystemBrief b;
    b.system_name = "X-ray machine";
    b.system_description =
        "The system is an X-ray backscatter imaging machine, comparable to the scanners used for "
        "security screening at airports, that exposes people standing near it to ionizing radiation.";
    b.objective =
        "The objective of the safety case is to argue the elimination of all factors leading to "
        "overradiation.";
    b.domain_paragraph =
        "Overradiation happens when the delivered dose exceeds the acceptable limit for people close to "
        "the machine. The dose depends on tube current, exposure time and beam positioning, which are "
        "governed by control software and by hardware interlocks. Operators configure each scan from a "
        "console, and maintenance staff recalibrate the emitter on a fixed schedule.";
    b.reconstructed = true;
    return b;
  }
  return std::nullopt;
}

SystemBrief load_brief(const std::filesystem::path& path) {
  const KeyValues kv = load_key_values(path);
  for (const auto& [key, value] : kv) {
    if (key != "system_name" && key != "system_description" && key != "objective" &&
        key != "domain_paragraph") {
      throw ConfigError(path.string() + ": unknown brief key '" + key + "'");
    }
  }
  auto required = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end() || it->second.empty()) {
      throw ConfigError(path.string() + ": brief is missing '" + std::string(key) + "'");
    }
    return it->second;
  };
  SystemBrief b;
  b.system_name = required("system_name");
  b.system_description = required("system_description");
  b.objective = required("objective");
  if (auto it = kv.find("domain_paragraph"); it != kv.end() && !it->second.empty()) {
    b.domain_paragraph = it->second;
  }
  return b;
}

const std::string& default_syntax_block() {
  static const std::string block = [] {
    std::string s(kSyntaxSentinel);
    s +=
        "\n"
        "Elements: Goal (G), Strategy (S), Solution (Sn), Context (C), Assumption (A), Justification (J).\n"
        "Allowed connections:\n"
        "- Goal to goal, goal to strategy, goal to solution (SupportedBy)\n"
        "- Strategy to goal (SupportedBy)\n"
        "- Goal to context, goal to assumption, goal to justification (InContextOf)\n"
        "- Strategy to context, strategy to assumption, strategy to justification (InContextOf)\n"
        "Text rules:\n"
        "- Goal: noun phrase + verb phrase\n"
        "- Strategy: brief description of the argument approach\n"
        "- Solution: noun phrase\n"
        "- Context: noun phrase\n"
        "- Assumption: noun phrase + verb phrase\n"
        "- Justification: noun phrase + verb phrase\n"
        "Example safety case in structured prose:\n";
    s += prose::serialize(corpus::get("map-system").safety_case);
    return s;
  }();
  return block;
}

void ExperimentConfig::check() const {
  if (experiment < 1 || experiment > 4) {
    throw ConfigError("experiment must be 1, 2, 3 or 4 (got " + std::to_string(experiment) + ")");
  }
  if (rounds_k < 1) throw ConfigError("rounds must be at least 1");
  if (brief.system_description.empty() || brief.objective.empty()) {
    throw ConfigError("brief needs a system description and an objective");
  }
  if (uses_domain_knowledge() && (!brief.domain_paragraph || brief.domain_paragraph->empty())) {
    throw ConfigError("experiment " + std::to_string(experiment) + " requires a domain paragraph in the brief");
  }
  if (uses_syntax() && syntax_block.empty()) throw ConfigError("syntax block is empty");
}

std::string build_prompt(const ExperimentConfig& config) {
  config.check();
  std::ostringstream p;
  int question = 0;
  auto qa = [&](std::string_view q, std::string_view a) {
    p << "Question " << ++question << ": " << q << "\n";
    p << "Answer: " << a << "\n";
  };

  p << kRoleStatement << "\n\n";
  p << kQaIntro << "\n\n";
  qa("What is a safety case?", kSafetyCaseDefinition);
  qa("What is the format of the safety case", "I want you to generate a safety case in GSN Format");
  qa("What is the system for which you need to generate a safety case", config.brief.system_description);
  qa("What is the main objective of the safety case", config.brief.objective);
  if (config.uses_domain_knowledge()) qa(kDomainSentinel, *config.brief.domain_paragraph);
  if (config.uses_syntax()) {
    p << "Question " << ++question << ": What GSN syntax should the safety case follow?\n";
    p << "Answer:\n" << config.syntax_block;
    if (config.syntax_block.back() != '\n') p << "\n";
  }
  p << "\nCreate a top-level safety case for the " << config.brief.system_name << " in GSN format.\n";
  return p.str();
}

// --- clients ---------------------------------------------------------------

ReplayClient::ReplayClient(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::string ReplayClient::file_name(std::string_view seed_label, int experiment, int round) {
  return std::string(seed_label) + ".exp" + std::to_string(experiment) + ".round" + std::to_string(round) + ".txt";
}

std::string ReplayClient::complete(const CompletionRequest& request) {
  const auto path = directory_ / file_name(request.seed_label, request.experiment, request.round);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CompletionError("no canned response at " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

HttpCompletionClient::HttpCompletionClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

nlohmann::json HttpCompletionClient::request_body(const CompletionRequest& request) const {
  nlohmann::json body;
  body["model"] = endpoint_.model;
  body["params"] = request.params.is_null() ? nlohmann::json::object() : request.params;
  if (endpoint_.wire == WireShape::Chat) {
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}});
  } else {
    body["prompt"] = request.prompt;
  }
  return body;
}

std::string HttpCompletionClient::complete(const CompletionRequest& request) {
  nlohmann::json reply;
  try {
    reply = http::post_json(endpoint_.url, request_body(request), endpoint_.api_key, endpoint_.timeout_seconds);
  } catch (const http::TransportError& e) {
    throw CompletionError(e.what());
  }
  if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string()) {
    throw CompletionError("completion reply has no string field 'text'");
  }
  return reply["text"].get<std::string>();
}

// --- runs ------------------------------------------------------------------

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RoundRecord run_round(const ExperimentConfig& config, const std::string& prompt, CompletionClient& client,
                      int round) {
  RoundRecord rec;
  rec.round = round;
  rec.prompt = prompt;
  CompletionRequest request{prompt, config.params, config.seed_label, config.experiment, round};
  try {
    rec.response = client.complete(request);
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.timestamp = client.deterministic() ? std::string(kZeroTimestamp) : utc_now();
  if (rec.response) {
    auto outcome = prose::parse_lenient(*rec.response);
    rec.summary.elements = outcome.safety_case->elements.size();
    rec.summary.relationships = outcome.safety_case->relationships.size();
    rec.summary.warnings = outcome.diagnostics.size();
    rec.summary.root = root_of(*outcome.safety_case);
    rec.parsed = std::move(outcome.safety_case);
  }
  return rec;
}

nlohmann::json optional_json(const std::optional<std::string>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

bool RunManifest::partial_failure() const {
  for (const auto& r : rounds) {
    if (r.error) return true;
  }
  return false;
}

RunManifest run_experiment(const ExperimentConfig& config, CompletionClient& client) {
  const std::string prompt = build_prompt(config);
  RunManifest manifest;
  manifest.config = config;
  manifest.client = client.name();

  if (client.single_flight()) {
    for (int r = 1; r <= config.rounds_k; ++r) manifest.rounds.push_back(run_round(config, prompt, client, r));
    return manifest;
  }
  std::vector<std::future<RoundRecord>> pending;
  for (int r = 1; r <= config.rounds_k; ++r) {
    pending.push_back(std::async(std::launch::async, run_round, std::cref(config), std::cref(prompt),
                                 std::ref(client), r));
  }
  for (auto& f : pending) manifest.rounds.push_back(f.get());
  return manifest;
}

nlohmann::json to_json(const RunManifest& manifest) {
  const ExperimentConfig& c = manifest.config;
  nlohmann::json brief = {
      {"system_name", c.brief.system_name},
      {"system_description", c.brief.system_description},
      {"objective", c.brief.objective},
      {"domain_paragraph", optional_json(c.brief.domain_paragraph)},
      {"reconstructed", c.brief.reconstructed},
  };
  nlohmann::json config = {
      {"experiment", c.experiment},
      {"rounds_k", c.rounds_k},
      {"seed_label", c.seed_label},
      {"params", c.params.is_null() ? nlohmann::json::object() : c.params},
      {"brief", brief},
      {"includes_domain_knowledge", c.uses_domain_knowledge()},
      {"includes_syntax", c.uses_syntax()},
      {"syntax_block", c.uses_syntax() ? nlohmann::json(c.syntax_block) : nlohmann::json(nullptr)},
  };
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : manifest.rounds) {
    rounds.push_back({
        {"round", r.round},
        {"prompt", r.prompt},
        {"response", optional_json(r.response)},
        {"error", optional_json(r.error)},
        {"timestamp", r.timestamp},
        {"parse",
         {{"elements", r.summary.elements},
          {"relationships", r.summary.relationships},
          {"warnings", r.summary.warnings},
          {"root", optional_json(r.summary.root)}}},
    });
  }
  return {
      {"manifest_version", kManifestVersion},
      {"client", manifest.client},
      {"lenient_rules", std::string(prose::kLenientRulesVersion)},
      {"status", manifest.partial_failure() ? "partial_failure" : "ok"},
      {"config", config},
      {"rounds", rounds},
  };
}

std::string dump_manifest(const RunManifest& manifest) {
  return to_json(manifest).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

// --- RQ1 -------------------------------------------------------------------

std::string_view to_string(QuestionCategory c) {
  switch (c) {
    case QuestionCategory::RuleStructural: return "rule-structural";
    case QuestionCategory::RuleSemantic: return "rule-semantic";
    case QuestionCategory::Generation: return "generation";
  }
  return "?";
}

std::optional<QuestionCategory> parse_category(std::string_view s) {
  if (s == "rule-structural") return QuestionCategory::RuleStructural;
  if (s == "rule-semantic") return QuestionCategory::RuleSemantic;
  if (s == "generation") return QuestionCategory::Generation;
  return std::nullopt;
}

QuestionBank QuestionBank::defaults() {
  using C = QuestionCategory;
  struct Row {
    C category;
    const char* text;
    const char* source;
  };
  static constexpr Row kRows[] = {
      {C::RuleStructural,
       "How many elements are present in a goal-structure and what are they? Can a parent element have "
       "multiple children?",
       "published"},
      {C::RuleStructural, "Which GSN elements can a goal be connected to, and through which relationship?",
       "reconstructed"},
      {C::RuleStructural, "Which GSN elements can a strategy be connected to?", "reconstructed"},
      {C::RuleStructural, "Can a solution be supported by any other GSN element?", "reconstructed"},
      {C::RuleStructural, "What is the difference between the SupportedBy and InContextOf relationships?",
       "reconstructed"},
      {C::RuleStructural, "Which elements may be attached to a goal through an InContextOf relationship?",
       "reconstructed"},
      {C::RuleStructural, "Which shape is used to draw each of the six GSN elements?", "reconstructed"},
      {C::RuleStructural, "What do the undeveloped, uninstantiated and off-diagram decorators indicate?",
       "reconstructed"},
      {C::RuleSemantic, "Explain what a top-level claim is. Can it be supported by multiple sub-claims?",
       "published"},
      {C::RuleSemantic, "What grammatical form should the text of a goal take?", "reconstructed"},
      {C::RuleSemantic, "How should the text of a solution be phrased?", "reconstructed"},
      {C::RuleSemantic, "What should the description of a strategy convey?", "reconstructed"},
      {C::RuleSemantic, "How do an assumption and a justification differ in wording and purpose?",
       "reconstructed"},
      {C::Generation, "Give me a sample goal element connected to 2 sub-goals", "published"},
      {C::Generation, "Give me a sample strategy that decomposes a goal over the identified hazards",
       "reconstructed"},
      {C::Generation, "Give me a sample solution that supports a goal about software testing", "reconstructed"},
      {C::Generation, "Give me a sample context element attached to a top-level goal", "reconstructed"},
      {C::Generation, "Give me a sample assumption attached to a strategy", "reconstructed"},
      {C::Generation, "Give me a sample justification for the choice of a strategy", "reconstructed"},
  };
  std::vector<Question> qs;
  int n = 0;
  for (const auto& row : kRows) {
    qs.push_back(Question{"Q" + std::to_string(++n), row.category, row.text, row.source});
  }
  return QuestionBank(std::move(qs));
}

QuestionBank QuestionBank::parse(std::string_view text) {
  std::vector<Question> qs;
  const std::string normalized = prose::normalize_newlines(text);
  std::istringstream in(normalized);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto bar = line.find('|');
    if (bar == std::string::npos) {
      throw ConfigError("question bank line " + std::to_string(lineno) + ": expected <category>|<question>");
    }
    auto trimmed = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string cat = trimmed(line.substr(0, bar));
    const std::string question = trimmed(line.substr(bar + 1));
    const auto category = parse_category(cat);
    if (!category) {
      throw ConfigError("question bank line " + std::to_string(lineno) + ": unknown category '" + cat + "'");
    }
    if (question.empty()) {
      throw ConfigError("question bank line " + std::to_string(lineno) + ": empty question");
    }
    qs.push_back(Question{"Q" + std::to_string(qs.size() + 1), *category, question, "user"});
  }
  return QuestionBank(std::move(qs));
}

QuestionBank QuestionBank::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read question bank " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

QuestionBank QuestionBank::filtered(QuestionCategory category) const {
  std::vector<Question> qs;
  for (const auto& q : questions_) {
    if (q.category == category) qs.push_back(q);
  }
  return QuestionBank(std::move(qs));
}

std::size_t QuestionBank::rule_based_count() const {
  return questions_.size() - generation_count();
}

std::size_t QuestionBank::generation_count() const {
  std::size_t n = 0;
  for (const auto& q : questions_) n += q.category == QuestionCategory::Generation;
  return n;
}

Rq1Session build_rq1_session(const QuestionBank& bank) {
  if (bank.empty()) throw ConfigError("question bank is empty");
  Rq1Session session;
  session.prompts.emplace_back(kRq1Preparatory);
  for (const auto& q : bank.questions()) session.prompts.push_back(q.text);
  return session;
}

}  // namespace scw::gen
