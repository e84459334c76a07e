// scw: safety-case workbench command line.
//
// Exit status: 0 success, 1 domain failure (validation, evaluation),
// 2 environment failure (I/O, configuration, usage).

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scw/config.hpp"
#include "scw/corpus.hpp"
#include "scw/dot.hpp"
#include "scw/eval.hpp"
#include "scw/generation.hpp"
#include "scw/gsn.hpp"
#include "scw/prose.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kEnvironmentFailure = 2;

// Thrown for I/O and usage problems; maps to exit 2.
struct EnvironmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EnvironmentError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size()))) {
    throw EnvironmentError("cannot write " + path.string());
  }
}

void emit(const std::string& output, std::string_view content) {
  if (output.empty() || output == "-") {
    std::cout << content;
  } else {
    write_file(output, content);
  }
}

void print_diagnostics(std::string_view origin, const std::vector<scw::Diagnostic>& diags) {
  for (const auto& d : diags) std::cout << origin << ": " << scw::format_diagnostic(d) << '\n';
}

// Strict parse of a case file; parse diagnostics are printed.
std::optional<scw::SafetyCase> load_case(const std::string& path) {
  const auto outcome = scw::prose::parse_strict(read_file(path));
  print_diagnostics(path, outcome.diagnostics);
  if (!outcome.ok()) return std::nullopt;
  return outcome.safety_case;
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto start = text.find_first_not_of(" \t\r\n,", i);
    if (start == std::string_view::npos) break;
    auto end = text.find_first_of(" \t\r\n,", start);
    if (end == std::string_view::npos) end = text.size();
    const auto token = text.substr(start, end - start);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw EnvironmentError("not a number: '" + std::string(token) + "'");
    }
    out.push_back(v);
    i = end;
  }
  return out;
}

// A comma list of numbers, or a file holding one.
std::vector<double> numbers_from(const std::string& arg) {
  if (fs::is_regular_file(arg)) return parse_numbers(read_file(arg));
  return parse_numbers(arg);
}

// RQ1 scores: header `round,question,score`, one row per answer.
// Returns per-round score vectors ordered by question id.
std::map<int, std::vector<double>> load_rq1_scores(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw EnvironmentError(path + ": empty RQ1 score file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "round,question,score") throw EnvironmentError(path + ": header must be 'round,question,score'");
  std::map<int, std::map<std::string, double>> by_round;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream fields(line);
    for (std::string part; std::getline(fields, part, ',');) f.push_back(part);
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    if (f.size() != 3) throw EnvironmentError(where + "expected round,question,score");
    int round = 0;
    int score = 0;
    if (std::from_chars(f[0].data(), f[0].data() + f[0].size(), round).ec != std::errc{} || round < 1) {
      throw EnvironmentError(where + "bad round");
    }
    if (std::from_chars(f[2].data(), f[2].data() + f[2].size(), score).ec != std::errc{} || score < 1 ||
        score > 5) {
      throw EnvironmentError(where + "score out of 1..5");
    }
    if (!by_round[round].emplace(f[1], score).second) throw EnvironmentError(where + "duplicate question " + f[1]);
  }
  std::map<int, std::vector<double>> out;
  for (const auto& [round, scores] : by_round) {
    auto& v = out[round];
    for (const auto& [q, s] : scores) v.push_back(s);
  }
  if (out.empty()) throw EnvironmentError(path + ": no scores");
  return out;
}

struct GeneratedFile {
  int experiment;
  int round;
  fs::path path;
};

std::vector<GeneratedFile> scan_generated(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw EnvironmentError("not a directory: " + dir.string());
  static const std::regex name_re(R"(^.+\.exp([1-4])\.round([0-9]+)\.gsn\.txt$)");
  std::vector<GeneratedFile> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, name_re)) continue;
    out.push_back({std::stoi(m[1].str()), std::stoi(m[2].str()), entry.path()});
  }
  std::sort(out.begin(), out.end(), [](const GeneratedFile& a, const GeneratedFile& b) {
    return std::tie(a.experiment, a.round, a.path) < std::tie(b.experiment, b.round, b.path);
  });
  return out;
}

// --- subcommands -----------------------------------------------------------

struct Globals {
  std::string config_path;

  scw::WorkbenchConfig config() const {
    if (!config_path.empty()) return scw::load_config(fs::path(config_path));
    if (fs::exists("workbench.toml")) return scw::load_config(fs::path("workbench.toml"));
    return scw::load_config(std::nullopt);
  }
};

struct ValidateArgs {
  std::string path;
  bool strict_warnings = false;
  bool allow_multiple_roots = false;
};

int cmd_validate(const Globals& g, const ValidateArgs& a) {
  const auto cfg = g.config();
  const auto sc = load_case(a.path);
  if (!sc) return kDomainFailure;
  scw::ValidateOptions opts;
  opts.allow_multiple_roots = a.allow_multiple_roots || cfg.allow_multiple_roots;
  const auto diags = scw::validate(*sc, opts);
  print_diagnostics(a.path, diags);
  std::size_t errors = 0;
  for (const auto& d : diags) errors += d.severity == scw::Severity::Error ? 1 : 0;
  std::cout << a.path << ": " << errors << " error(s), " << diags.size() - errors << " warning(s)\n";
  if (errors > 0 || (a.strict_warnings && !diags.empty())) return kDomainFailure;
  return kOk;
}

struct RenderArgs {
  std::string path;
  std::optional<int> wrap;
  bool force = false;
  bool allow_multiple_roots = false;
  std::string output;
};

int cmd_render(const Globals& g, const RenderArgs& a) {
  const auto cfg = g.config();
  const auto sc = load_case(a.path);
  if (!sc) return kDomainFailure;
  scw::dot::DotOptions opts;
  opts.wrap = a.wrap ? static_cast<std::size_t>(*a.wrap) : cfg.wrap;
  opts.force = a.force;
  opts.validation.allow_multiple_roots = a.allow_multiple_roots || cfg.allow_multiple_roots;
  const auto diags = scw::validate(*sc, opts.validation);
  if (scw::has_errors(diags)) {
    print_diagnostics(a.path, diags);
    if (!a.force) {
      std::cerr << "render: case has errors; use --force to render anyway\n";
      return kDomainFailure;
    }
  }
  emit(a.output, scw::dot::to_dot(*sc, opts));
  return kOk;
}

struct GenerateArgs {
  std::string case_label;
  std::string brief_path;
  int experiment = 1;
  std::optional<int> k;
  std::string client = "replay";
  std::string replay_dir;
  std::string out_dir;
  std::string seed_label;
};

int cmd_generate(const Globals& g, const GenerateArgs& a) {
  const auto cfg = g.config();
  scw::gen::ExperimentConfig exp;
  if (!a.case_label.empty()) {
    auto brief = scw::gen::bundled_brief(a.case_label);
    if (!brief) throw EnvironmentError("no bundled brief for case '" + a.case_label + "'");
    exp.brief = std::move(*brief);
    exp.seed_label = a.case_label;
  } else {
    exp.brief = scw::gen::load_brief(a.brief_path);
    exp.seed_label = fs::path(a.brief_path).stem().string();
  }
  if (!a.seed_label.empty()) exp.seed_label = a.seed_label;
  exp.experiment = a.experiment;
  if (a.k) exp.rounds_k = *a.k;
  exp.params = cfg.llm.params;
  exp.check();

  std::unique_ptr<scw::gen::CompletionClient> client;
  if (a.client == "replay") {
    client = std::make_unique<scw::gen::ReplayClient>(a.replay_dir.empty() ? cfg.replay_dir : a.replay_dir);
  } else {
    scw::gen::HttpEndpoint ep;
    ep.url = cfg.llm.url;
    ep.model = cfg.llm.model;
    ep.wire = cfg.llm.wire == "prompt" ? scw::gen::WireShape::Prompt : scw::gen::WireShape::Chat;
    ep.api_key = cfg.llm.api_key;
    ep.timeout_seconds = cfg.llm.timeout_seconds;
    ep.single_flight = cfg.llm.single_flight;
    client = std::make_unique<scw::gen::HttpCompletionClient>(std::move(ep));
  }

  const auto manifest = scw::gen::run_experiment(exp, *client);
  const fs::path out = a.out_dir.empty() ? fs::path(cfg.out_dir) : fs::path(a.out_dir);
  const std::string stem = exp.seed_label + ".exp" + std::to_string(exp.experiment);
  write_file(out / (stem + ".manifest.json"), scw::gen::dump_manifest(manifest));
  for (const auto& r : manifest.rounds) {
    if (r.parsed) {
      write_file(out / (stem + ".round" + std::to_string(r.round) + ".gsn.txt"), scw::prose::serialize(*r.parsed));
      std::cout << "round " << r.round << ": " << r.summary.elements << " element(s), " << r.summary.relationships
                << " relationship(s), " << r.summary.warnings << " parse warning(s)\n";
    } else {
      std::cerr << "round " << r.round << ": " << r.error.value_or("no response") << '\n';
    }
  }
  std::cout << "manifest: " << (out / (stem + ".manifest.json")).string() << '\n';
  return manifest.partial_failure() ? kEnvironmentFailure : kOk;
}

struct EvaluateArgs {
  std::string generated;
  std::string truth;
  std::string ratings;
  std::vector<std::string> rq1_scores;
  std::string vectorizer = "tf";
  std::string format = "md";
  std::string output;
};

int cmd_evaluate(const Globals& g, const EvaluateArgs& a) {
  namespace ev = scw::eval;
  const auto cfg = g.config();
  if (a.generated.empty() && a.ratings.empty() && a.rq1_scores.empty()) {
    throw EnvironmentError("evaluate needs --generated, --ratings or --rq1-scores");
  }
  std::vector<ev::ScoreTable> tables;

  if (!a.generated.empty()) {
    if (a.truth.empty()) throw EnvironmentError("--generated requires --truth");
    std::string truth_label;
    std::string truth_text;
    if (auto c = scw::corpus::find(a.truth)) {
      truth_label = a.truth;
      truth_text = scw::prose::serialize(c->get().safety_case);
    } else {
      truth_text = read_file(a.truth);
      truth_label = fs::path(a.truth).stem().string();
      if (truth_label.ends_with(".gsn")) truth_label.resize(truth_label.size() - 4);
      const auto parsed = scw::prose::parse_strict(truth_text);
      if (!parsed.ok()) {
        print_diagnostics(a.truth, parsed.diagnostics);
        std::cerr << "evaluate: truth file is not a valid case\n";
        return kDomainFailure;
      }
    }
    const auto files = scan_generated(a.generated);
    if (files.empty()) throw EnvironmentError("no <seed>.exp<e>.round<r>.gsn.txt files in " + a.generated);
    std::vector<std::string> docs;
    for (const auto& f : files) {
      docs.push_back(read_file(f.path));
      const auto parsed = scw::prose::parse_lenient(docs.back());
      for (const auto& d : parsed.diagnostics) std::cerr << f.path.string() << ": " << scw::format_diagnostic(d) << '\n';
    }
    std::unique_ptr<ev::EmbeddingProvider> provider;
    if (a.vectorizer == "embed") {
      provider = std::make_unique<ev::HttpEmbeddingProvider>(cfg.embed.url, cfg.embed.api_key, cfg.embed.timeout_seconds);
    }
    std::vector<double> scores;
    try {
      scores = ev::score_against(truth_text, docs, provider.get());
    } catch (const ev::EvalError& e) {
      if (provider) throw EnvironmentError(e.what());
      throw;
    }
    std::map<int, std::vector<double>> by_exp;
    for (std::size_t i = 0; i < files.size(); ++i) by_exp[files[i].experiment].push_back(scores[i]);
    ev::ScoreTable t;
    t.title = "Average cosine similarity scores";
    for (const auto& [e, v] : by_exp) t.columns.push_back("Exp-" + std::to_string(e));
    std::vector<std::vector<double>> groups;
    for (const auto& [e, v] : by_exp) groups.push_back(v);
    t.rows.push_back(ev::aggregate_row(truth_label, groups));
    t.notes.push_back(a.vectorizer == "embed" ? "Vectorizer: embedding provider at " + cfg.embed.url
                                              : std::string("Vectorizer: term-frequency counts (tf)."));
    tables.push_back(std::move(t));
  }

  if (!a.ratings.empty()) {
    const auto ingest = ev::ingest_ratings(a.ratings);
    for (const auto& e : ingest.errors) std::cerr << a.ratings << ":" << e.line << ": " << e.message << '\n';
    if (!ingest.ok()) return kDomainFailure;
    for (auto m : {ev::Measure::GroundTruth, ev::Measure::Reasonability}) {
      bool any = false;
      for (const auto& r : ingest.records) any = any || r.measure == m;
      if (any) tables.push_back(ev::ratings_table(ingest.records, m));
    }
  }

  if (!a.rq1_scores.empty()) {
    if (a.rq1_scores.size() != 2) throw EnvironmentError("--rq1-scores takes exactly two files");
    const auto first = load_rq1_scores(a.rq1_scores[0]);
    const auto second = load_rq1_scores(a.rq1_scores[1]);
    std::vector<std::pair<std::vector<double>, std::vector<double>>> rounds;
    std::vector<double> avg_a;
    std::vector<double> avg_b;
    for (const auto& [round, va] : first) {
      const auto it = second.find(round);
      if (it == second.end()) throw EnvironmentError("round " + std::to_string(round) + " missing from second scores");
      rounds.emplace_back(va, it->second);
      avg_a.push_back(ev::make_row("", va).avg);
      avg_b.push_back(ev::make_row("", it->second).avg);
    }
    if (second.size() != first.size()) throw EnvironmentError("RQ1 score files cover different rounds");
    tables.push_back(ev::tau_table(rounds));
    const auto scale = cfg.grade_scale.empty() ? ev::GradeScale::defaults() : ev::GradeScale::parse(cfg.grade_scale);
    auto graded = ev::grade_rq1({ev::make_row("Assessor-1", avg_a), ev::make_row("Assessor-2", avg_b)}, scale);
    tables.push_back(std::move(graded.table));
  }

  emit(a.output, ev::emit_report(tables, a.format == "csv" ? ev::ReportFormat::Csv : ev::ReportFormat::Markdown));
  return kOk;
}

int cmd_tau(const std::string& first, const std::string& second) {
  const auto a = numbers_from(first);
  const auto b = numbers_from(second);
  const auto counts = scw::eval::count_pairs(a, b);
  const auto tau = scw::eval::kendalls_tau(a, b);
  std::cout << "C=" << counts.concordant << " D=" << counts.discordant << " tied=" << counts.tied << '\n';
  if (!tau) {
    std::cout << "tau undefined: every pair is tied\n";
    return kDomainFailure;
  }
  std::cout << "tau=" << scw::eval::format_fixed(*tau, 4) << '\n';
  return kOk;
}

int cmd_corpus_list() {
  for (const auto& label : scw::corpus::labels()) {
    const auto& c = scw::corpus::get(label);
    std::size_t quoted = 0;
    for (const auto& [id, p] : c.provenance) quoted += p == scw::corpus::Provenance::Quoted ? 1 : 0;
    std::cout << label << "\t" << c.safety_case.title << "\t" << c.safety_case.elements.size() << " elements, "
              << c.safety_case.relationships.size() << " relationships, " << quoted << " quoted\n";
  }
  return kOk;
}

int cmd_corpus_export(const std::string& label, const std::string& output, bool provenance) {
  const auto c = scw::corpus::find(label);
  if (!c) throw EnvironmentError("unknown corpus case '" + label + "'");
  if (provenance) {
    std::ostringstream out;
    for (const auto& e : c->get().safety_case.elements) {
      out << e.id << '\t' << scw::corpus::to_string(c->get().provenance.at(e.id)) << '\n';
    }
    emit(output, out.str());
    return kOk;
  }
  emit(output, scw::prose::serialize(c->get().safety_case));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scw: GSN safety case workbench"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--config", globals.config_path, "TOML-style config file (default ./workbench.toml)");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "check a structured-prose case file");
  validate->add_option("path", va.path)->required();
  validate->add_flag("--strict-warnings", va.strict_warnings, "fail on warnings too");
  validate->add_flag("--allow-multiple-roots", va.allow_multiple_roots);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "write Graphviz DOT for a case file");
  render->add_option("path", ra.path)->required();
  render->add_option("--wrap", ra.wrap, "label wrap width")->check(CLI::PositiveNumber);
  render->add_flag("--force", ra.force, "render even when validation fails");
  render->add_flag("--allow-multiple-roots", ra.allow_multiple_roots);
  render->add_option("-o,--output", ra.output);

  GenerateArgs ga;
  auto* generate = app.add_subcommand("generate", "run one prompting experiment");
  auto* case_opt = generate->add_option("--case", ga.case_label, "bundled brief: ml-tnr | xray");
  auto* brief_opt = generate->add_option("--brief", ga.brief_path, "brief file")->excludes(case_opt);
  case_opt->excludes(brief_opt);
  generate->add_option("--experiment", ga.experiment)->check(CLI::Range(1, 4));
  generate->add_option("--k", ga.k, "rounds")->check(CLI::PositiveNumber);
  generate->add_option("--client", ga.client)->check(CLI::IsMember({"live", "replay"}));
  generate->add_option("--replay-dir", ga.replay_dir);
  generate->add_option("--out", ga.out_dir);
  generate->add_option("--seed-label", ga.seed_label);

  EvaluateArgs ea;
  auto* evaluate = app.add_subcommand("evaluate", "score generated cases and ratings");
  evaluate->add_option("--generated", ea.generated, "directory of <seed>.exp<e>.round<r>.gsn.txt files");
  evaluate->add_option("--truth", ea.truth, "corpus label or case file");
  evaluate->add_option("--ratings", ea.ratings, "ratings CSV");
  evaluate->add_option("--rq1-scores", ea.rq1_scores, "two round,question,score files")->delimiter(',');
  evaluate->add_option("--vectorizer", ea.vectorizer)->check(CLI::IsMember({"tf", "embed"}));
  evaluate->add_option("--format", ea.format)->check(CLI::IsMember({"md", "csv"}));
  evaluate->add_option("-o,--output", ea.output);

  std::string tau_a;
  std::string tau_b;
  auto* tau = app.add_subcommand("tau", "Kendall's tau of two score vectors");
  tau->add_option("a", tau_a, "comma list or file")->required();
  tau->add_option("b", tau_b, "comma list or file")->required();

  auto* corpus = app.add_subcommand("corpus", "bundled ground-truth cases");
  corpus->require_subcommand(1);
  auto* corpus_list = corpus->add_subcommand("list");
  std::string export_label;
  std::string export_output;
  bool export_provenance = false;
  auto* corpus_export = corpus->add_subcommand("export");
  corpus_export->add_option("label", export_label)->required();
  corpus_export->add_option("-o,--output", export_output);
  corpus_export->add_flag("--provenance", export_provenance, "list quoted/reconstructed per element");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kEnvironmentFailure;
  }

  try {
    if (*validate) return cmd_validate(globals, va);
    if (*render) return cmd_render(globals, ra);
    if (*generate) {
      if (ga.case_label.empty() && ga.brief_path.empty()) throw EnvironmentError("generate needs --case or --brief");
      return cmd_generate(globals, ga);
    }
    if (*evaluate) return cmd_evaluate(globals, ea);
    if (*tau) return cmd_tau(tau_a, tau_b);
    if (*corpus_list) return cmd_corpus_list();
    if (*corpus_export) return cmd_corpus_export(export_label, export_output, export_provenance);
  } catch (const EnvironmentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironmentFailure;
  } catch (const scw::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironmentFailure;
  } catch (const scw::eval::EvalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEnvironmentFailure;
  }
  return kOk;
}
