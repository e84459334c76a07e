#include "scw/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <set>
#include <sstream>

#include "http.hpp"

namespace scw::eval {

// --- rank agreement --------------------------------------------------------

namespace {

// Sorts `values` and returns the number of strict inversions.
long long sort_counting_inversions(std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> buffer(n);
  long long inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) {
        if (values[j] < values[i]) {
          inversions += static_cast<long long>(mid - i);
          buffer[k++] = values[j++];
        } else {
          buffer[k++] = values[i++];
        }
      }
      while (i < mid) buffer[k++] = values[i++];
      while (j < hi) buffer[k++] = values[j++];
    }
    values.swap(buffer);
  }
  return inversions;
}

template <class Eq>
long long tied_pairs_in_runs(std::size_t n, Eq same) {
  long long total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && same(i - 1, i)) {
      ++run;
    } else {
      total += static_cast<long long>(run) * static_cast<long long>(run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

}  // namespace

PairCounts count_pairs(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw EvalError("rank vectors differ in length");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw EvalError("rank vectors must be finite");
  }
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x] != a[y] ? a[x] < a[y] : b[x] < b[y];
  });

  const long long tied_a = tied_pairs_in_runs(n, [&](std::size_t i, std::size_t j) { return a[order[i]] == a[order[j]]; });
  const long long tied_ab = tied_pairs_in_runs(n, [&](std::size_t i, std::size_t j) {
    return a[order[i]] == a[order[j]] && b[order[i]] == b[order[j]];
  });

  std::vector<double> seq(n);
  for (std::size_t i = 0; i < n; ++i) seq[i] = b[order[i]];
  const long long discordant = sort_counting_inversions(seq);
  const long long tied_b = tied_pairs_in_runs(n, [&](std::size_t i, std::size_t j) { return seq[i] == seq[j]; });

  const long long all = static_cast<long long>(n) * static_cast<long long>(n > 0 ? n - 1 : 0) / 2;
  PairCounts out;
  out.tied = tied_a + tied_b - tied_ab;
  out.discordant = discordant;
  out.concordant = all - out.tied - discordant;
  return out;
}

std::optional<double> kendalls_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw EvalError("rank vectors differ in length");
  if (a.size() < 2) throw EvalError("kendall's tau needs at least two paired scores");
  const PairCounts c = count_pairs(a, b);
  const long long decided = c.concordant + c.discordant;
  if (decided == 0) return std::nullopt;
  return static_cast<double>(c.concordant - c.discordant) / static_cast<double>(decided);
}

// --- document similarity ---------------------------------------------------

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (c < 0x80 && std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

TfVector term_frequencies(std::string_view text) {
  TfVector v;
  for (auto& t : tokenize(text)) ++v[t];
  return v;
}

double cosine(const TfVector& a, const TfVector& b) {
  if (a.empty() || b.empty()) throw EvalError("document has no tokens");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [term, count] : a) {
    na += static_cast<double>(count) * static_cast<double>(count);
    if (auto it = b.find(term); it != b.end()) dot += static_cast<double>(count) * static_cast<double>(it->second);
  }
  for (const auto& [term, count] : b) nb += static_cast<double>(count) * static_cast<double>(count);
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw EvalError("embedding dimensions differ");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw EvalError("zero-length embedding vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double cosine_similarity_tf(std::string_view doc_a, std::string_view doc_b) {
  return cosine(term_frequencies(doc_a), term_frequencies(doc_b));
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string url, std::string api_key, int timeout_seconds)
    : url_(std::move(url)), api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {}

std::vector<std::vector<double>> HttpEmbeddingProvider::embed(const std::vector<std::string>& texts) {
  nlohmann::json reply;
  try {
    reply = http::post_json(url_, {{"texts", texts}}, api_key_, timeout_seconds_);
  } catch (const http::TransportError& e) {
    throw EvalError(std::string("embedding provider: ") + e.what());
  }
  if (!reply.is_object() || !reply.contains("vectors") || !reply["vectors"].is_array()) {
    throw EvalError("embedding provider reply has no 'vectors' array");
  }
  std::vector<std::vector<double>> out;
  try {
    out = reply["vectors"].get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception&) {
    throw EvalError("embedding provider returned non-numeric vectors");
  }
  if (out.size() != texts.size()) throw EvalError("embedding provider returned the wrong number of vectors");
  for (const auto& v : out) {
    if (v.size() != out.front().size()) throw EvalError("embedding provider returned mixed dimensions");
  }
  return out;
}

double cosine_similarity_embedding(std::string_view doc_a, std::string_view doc_b, EmbeddingProvider& provider) {
  const auto vectors = provider.embed({std::string(doc_a), std::string(doc_b)});
  if (vectors.size() != 2) throw EvalError("embedding provider returned the wrong number of vectors");
  return cosine(vectors[0], vectors[1]);
}

std::vector<double> score_against(std::string_view reference, const std::vector<std::string>& documents,
                                  EmbeddingProvider* provider) {
  std::vector<double> out;
  if (provider) {
    std::vector<std::string> batch{std::string(reference)};
    batch.insert(batch.end(), documents.begin(), documents.end());
    const auto vectors = provider->embed(batch);
    if (vectors.size() != batch.size()) throw EvalError("embedding provider returned the wrong number of vectors");
    for (std::size_t i = 1; i < vectors.size(); ++i) out.push_back(cosine(vectors[0], vectors[i]));
    return out;
  }
  const TfVector ref = term_frequencies(reference);
  std::vector<std::future<double>> pending;
  for (const auto& doc : documents) {
    pending.push_back(std::async(std::launch::async, [&ref, &doc] { return cosine(ref, term_frequencies(doc)); }));
  }
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

// --- human ratings ---------------------------------------------------------

std::string_view to_string(Measure m) {
  return m == Measure::GroundTruth ? "ground_truth" : "reasonability";
}

namespace {

bool is_label(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

IngestResult parse_ratings(std::string_view csv) {
  if (csv.starts_with("\xEF\xBB\xBF")) csv.remove_prefix(3);
  IngestResult result;
  int lineno = 0;
  bool header_seen = false;
  std::size_t start = 0;
  while (start < csv.size()) {
    auto nl = csv.find('\n', start);
    if (nl == std::string_view::npos) nl = csv.size();
    std::string_view line = csv.substr(start, nl - start);
    start = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kRatingsHeader) {
        throw EvalError("ratings header must be '" + std::string(kRatingsHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    auto fail = [&](std::string message) { result.errors.push_back(RowError{lineno, std::move(message)}); };
    const auto f = split_commas(line);
    if (f.size() != 6) {
      fail("expected 6 fields, got " + std::to_string(f.size()));
      continue;
    }
    RatingRecord r;
    if (!is_label(f[0])) {
      fail("case label must match [A-Za-z0-9_-]+");
      continue;
    }
    r.case_label = std::string(f[0]);
    const auto exp = to_int(f[1]);
    if (!exp || *exp < 1 || *exp > 4) {
      fail("experiment out of 1..4");
      continue;
    }
    r.experiment = *exp;
    const auto round = to_int(f[2]);
    if (!round || *round < 1) {
      fail("round must be a positive integer");
      continue;
    }
    r.round = *round;
    if (!is_label(f[3])) {
      fail("rater must match [A-Za-z0-9_-]+");
      continue;
    }
    r.rater = std::string(f[3]);
    if (f[4] == "ground_truth") {
      r.measure = Measure::GroundTruth;
    } else if (f[4] == "reasonability") {
      r.measure = Measure::Reasonability;
    } else {
      fail("measure must be ground_truth or reasonability");
      continue;
    }
    const auto score = to_int(f[5]);
    if (!score || *score < 1 || *score > 5) {
      fail("score out of 1..5");
      continue;
    }
    r.score = *score;
    result.records.push_back(std::move(r));
  }
  if (!header_seen) throw EvalError("ratings file is empty; expected header '" + std::string(kRatingsHeader) + "'");
  return result;
}

IngestResult ingest_ratings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EvalError("cannot read ratings file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_ratings(buf.str());
}

// --- aggregation -----------------------------------------------------------

double round_half_up(double value, int places) {
  const double scale = std::pow(10.0, places);
  const double snapped = std::round(value * scale * 1e6) / 1e6;
  const double rounded = snapped >= 0 ? std::floor(snapped + 0.5) : -std::floor(-snapped + 0.5);
  return rounded / scale;
}

std::string format_fixed(double value, int places) {
  double r = round_half_up(value, places);
  if (r == 0.0) r = 0.0;  // no "-0.00"
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(places);
  out << r;
  return out.str();
}

namespace {

double mean(std::span<const double> values) {
  if (values.empty()) throw EvalError("cannot average an empty group");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ScoreRow make_row(std::string label, std::span<const double> cells) {
  ScoreRow row;
  row.label = std::move(label);
  row.cells.assign(cells.begin(), cells.end());
  row.avg = mean(row.cells);
  return row;
}

ScoreRow aggregate_row(std::string label, const std::vector<std::vector<double>>& groups) {
  std::vector<double> cells;
  for (const auto& g : groups) cells.push_back(mean(g));
  return make_row(std::move(label), cells);
}

ScoreTable ratings_table(const std::vector<RatingRecord>& records, Measure measure) {
  std::map<std::string, std::map<int, std::vector<double>>> grouped;
  std::set<int> experiments;
  for (const auto& r : records) {
    if (r.measure != measure) continue;
    grouped[r.case_label][r.experiment].push_back(r.score);
    experiments.insert(r.experiment);
  }
  ScoreTable table;
  table.title = measure == Measure::GroundTruth ? "Average ground-truth similarity scores"
                                                : "Average reasonability scores";
  table.row_header = "Safety case";
  table.integer_interpretation = true;
  for (int e : experiments) table.columns.push_back("Exp-" + std::to_string(e));
  for (const auto& [label, by_exp] : grouped) {
    std::vector<std::vector<double>> groups;
    for (int e : experiments) {
      const auto it = by_exp.find(e);
      if (it == by_exp.end()) {
        throw EvalError("no " + std::string(to_string(measure)) + " ratings for case " + label + " in experiment " +
                        std::to_string(e));
      }
      groups.push_back(it->second);
    }
    table.rows.push_back(aggregate_row(label, groups));
  }
  annotate_reference_values(table, measure);
  return table;
}

void annotate_reference_values(ScoreTable& table, Measure measure) {
  struct Reference {
    Measure measure;
    std::string_view label;
    double headline;
  };
  // Headline averages quoted in the narrative that accompanies the
  // reference tables, where they disagree with the tabulated cells.
  static constexpr Reference kReferences[] = {
      {Measure::Reasonability, "xray", 2.27},
  };
  for (const auto& ref : kReferences) {
    if (ref.measure != measure) continue;
    for (const auto& row : table.rows) {
      if (row.label != ref.label) continue;
      const std::string ours = format_fixed(row.avg, 2);
      const std::string theirs = format_fixed(ref.headline, 2);
      if (ours == theirs) continue;
      table.notes.push_back(row.label + ": the narrative summary of the reference results states " + theirs +
                            ", while the mean of its tabulated cells is " + ours +
                            "; this table reports the cell arithmetic.");
    }
  }
}

// --- grades ----------------------------------------------------------------

GradeScale GradeScale::defaults() {
  GradeScale s;
  s.bands_ = {{90, "A+"}, {80, "A"}, {75, "B+"}, {70, "B"}, {65, "C+"},
              {60, "C"},  {55, "D+"}, {50, "D"}, {40, "E"}};
  s.floor_letter_ = "F";
  return s;
}

GradeScale GradeScale::parse(std::string_view spec) {
  GradeScale s;
  s.bands_.clear();
  s.floor_letter_ = "F";
  for (auto item : split_commas(spec)) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) throw EvalError("grade band must be <min-percent>:<letter>");
    double min = 0;
    const auto num = item.substr(0, colon);
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), min);
    if (ec != std::errc{} || ptr != num.data() + num.size()) throw EvalError("bad grade threshold '" + std::string(num) + "'");
    const std::string letter(item.substr(colon + 1));
    if (letter.empty()) throw EvalError("empty grade letter");
    if (!s.bands_.empty() && min >= s.bands_.back().min_percent) {
      throw EvalError("grade thresholds must be strictly decreasing");
    }
    s.bands_.push_back({min, letter});
  }
  if (s.bands_.empty()) throw EvalError("grade scale is empty");
  return s;
}

std::string GradeScale::letter_for(double percent) const {
  for (const auto& band : bands_) {
    if (percent >= band.min_percent) return band.letter;
  }
  return floor_letter_;
}

Grade grade_of(double avg_score, const GradeScale& scale) {
  if (!(avg_score >= 1.0 && avg_score <= 5.0)) throw EvalError("average score must lie in [1, 5]");
  Grade g;
  g.percent = std::round((100.0 - 25.0 * (avg_score - 1.0)) * 1e6) / 1e6;
  g.letter = scale.letter_for(g.percent);
  return g;
}

Rq1Grading grade_rq1(const std::vector<ScoreRow>& assessors, const GradeScale& scale) {
  if (assessors.empty()) throw EvalError("no assessor rows");
  Rq1Grading out;
  out.table.title = "Average scores of all questions";
  out.table.row_header = "Assessor";
  const std::size_t rounds = assessors.front().cells.size();
  for (std::size_t r = 1; r <= rounds; ++r) out.table.columns.push_back("R" + std::to_string(r));
  std::vector<double> avgs;
  for (const auto& row : assessors) {
    if (row.cells.size() != rounds) throw EvalError("assessor rows cover different numbers of rounds");
    out.table.rows.push_back(row);
    avgs.push_back(row.avg);
  }
  out.combined = mean(avgs);
  out.grade = grade_of(out.combined, scale);
  out.table.notes.push_back("Combined average " + format_fixed(out.combined, 2) + " corresponds to " +
                            format_fixed(out.grade.percent, 2) + "%, grade " + out.grade.letter + ".");
  return out;
}

ScoreTable tau_table(const std::vector<std::pair<std::vector<double>, std::vector<double>>>& rounds) {
  ScoreTable table;
  table.title = "Kendall's tau between raters per round";
  table.row_header = "Measure";
  std::vector<double> taus;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const auto tau = kendalls_tau(rounds[i].first, rounds[i].second);
    if (!tau) throw EvalError("tau is undefined for round " + std::to_string(i + 1) + " (all pairs tied)");
    taus.push_back(*tau);
    table.columns.push_back("R" + std::to_string(i + 1));
  }
  table.rows.push_back(make_row("tau", taus));
  table.notes.push_back("tau = (C - D) / (C + D); pairs tied for either rater are excluded.");
  return table;
}

// --- reporting -------------------------------------------------------------

std::string emit_report(const std::vector<ScoreTable>& tables, ReportFormat format) {
  if (tables.empty()) return {};
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "table,row,column,value,display\n";
    for (const auto& t : tables) {
      const std::string title = csv_field(t.title);
      for (const auto& row : t.rows) {
        const std::string label = csv_field(row.label);
        for (std::size_t i = 0; i < row.cells.size(); ++i) {
          const std::string col = i < t.columns.size() ? t.columns[i] : "C" + std::to_string(i + 1);
          out << title << ',' << label << ',' << csv_field(col) << ',' << shortest(row.cells[i]) << ','
              << format_fixed(row.cells[i], 2) << '\n';
        }
        out << title << ',' << label << ",Avg," << shortest(row.avg) << ',' << format_fixed(row.avg, 2) << '\n';
        if (t.integer_interpretation) {
          out << title << ',' << label << ",Int," << shortest(row.avg) << ',' << format_fixed(row.avg, 0) << '\n';
        }
      }
      for (const auto& note : t.notes) out << title << ",,note,," << csv_field(note) << '\n';
    }
    return out.str();
  }

  bool first = true;
  for (const auto& t : tables) {
    if (!first) out << '\n';
    first = false;
    out << "### " << t.title << "\n\n";
    out << "| " << t.row_header;
    for (const auto& c : t.columns) out << " | " << c;
    out << " | Avg";
    if (t.integer_interpretation) out << " | Int";
    out << " |\n|---";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << "|---:";
    out << "|---:";
    if (t.integer_interpretation) out << "|---:";
    out << "|\n";
    for (const auto& row : t.rows) {
      out << "| " << row.label;
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << " | " << (i < row.cells.size() ? format_fixed(row.cells[i], 2) : "-");
      }
      out << " | " << format_fixed(row.avg, 2);
      if (t.integer_interpretation) out << " | " << format_fixed(row.avg, 0);
      out << " |\n";
    }
    out << "\nRounding: " << t.rounding << ".\n";
    for (const auto& note : t.notes) out << "Note: " << note << '\n';
  }
  return out.str();
}

}  // namespace scw::eval
