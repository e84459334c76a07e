#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scw::eval {

class EvalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// --- rank agreement --------------------------------------------------------

struct PairCounts {
  long long concordant = 0;
  long long discordant = 0;
  long long tied = 0;  // tied in either vector; excluded from tau
};

/// Concordant/discordant/tied pair counts in O(n log n).
PairCounts count_pairs(std::span<const double> a, std::span<const double> b);

/// (C - D) / (C + D) with pairs tied in either vector left out of both
/// counts. This is neither tau-a nor tau-b. Returns nullopt when every pair
/// is tied. Throws EvalError on length mismatch or fewer than two entries.
std::optional<double> kendalls_tau(std::span<const double> a, std::span<const double> b);

// --- document similarity ---------------------------------------------------

/// Lowercased ASCII alphanumeric runs; every other byte separates tokens.
std::vector<std::string> tokenize(std::string_view text);

using TfVector = std::map<std::string, long long>;

TfVector term_frequencies(std::string_view text);

/// Cosine of two term-count vectors. Throws EvalError if either is empty.
double cosine(const TfVector& a, const TfVector& b);

/// Cosine of dense vectors. Throws EvalError on dimension mismatch or a zero vector.
double cosine(std::span<const double> a, std::span<const double> b);

/// Deterministic term-frequency cosine, in [0, 1].
double cosine_similarity_tf(std::string_view doc_a, std::string_view doc_b);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// One vector per text, all of the same dimension.
  virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
  virtual bool single_flight() const { return false; }
  virtual std::string name() const = 0;
};

/// POST {"texts": [...]} -> {"vectors": [[...], ...]}.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string url, std::string api_key, int timeout_seconds = 60);
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
  std::string name() const override { return "embed"; }

 private:
  std::string url_;
  std::string api_key_;
  int timeout_seconds_;
};

/// Embedding cosine, in [-1, 1]. Provider failures surface as EvalError.
double cosine_similarity_embedding(std::string_view doc_a, std::string_view doc_b, EmbeddingProvider& provider);

/// Similarity of each document to a reference. Uses the tf vectorizer when
/// `provider` is null; documents are scored concurrently.
std::vector<double> score_against(std::string_view reference, const std::vector<std::string>& documents,
                                  EmbeddingProvider* provider = nullptr);

// --- human ratings ---------------------------------------------------------

enum class Measure { GroundTruth, Reasonability };

std::string_view to_string(Measure m);

struct RatingRecord {
  std::string case_label;
  int experiment = 1;
  int round = 1;
  std::string rater;
  Measure measure = Measure::GroundTruth;
  int score = 1;

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

struct RowError {
  int line = 0;
  std::string message;
};

struct IngestResult {
  std::vector<RatingRecord> records;
  std::vector<RowError> errors;

  bool ok() const { return errors.empty(); }
};

inline constexpr std::string_view kRatingsHeader = "case,experiment,round,rater,measure,score";

/// Row problems are collected; a bad header throws EvalError.
IngestResult parse_ratings(std::string_view csv);
IngestResult ingest_ratings(const std::filesystem::path& path);

// --- aggregation and reporting ---------------------------------------------

/// Half-up rounding (half away from zero for negatives). The scaled value is
/// snapped to 1e-6 first so 1.475 stored as 1.47499... still rounds up.
double round_half_up(double value, int places);

/// round_half_up then fixed-point formatting.
std::string format_fixed(double value, int places);

struct ScoreRow {
  std::string label;
  std::vector<double> cells;  // unrounded
  double avg = 0.0;           // mean of the unrounded cells
};

/// Row whose cells are given directly. Throws EvalError when empty.
ScoreRow make_row(std::string label, std::span<const double> cells);

/// Each group becomes one cell (its mean). Throws EvalError on an empty group.
ScoreRow aggregate_row(std::string label, const std::vector<std::vector<double>>& groups);

struct ScoreTable {
  std::string title;
  std::string row_header = "Case";
  std::vector<std::string> columns;
  std::vector<ScoreRow> rows;
  std::vector<std::string> notes;
  bool integer_interpretation = false;  // adds a nearest-integer column after Avg
  std::string rounding = "half-up, 2 decimals";
};

/// Per-case, per-experiment means over rounds and raters for one measure.
/// Rows are ordered by case label, columns by experiment number.
ScoreTable ratings_table(const std::vector<RatingRecord>& records, Measure measure);

/// Adds a note where a row's cell arithmetic differs from the headline value
/// published alongside the reference tables.
void annotate_reference_values(ScoreTable& table, Measure measure);

struct GradeBand {
  double min_percent;
  std::string letter;
};

class GradeScale {
 public:
  /// >=90 A+, >=80 A, >=75 B+, >=70 B, >=65 C+, >=60 C, >=55 D+, >=50 D, >=40 E, else F.
  static GradeScale defaults();
  /// "90:A+,80:A,...,0:F"; thresholds must be strictly decreasing.
  static GradeScale parse(std::string_view spec);

  std::string letter_for(double percent) const;
  const std::vector<GradeBand>& bands() const { return bands_; }

 private:
  std::vector<GradeBand> bands_;
  std::string floor_letter_ = "F";
};

struct Grade {
  double percent = 0.0;
  std::string letter;
};

/// percent = 100 - 25 * (avg - 1) on the 1..5 scale. Throws EvalError outside [1, 5].
Grade grade_of(double avg_score, const GradeScale& scale = GradeScale::defaults());

struct Rq1Grading {
  ScoreTable table;
  double combined = 0.0;  // mean of the assessor averages
  Grade grade;
};

/// Per-assessor rows of per-round mean scores.
Rq1Grading grade_rq1(const std::vector<ScoreRow>& assessors, const GradeScale& scale = GradeScale::defaults());

/// One tau per round between two raters' score vectors. Throws EvalError if
/// a round's tau is undefined.
ScoreTable tau_table(const std::vector<std::pair<std::vector<double>, std::vector<double>>>& rounds);

enum class ReportFormat { Markdown, Csv };

/// Markdown tables at display precision, or long-form CSV
/// (table,row,column,value,display) carrying the unrounded values.
std::string emit_report(const std::vector<ScoreTable>& tables, ReportFormat format);

}  // namespace scw::eval
