#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sumread {

// ---------------------------------------------------------------------------
// Answer normalization
//
// The canonical routine shared by EM, F1, normalized IRA and the corpus
// containment filter. Steps, in order:
//   1. lowercase (ASCII, Latin-1, Latin Extended-A, basic Greek and Cyrillic)
//   2. delete punctuation characters (no space is inserted in their place)
//   3. split on whitespace (ASCII and the Unicode space separators)
//   4. drop the tokens "a", "an", "the"
// Bytes that are not valid UTF-8 pass through unchanged as ordinary
// characters.
// ---------------------------------------------------------------------------

struct NormalizedText {
  std::vector<std::string> tokens;

  std::string joined() const;
  friend bool operator==(const NormalizedText&, const NormalizedText&) = default;
};

NormalizedText normalize_answer(std::string_view text);

bool is_punctuation(char32_t cp);
bool is_whitespace(char32_t cp);
char32_t to_lower(char32_t cp);

// ---------------------------------------------------------------------------
// Per-instance scores
// ---------------------------------------------------------------------------

/// 1 iff the normalized prediction equals some normalized reference.
int exact_match(std::string_view prediction, std::span<const std::string> references);

/// Multiset unigram F1, max over references.
double unigram_f1(std::string_view prediction, std::span<const std::string> references);

/// Counts tokens of the context handed to the reader.
class TokenCounter {
public:
  virtual ~TokenCounter() = default;
  virtual std::size_t count(std::string_view text) const = 0;
  virtual std::string name() const = 0;
};

/// Default counter: maximal runs of non-whitespace bytes.
class WhitespaceTokenCounter final : public TokenCounter {
public:
  std::size_t count(std::string_view text) const override;
  std::string name() const override { return "whitespace"; }
};

/// Rough subword estimate: ceil(bytes / chars_per_token). Stands in for a
/// model tokenizer when none is plugged in.
class CharBudgetTokenCounter final : public TokenCounter {
public:
  explicit CharBudgetTokenCounter(std::size_t chars_per_token = 4);
  std::size_t count(std::string_view text) const override;
  std::string name() const override;

private:
  std::size_t chars_per_token_;
};

/// "whitespace" or "chars<N>" (e.g. "chars4").
std::unique_ptr<TokenCounter> make_token_counter(std::string_view name);

/// Throws ArgumentError on empty text. Whitespace-only text counts as zero
/// tokens, which is also rejected since a reader context needs |c| >= 1.
std::size_t token_count(std::string_view text, const TokenCounter& counter);
std::size_t token_count(std::string_view text);

/// em / token_len.
double ept(int em, std::size_t token_len);

enum class AnswerPolicy { first, any };

struct ContainmentOptions {
  bool normalize = true;
  AnswerPolicy policy = AnswerPolicy::first;
};

/// Raw mode: byte substring. Normalized mode: the normalized answer tokens
/// occur as a contiguous run of the normalized context tokens. An answer that
/// normalizes to nothing is never contained.
bool answer_in_context(std::string_view answer, std::string_view context, bool normalize);

/// Inclusion of the designated answer(s) in the context, as 0/1.
int ira(std::span<const std::string> answers, std::string_view context,
        const ContainmentOptions& options = {});

struct ScoreRow {
  std::string id;
  int em = 0;
  double f1 = 0.0;
  std::size_t token_len = 1;
  double ept = 0.0;
  int ira = 0;

  friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

struct ScoreOptions {
  ContainmentOptions ira;
};

ScoreRow score_instance(std::string id, std::string_view prediction,
                        std::span<const std::string> references, std::string_view reader_context,
                        const TokenCounter& counter, const ScoreOptions& options = {});

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// One point of a retention curve: the filtered run's mean token length and
/// EM as fractions of a baseline run's.
struct RetentionPoint {
  std::string baseline;
  double length_fraction = 0.0;
  double em_retention = 0.0;
};

struct AggregateReport {
  std::string model;
  std::size_t n = 0;
  double em_pct = 0.0;
  double f1_pct = 0.0;
  double mean_token_len = 0.0;
  double ept_ratio = 0.0;  // em_pct / mean_token_len
  double ept_mean = 0.0;   // mean of per-row ept
  double ira_pct = 0.0;
  std::vector<RetentionPoint> retention;
};

/// em_pct / mean_token_len; mean_token_len must be positive.
double ept_ratio(double em_pct, double mean_token_len);

RetentionPoint retention(const AggregateReport& filtered, const AggregateReport& baseline);

/// Rows are reduced in id order so the result does not depend on input order.
AggregateReport aggregate(std::span<const ScoreRow> rows, std::string model = {},
                          std::span<const AggregateReport> baselines = {});

}  // namespace sumread
