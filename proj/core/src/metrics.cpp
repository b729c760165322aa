#include "sumread/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <unordered_map>

#include "sumread/error.hpp"

namespace sumread {
namespace {

void require_references(std::span<const std::string> references) {
  if (references.empty()) throw ArgumentError("reference list is empty");
}

double f1_tokens(const std::vector<std::string>& pred, const std::vector<std::string>& ref) {
  if (pred.empty() || ref.empty()) return 0.0;
  std::unordered_map<std::string_view, int> counts;
  for (const auto& t : ref) ++counts[t];
  std::size_t overlap = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
  return 2.0 * precision * recall / (precision + recall);
}

bool contains_run(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

}  // namespace

int exact_match(std::string_view prediction, std::span<const std::string> references) {
  require_references(references);
  const auto pred = normalize_answer(prediction);
  for (const auto& r : references) {
    if (normalize_answer(r) == pred) return 1;
  }
  return 0;
}

double unigram_f1(std::string_view prediction, std::span<const std::string> references) {
  require_references(references);
  const auto pred = normalize_answer(prediction);
  double best = 0.0;
  for (const auto& r : references) best = std::max(best, f1_tokens(pred.tokens, normalize_answer(r).tokens));
  return best;
}

std::size_t WhitespaceTokenCounter::count(std::string_view text) const {
  std::size_t n = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

CharBudgetTokenCounter::CharBudgetTokenCounter(std::size_t chars_per_token)
    : chars_per_token_(chars_per_token) {
  if (chars_per_token_ == 0) throw ArgumentError("chars_per_token must be positive");
}

std::size_t CharBudgetTokenCounter::count(std::string_view text) const {
  const auto body = text.size();
  return (body + chars_per_token_ - 1) / chars_per_token_;
}

std::string CharBudgetTokenCounter::name() const { return "chars" + std::to_string(chars_per_token_); }

std::unique_ptr<TokenCounter> make_token_counter(std::string_view name) {
  if (name == "whitespace") return std::make_unique<WhitespaceTokenCounter>();
  if (name.starts_with("chars")) {
    const auto digits = name.substr(5);
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && n > 0) {
      return std::make_unique<CharBudgetTokenCounter>(n);
    }
  }
  throw ArgumentError("unknown tokenizer '" + std::string(name) + "'");
}

std::size_t token_count(std::string_view text, const TokenCounter& counter) {
  if (text.empty()) throw ArgumentError("cannot count tokens of empty text");
  const auto n = counter.count(text);
  if (n == 0) throw ArgumentError("text has no tokens under the '" + counter.name() + "' counter");
  return n;
}

std::size_t token_count(std::string_view text) { return token_count(text, WhitespaceTokenCounter{}); }

double ept(int em, std::size_t token_len) {
  if (token_len == 0) throw ArgumentError("token_len must be at least 1");
  if (em != 0 && em != 1) throw ArgumentError("em must be 0 or 1");
  return static_cast<double>(em) / static_cast<double>(token_len);
}

bool answer_in_context(std::string_view answer, std::string_view context, bool normalize) {
  if (!normalize) return !answer.empty() && context.find(answer) != std::string_view::npos;
  return contains_run(normalize_answer(context).tokens, normalize_answer(answer).tokens);
}

int ira(std::span<const std::string> answers, std::string_view context,
        const ContainmentOptions& options) {
  if (answers.empty()) throw ArgumentError("answer list is empty");
  if (options.policy == AnswerPolicy::first) {
    return answer_in_context(answers.front(), context, options.normalize) ? 1 : 0;
  }
  if (!options.normalize) {
    return std::any_of(answers.begin(), answers.end(),
                       [&](const std::string& a) { return answer_in_context(a, context, false); })
               ? 1
               : 0;
  }
  const auto ctx = normalize_answer(context);
  for (const auto& a : answers) {
    if (contains_run(ctx.tokens, normalize_answer(a).tokens)) return 1;
  }
  return 0;
}

ScoreRow score_instance(std::string id, std::string_view prediction,
                        std::span<const std::string> references, std::string_view reader_context,
                        const TokenCounter& counter, const ScoreOptions& options) {
  ScoreRow row;
  row.id = std::move(id);
  row.em = exact_match(prediction, references);
  row.f1 = unigram_f1(prediction, references);
  row.token_len = token_count(reader_context, counter);
  row.ept = ept(row.em, row.token_len);
  row.ira = ira(references, reader_context, options.ira);
  return row;
}

double ept_ratio(double em_pct, double mean_token_len) {
  if (!(mean_token_len > 0.0)) throw ArgumentError("mean token length must be positive");
  return em_pct / mean_token_len;
}

RetentionPoint retention(const AggregateReport& filtered, const AggregateReport& baseline) {
  if (!(baseline.mean_token_len > 0.0)) throw ArgumentError("baseline mean token length must be positive");
  if (!(baseline.em_pct > 0.0)) throw ArgumentError("baseline EM must be positive");
  return {baseline.model, filtered.mean_token_len / baseline.mean_token_len,
          filtered.em_pct / baseline.em_pct};
}

AggregateReport aggregate(std::span<const ScoreRow> rows, std::string model,
                          std::span<const AggregateReport> baselines) {
  if (rows.empty()) throw ArgumentError("cannot aggregate zero rows");

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].id < rows[b].id; });

  double em = 0.0, f1 = 0.0, len = 0.0, ept_sum = 0.0, ira_sum = 0.0;
  for (auto i : order) {
    const auto& r = rows[i];
    em += r.em;
    f1 += r.f1;
    len += static_cast<double>(r.token_len);
    ept_sum += r.ept;
    ira_sum += r.ira;
  }
  const auto n = static_cast<double>(rows.size());

  AggregateReport report;
  report.model = std::move(model);
  report.n = rows.size();
  report.em_pct = 100.0 * em / n;
  report.f1_pct = 100.0 * f1 / n;
  report.mean_token_len = len / n;
  report.ept_ratio = ept_ratio(report.em_pct, report.mean_token_len);
  report.ept_mean = ept_sum / n;
  report.ira_pct = 100.0 * ira_sum / n;
  for (const auto& b : baselines) report.retention.push_back(retention(report, b));
  return report;
}

}  // namespace sumread
