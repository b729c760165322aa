#include "sumread/corpus.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <numeric>
#include <set>
#include <string>

#include "json.hpp"
#include "random.hpp"

namespace sumread {
namespace {

using nlohmann::json;

class Collector {
public:
  Collector(ErrorMode mode, std::vector<RecordError>& sink) : mode_(mode), sink_(sink) {}

  void add(RecordError e) {
    if (mode_ == ErrorMode::strict) throw RecordErrorException(std::move(e));
    sink_.push_back(std::move(e));
  }

private:
  ErrorMode mode_;
  std::vector<RecordError>& sink_;
};

std::string string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::string id_field(const json& obj) {
  auto it = obj.find("id");
  if (it == obj.end()) throw DataError("missing field 'id'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw DataError("field 'id' is not a string");
}

const json& array_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw DataError(std::string("field '") + key + "' is missing or not an array");
  }
  return *it;
}

/// Accepts the new instance unless invariants fail or the id repeats.
void admit(QaInstance inst, std::size_t line, std::set<std::string>& seen,
           std::vector<QaInstance>& out, Collector& errors) {
  if (auto problem = check_instance(inst); !problem.empty()) {
    errors.add({inst.id, line, problem});
    return;
  }
  if (!seen.insert(inst.id).second) {
    errors.add({inst.id, line, "duplicate id"});
    return;
  }
  out.push_back(std::move(inst));
}

}  // namespace

ParseResult<QaInstance> parse_squad(std::istream& in, Split split, ErrorMode mode) {
  json doc;
  try {
    doc = json::parse(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed SQuAD JSON: ") + e.what(), 0, e.byte);
  }

  ParseResult<QaInstance> result;
  Collector errors(mode, result.errors);
  std::set<std::string> seen;

  if (!doc.is_object() || !doc.contains("data") || !doc["data"].is_array()) {
    throw DataError("SQuAD JSON must be an object with a 'data' array");
  }
  for (const auto& article : doc["data"]) {
    if (!article.is_object() || !article.contains("paragraphs")) {
      throw DataError("article without 'paragraphs'");
    }
    for (const auto& para : array_field(article, "paragraphs")) {
      const std::string context = string_field(para, "context");
      for (const auto& qa : array_field(para, "qas")) {
        QaInstance inst;
        try {
          inst.id = id_field(qa);
          inst.question = string_field(qa, "question");
          for (const auto& a : array_field(qa, "answers")) {
            if (!a.is_object()) throw DataError("answer entry is not an object");
            inst.answers.push_back(string_field(a, "text"));
          }
        } catch (const DataError& e) {
          errors.add({inst.id, 0, e.what()});
          continue;
        }
        inst.context = context;
        inst.source = Source::squad;
        inst.split = split;
        admit(std::move(inst), 0, seen, result.items, errors);
      }
    }
  }
  return result;
}

ParseResult<QaInstance> parse_retrieved(std::istream& in, Split split, ErrorMode mode) {
  ParseResult<QaInstance> result;
  Collector errors(mode, result.errors);
  std::set<std::string> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;

    QaInstance inst;
    try {
      const json obj = json::parse(line);
      if (!obj.is_object()) throw DataError("line is not a JSON object");
      inst.id = id_field(obj);
      inst.question = string_field(obj, "question");
      for (const auto& a : array_field(obj, "answers")) {
        if (!a.is_string()) throw DataError("answers must be strings");
        inst.answers.push_back(a.get<std::string>());
      }
      const auto& contexts = array_field(obj, "contexts");
      if (contexts.empty()) throw DataError("empty contexts");
      const auto& top = contexts.front();
      if (top.is_string()) {
        inst.context = top.get<std::string>();
      } else if (top.is_object()) {
        inst.context = string_field(top, "text");
      } else {
        throw DataError("context entry must be an object with 'text'");
      }
    } catch (const json::exception& e) {
      errors.add({inst.id, line_no, std::string("malformed JSON: ") + e.what()});
      continue;
    } catch (const DataError& e) {
      errors.add({inst.id, line_no, e.what()});
      continue;
    }
    inst.source = Source::retrieved;
    inst.split = split;
    admit(std::move(inst), line_no, seen, result.items, errors);
  }
  return result;
}

FilterResult filter_answer_in_context(std::span<const QaInstance> instances,
                                      const ContainmentOptions& options) {
  FilterResult result;
  auto& stats = result.stats;
  stats.total = instances.size();
  if (!instances.empty()) {
    stats.split = instances.front().split;
    for (const auto& inst : instances) {
      if (inst.split != *stats.split) {
        stats.split.reset();
        break;
      }
    }
  }
  for (const auto& inst : instances) {
    if (auto problem = check_instance(inst); !problem.empty()) {
      throw ArgumentError("invalid instance '" + inst.id + "': " + problem);
    }
    if (ira(inst.answers, inst.context, options) == 1) result.kept.push_back(inst);
  }
  stats.kept = result.kept.size();
  stats.dropped = stats.total - stats.kept;
  stats.kept_fraction =
      stats.total == 0 ? 0.0 : static_cast<double>(stats.kept) / static_cast<double>(stats.total);
  return result;
}

DatasetSplits split_dataset(std::span<const QaInstance> instances, SplitRatios ratios,
                            std::uint64_t seed) {
  if (!(ratios.train > 0.0) || !(ratios.validation > 0.0)) {
    throw ArgumentError("split ratios must be positive");
  }
  const double sum = ratios.train + ratios.validation;
  constexpr double tol = 1e-9;
  if (sum > 1.0 + tol) throw ArgumentError("split ratios sum to more than 1");

  const std::size_t n = instances.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  detail::SeededRng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  // The tolerance keeps e.g. 0.29 * 100 from flooring to 28.
  const auto cut = [&](double r) {
    return static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + tol));
  };
  const std::size_t n_train = std::min(cut(ratios.train), n);
  std::size_t n_val = std::min(cut(ratios.validation), n - n_train);
  if (std::abs(sum - 1.0) <= tol) n_val = n - n_train;

  DatasetSplits out;
  for (std::size_t k = 0; k < n; ++k) {
    QaInstance inst = instances[order[k]];
    if (k < n_train) {
      inst.split = Split::train;
      out.train.push_back(std::move(inst));
    } else if (k < n_train + n_val) {
      inst.split = Split::validation;
      out.validation.push_back(std::move(inst));
    } else {
      inst.split = Split::test;
      out.test.push_back(std::move(inst));
    }
  }
  return out;
}

}  // namespace sumread
