#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sumread/error.hpp"
#include "sumread/metrics.hpp"
#include "sumread/types.hpp"

namespace sumread {

template <class T>
struct ParseResult {
  std::vector<T> items;
  std::vector<RecordError> errors;
};

/// SQuAD v1.1 layout: {"data": [{"paragraphs": [{"context", "qas": [...]}]}]}.
/// Malformed JSON throws DataError carrying the byte offset. A qa without
/// answers (or with a blank answer) is a record error: thrown in strict mode,
/// collected otherwise.
ParseResult<QaInstance> parse_squad(std::istream& in, Split split = Split::train,
                                    ErrorMode mode = ErrorMode::collect);

/// One JSON object per line: {"id", "question", "answers": [..],
/// "contexts": [{"text": ..}, ...]} with contexts in retrieval-rank order.
/// Only the rank-1 context is kept. Malformed lines are record errors with
/// their line number.
ParseResult<QaInstance> parse_retrieved(std::istream& in, Split split = Split::train,
                                        ErrorMode mode = ErrorMode::collect);

struct CorpusStats {
  std::optional<Split> split;  // empty when the input mixes splits
  std::size_t total = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  double kept_fraction = 0.0;
};

struct FilterResult {
  std::vector<QaInstance> kept;
  CorpusStats stats;
};

/// Keeps instances whose designated answer(s) occur in their context.
/// With the default options (first answer, normalized match) every kept
/// instance has IRA = 1 on its own context under the default IRA options.
FilterResult filter_answer_in_context(std::span<const QaInstance> instances,
                                      const ContainmentOptions& options = {});

struct SplitRatios {
  double train = 0.8;
  double validation = 0.2;
};

struct DatasetSplits {
  std::vector<QaInstance> train;
  std::vector<QaInstance> validation;
  std::vector<QaInstance> test;
};

/// Seeded shuffle then cut. Sizes are floor(ratio * n); when the ratios sum
/// to one the remainder goes to validation, otherwise test takes it. The
/// `split` field of each output instance is rewritten to its new split.
DatasetSplits split_dataset(std::span<const QaInstance> instances, SplitRatios ratios,
                            std::uint64_t seed);

}  // namespace sumread
