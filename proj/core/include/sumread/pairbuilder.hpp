#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sumread/types.hpp"

namespace sumread {

/// Summarizer outputs for one instance: O1 (type1), O2 (type2), O3 (type3).
struct SummaryOutputs {
  std::optional<std::string> o1;
  std::optional<std::string> o2;
  std::optional<std::string> o3;
};

using OutputTable = std::map<std::string, SummaryOutputs, std::less<>>;

struct SftExample {
  std::string id;
  std::string input;   // type2 prompt
  std::string target;  // O1

  friend bool operator==(const SftExample&, const SftExample&) = default;
};

enum class PairVariant { o1_vs_o2, o1_vs_o3 };

std::string_view to_string(PairVariant v);
PairVariant parse_variant(std::string_view name);

struct PreferencePair {
  std::string id;
  std::string x;         // type2 prompt
  std::string chosen;    // O1
  std::string rejected;  // O2 or O3
  PairVariant variant = PairVariant::o1_vs_o2;

  friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

/// built + dropped_identical + dropped_missing_output == candidates.
struct PairBuildStats {
  std::size_t candidates = 0;
  std::size_t built = 0;
  std::size_t dropped_identical = 0;
  std::size_t dropped_missing_output = 0;

  friend bool operator==(const PairBuildStats&, const PairBuildStats&) = default;
};

template <class T>
struct BuildResult {
  std::vector<T> items;
  PairBuildStats stats;
};

/// One example per instance that has a non-empty O1, ordered by id.
BuildResult<SftExample> build_sft_dataset(std::span<const QaInstance> instances,
                                          const OutputTable& outputs);

/// One pair per instance, ordered by id. Instances lacking O1 or the
/// rejected output count as missing; byte-identical chosen/rejected are
/// dropped and counted.
BuildResult<PreferencePair> build_dpo_dataset(std::span<const QaInstance> instances,
                                              const OutputTable& outputs, PairVariant variant);

enum class IssueKind { duplicate_id, empty_field, prompt_shape, identical_pair };

std::string_view to_string(IssueKind kind);

struct PairIssue {
  IssueKind kind;
  std::string id;
  std::vector<std::size_t> lines;  // 1-based positions of the offending records
  std::string message;
};

struct ValidationReport {
  std::size_t checked = 0;
  std::vector<PairIssue> issues;

  bool ok() const { return issues.empty(); }
};

/// `lines[i]` is the source line of `pairs[i]`; positions 1..n are used
/// when `lines` is empty.
ValidationReport validate_pairs(std::span<const PreferencePair> pairs,
                                std::span<const std::size_t> lines = {});

}  // namespace sumread
