#include "sumread/pairbuilder.hpp"

#include <algorithm>

#include "sumread/error.hpp"
#include "sumread/prompting.hpp"

namespace sumread {
namespace {

std::vector<const QaInstance*> by_id(std::span<const QaInstance> instances) {
  std::vector<const QaInstance*> order;
  order.reserve(instances.size());
  for (const auto& inst : instances) order.push_back(&inst);
  std::stable_sort(order.begin(), order.end(),
                   [](const QaInstance* a, const QaInstance* b) { return a->id < b->id; });
  return order;
}

const std::string* present(const std::optional<std::string>& s) {
  return s && !s->empty() ? &*s : nullptr;
}

}  // namespace

std::string_view to_string(PairVariant v) {
  return v == PairVariant::o1_vs_o2 ? "o1_vs_o2" : "o1_vs_o3";
}

PairVariant parse_variant(std::string_view name) {
  if (name == "o1_vs_o2") return PairVariant::o1_vs_o2;
  if (name == "o1_vs_o3") return PairVariant::o1_vs_o3;
  throw ArgumentError("unknown pair variant '" + std::string(name) + "'");
}

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::duplicate_id: return "duplicate_id";
    case IssueKind::empty_field: return "empty_field";
    case IssueKind::prompt_shape: return "prompt_shape";
    case IssueKind::identical_pair: return "identical_pair";
  }
  return "unknown";
}

BuildResult<SftExample> build_sft_dataset(std::span<const QaInstance> instances,
                                          const OutputTable& outputs) {
  BuildResult<SftExample> result;
  result.stats.candidates = instances.size();
  for (const QaInstance* inst : by_id(instances)) {
    const auto it = outputs.find(inst->id);
    const std::string* o1 = it == outputs.end() ? nullptr : present(it->second.o1);
    if (o1 == nullptr) {
      ++result.stats.dropped_missing_output;
      continue;
    }
    result.items.push_back(
        {inst->id, render_summarizer_prompt(*inst, PromptKind::type2).prompt, *o1});
    ++result.stats.built;
  }
  return result;
}

BuildResult<PreferencePair> build_dpo_dataset(std::span<const QaInstance> instances,
                                              const OutputTable& outputs, PairVariant variant) {
  if (variant != PairVariant::o1_vs_o2 && variant != PairVariant::o1_vs_o3) {
    throw ArgumentError("unknown pair variant");
  }
  BuildResult<PreferencePair> result;
  result.stats.candidates = instances.size();
  for (const QaInstance* inst : by_id(instances)) {
    const auto it = outputs.find(inst->id);
    const std::string* chosen = nullptr;
    const std::string* rejected = nullptr;
    if (it != outputs.end()) {
      chosen = present(it->second.o1);
      rejected = present(variant == PairVariant::o1_vs_o2 ? it->second.o2 : it->second.o3);
    }
    if (chosen == nullptr || rejected == nullptr) {
      ++result.stats.dropped_missing_output;
      continue;
    }
    if (*chosen == *rejected) {
      ++result.stats.dropped_identical;
      continue;
    }
    result.items.push_back({inst->id, render_summarizer_prompt(*inst, PromptKind::type2).prompt,
                            *chosen, *rejected, variant});
    ++result.stats.built;
  }
  return result;
}

ValidationReport validate_pairs(std::span<const PreferencePair> pairs,
                                std::span<const std::size_t> lines) {
  if (!lines.empty() && lines.size() != pairs.size()) {
    throw ArgumentError("line table does not match the pair count");
  }
  const auto line_of = [&](std::size_t i) { return lines.empty() ? i + 1 : lines[i]; };

  ValidationReport report;
  report.checked = pairs.size();

  std::map<std::string, std::vector<std::size_t>, std::less<>> positions;
  for (std::size_t i = 0; i < pairs.size(); ++i) positions[pairs[i].id].push_back(line_of(i));

  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const std::vector<std::size_t> here{line_of(i)};
    std::vector<std::string> empty;
    if (p.id.empty()) empty.emplace_back("id");
    if (p.x.empty()) empty.emplace_back("x");
    if (p.chosen.empty()) empty.emplace_back("chosen");
    if (p.rejected.empty()) empty.emplace_back("rejected");
    if (!empty.empty()) {
      std::string fields;
      for (const auto& f : empty) fields += (fields.empty() ? "" : ", ") + f;
      report.issues.push_back({IssueKind::empty_field, p.id, here, "empty field(s): " + fields});
    }
    if (!p.x.empty() && !looks_like_type2_prompt(p.x)) {
      report.issues.push_back(
          {IssueKind::prompt_shape, p.id, here, "x is not a type2 prompt (Context/Question/Output lines)"});
    }
    if (!p.chosen.empty() && p.chosen == p.rejected) {
      report.issues.push_back({IssueKind::identical_pair, p.id, here, "chosen equals rejected"});
    }
  }
  for (const auto& [id, where] : positions) {
    if (where.size() > 1) {
      report.issues.push_back({IssueKind::duplicate_id, id, where,
                               "id appears " + std::to_string(where.size()) + " times"});
    }
  }
  return report;
}

}  // namespace sumread
