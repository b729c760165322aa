#pragma once

// Readers and writers for the JSONL interchange files. Every writer emits
// one object per line with a fixed key order; every reader reports the
// 1-based line number of the first malformed record via DataError.

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumread/corpus.hpp"
#include "sumread/dpo.hpp"
#include "sumread/metrics.hpp"
#include "sumread/pairbuilder.hpp"
#include "sumread/prompting.hpp"
#include "sumread/toy_policy.hpp"
#include "sumread/types.hpp"

namespace sumread::io {

// instances.jsonl: {id, question, answers, context, source, split}
void write_instances(std::ostream& out, std::span<const QaInstance> instances);
std::vector<QaInstance> read_instances(std::istream& in);

// prompts.jsonl: {id, kind, prompt}
void write_prompts(std::ostream& out, std::span<const PromptRecord> prompts);
std::vector<PromptRecord> read_prompts(std::istream& in);

// outputs.jsonl: {id, kind, text}. `kind` is free-form: type1/type2/type3
// feed the pair builder, anything else (reader, summary, ...) is selected
// by name when scoring.
struct OutputRecord {
  std::string id;
  std::string kind;
  std::string text;
};

void write_outputs(std::ostream& out, std::span<const OutputRecord> outputs);
/// Throws DataError on a repeated (id, kind).
std::vector<OutputRecord> read_outputs(std::istream& in);

/// Collects type1/type2/type3 texts into O1/O2/O3 per id.
OutputTable summary_outputs(std::span<const OutputRecord> records);
/// id -> text for one kind.
std::map<std::string, std::string, std::less<>> outputs_of_kind(std::span<const OutputRecord> records,
                                                               std::string_view kind);

// sft.jsonl: {id, input, target}
void write_sft(std::ostream& out, std::span<const SftExample> examples);
std::vector<SftExample> read_sft(std::istream& in);

// pairs.jsonl: {id, x, chosen, rejected, variant}
void write_pairs(std::ostream& out, std::span<const PreferencePair> pairs);

struct PairsFile {
  std::vector<PreferencePair> pairs;
  std::vector<std::size_t> lines;
};
PairsFile read_pairs(std::istream& in);

// scores.jsonl: {id, em, f1, token_len, ept, ira}
void write_scores(std::ostream& out, std::span<const ScoreRow> rows);
std::vector<ScoreRow> read_scores(std::istream& in);

// report.json: one AggregateReport object.
void write_report_json(std::ostream& out, const AggregateReport& report);
AggregateReport read_report_json(std::istream& in);

// Corpus statistics as a single JSON object.
std::string stats_json(const CorpusStats& stats);
std::string stats_json(const PairBuildStats& stats);

// logprobs.jsonl: {id, role, beta?, policy_logprobs, reference_logprobs}.
// Natural logarithms. Records are grouped by id into (chosen, rejected).
struct LogprobsFile {
  std::vector<dpo::LogprobPair> pairs;  // in order of first appearance
  std::optional<double> beta;           // the files' beta, when given
};
/// Throws DataError on malformed lines, invalid lists, missing partners,
/// repeated roles or conflicting betas.
LogprobsFile read_logprobs(std::istream& in);
void write_logprobs(std::ostream& out, std::span<const dpo::LogprobPair> pairs,
                    std::optional<double> beta = std::nullopt);

// dpo_eval.json
void write_loss_report(std::ostream& out, const dpo::LossReport& report, double beta,
                       dpo::LengthNorm norm);

// Toy preference sets: {id, prompt, chosen, rejected} where each field is
// either an array of vocabulary symbols or a text string (hash-encoded).
// Pair files written by the pair builder ({x, chosen, rejected}) are also
// accepted: `x` stands in for `prompt`.
std::vector<toy::TokenPair> read_toy_pairs(std::istream& in, const toy::ToyVocab& vocab,
                                           std::size_t max_response_tokens = 16);

/// Hash-encodes SFT examples: the prompt keeps every word, the target keeps
/// at most `max_target_tokens` words plus EOS.
std::vector<toy::TokenSftExample> encode_sft(std::span<const SftExample> examples,
                                             const toy::ToyVocab& vocab,
                                             std::size_t max_target_tokens = 16);

}  // namespace sumread::io
