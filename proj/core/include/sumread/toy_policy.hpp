#pragma once

// A tabular autoregressive policy small enough to train and gradient-check
// exactly. The next-token distribution is
//
//   p(next | prompt, prev) = softmax(logits[bucket(prompt)][prev][:])
//
// where bucket() hashes the prompt tokens into B buckets and prev is the
// previous response token (BOS for the first one). Logits are stored
// unnormalized; the softmax is applied whenever the policy is evaluated.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sumread/dpo.hpp"

namespace sumread::toy {

using TokenId = std::uint32_t;

inline constexpr std::size_t kMaxVocab = 64;
inline constexpr std::size_t kDefaultVocab = 16;
inline constexpr std::size_t kDefaultBuckets = 64;

class ToyVocab {
public:
  /// symbols[0] is BOS and symbols[1] is EOS. Symbols must be unique.
  explicit ToyVocab(std::vector<std::string> symbols);

  /// "<bos>", "<eos>", then "a", "b", ... up to `size` symbols.
  static ToyVocab standard(std::size_t size = kDefaultVocab);

  std::size_t size() const { return symbols_.size(); }
  TokenId bos() const { return 0; }
  TokenId eos() const { return 1; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& symbol(TokenId id) const;

  /// Throws ArgumentError for an unknown symbol.
  TokenId id(std::string_view symbol) const;
  std::vector<TokenId> encode_symbols(std::span<const std::string> symbols) const;

  /// Hashes lowercase whitespace-separated words onto the non-special ids.
  /// At most `max_tokens` words are kept (0 keeps all); `append_eos` adds EOS.
  std::vector<TokenId> encode_text(std::string_view text, std::size_t max_tokens = 0,
                                   bool append_eos = false) const;

private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, TokenId> index_;
};

struct PolicyParams {
  std::size_t buckets = kDefaultBuckets;
  std::size_t vocab_size = kDefaultVocab;
  std::uint64_t seed = 0;
  std::vector<double> logits;  // [buckets][vocab_size][vocab_size], row-major

  std::size_t index(std::size_t bucket, TokenId prev, TokenId next) const {
    return (bucket * vocab_size + prev) * vocab_size + next;
  }
  double at(std::size_t bucket, TokenId prev, TokenId next) const {
    return logits[index(bucket, prev, next)];
  }

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

enum class InitMode { uniform_small, zeros };

/// Logits drawn uniformly from [-0.01, 0.01] with the seeded generator, or
/// all zero. Throws ArgumentError when V < 2, V > 64 or buckets == 0.
PolicyParams init_policy(const ToyVocab& vocab, std::size_t buckets, std::uint64_t seed,
                         InitMode mode = InitMode::uniform_small);

/// FNV-1a over the token ids, reduced mod `buckets`.
std::size_t prompt_bucket(std::span<const TokenId> prompt, std::size_t buckets);

/// FNV-1a over the raw logits bytes; used to prove a tensor was not touched.
std::uint64_t params_hash(const PolicyParams& params);

struct SequenceScore {
  double total = 0.0;
  std::vector<double> per_token;
};

/// Log-probability of `response` (which must end with EOS) given `prompt`.
SequenceScore logprob(const PolicyParams& params, std::span<const TokenId> prompt,
                      std::span<const TokenId> response);

/// Same computation without the EOS requirement, for scoring prefixes.
SequenceScore prefix_logprob(const PolicyParams& params, std::span<const TokenId> prompt,
                             std::span<const TokenId> response);

/// Adds weight * d(log p(response | prompt)) / d(logits) into `grad`.
void accumulate_logprob_grad(const PolicyParams& params, std::span<const TokenId> prompt,
                             std::span<const TokenId> response, double weight,
                             std::span<double> grad);

struct TokenSftExample {
  std::string id;
  std::vector<TokenId> prompt;
  std::vector<TokenId> target;  // ends with EOS
};

struct TokenPair {
  std::string id;
  std::vector<TokenId> prompt;
  std::vector<TokenId> chosen;    // ends with EOS
  std::vector<TokenId> rejected;  // ends with EOS
};

/// Mean negative log-likelihood of the targets.
double sft_objective(const PolicyParams& params, std::span<const TokenSftExample> batch);
std::vector<double> sft_gradient(const PolicyParams& params, std::span<const TokenSftExample> batch);

struct SftStepResult {
  PolicyParams params;
  double mean_nll = 0.0;  // before the step
};

/// One plain gradient-descent step on the mean NLL.
SftStepResult sft_step(const PolicyParams& params, std::span<const TokenSftExample> batch, double lr);

/// Implicit-reward margin of one pair against the reference policy.
double pair_margin(const PolicyParams& params, const PolicyParams& reference, const TokenPair& pair,
                   double beta);

/// Mean DPO loss of the batch against the frozen reference policy.
double dpo_objective(const PolicyParams& params, const PolicyParams& reference,
                     std::span<const TokenPair> batch, double beta);
std::vector<double> dpo_gradient(const PolicyParams& params, const PolicyParams& reference,
                                 std::span<const TokenPair> batch, double beta);

/// Evaluates the batch (margins, loss, accuracy) without stepping.
dpo::LossReport dpo_report(const PolicyParams& params, const PolicyParams& reference,
                           std::span<const TokenPair> batch, double beta);

struct DpoStepResult {
  PolicyParams params;
  dpo::LossReport report;  // before the step
};

/// One gradient-descent step on the mean DPO loss. `reference` is read only.
DpoStepResult dpo_step(const PolicyParams& params, const PolicyParams& reference,
                       std::span<const TokenPair> batch, double beta, double lr);

enum class TrainMode { sft, dpo };

std::string_view to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view name);

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t steps = 500;
  double beta = dpo::kDefaultBeta;
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::sft;
  std::size_t batch_size = 0;  // 0 = full batch; otherwise seeded mini-batches
};

/// Toy defaults: lr 0.1 for SFT and 0.05 for DPO, beta 0.1, 500 steps.
TrainConfig default_config(TrainMode mode);

struct ToyDataset {
  std::vector<TokenSftExample> sft;
  std::vector<TokenPair> pairs;
};

/// One row per evaluation. For SFT `loss` is the mean NLL and margin and
/// accuracy are empty.
struct TraceRow {
  std::size_t step = 0;
  double loss = 0.0;
  std::optional<double> margin;
  std::optional<double> accuracy;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct TrainResult {
  PolicyParams params;
  std::vector<TraceRow> trace;  // steps + 1 rows: before each step, then final
};

/// DPO uses the incoming params as the frozen reference. Throws
/// ArgumentError when the dataset has nothing for the selected mode.
TrainResult train(const PolicyParams& initial, const TrainConfig& config, const ToyDataset& dataset);

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace);

/// JSON checkpoint {format, version, vocab, B, V, seed, log_base, logits}.
void save_checkpoint(std::ostream& out, const ToyVocab& vocab, const PolicyParams& params);

struct Checkpoint {
  ToyVocab vocab;
  PolicyParams params;
};

Checkpoint load_checkpoint(std::istream& in);

}  // namespace sumread::toy
