#include "sumread/toy_policy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "random.hpp"
#include "sumread/error.hpp"

namespace sumread::toy {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

void check_tokens(const PolicyParams& params, std::span<const TokenId> tokens, const char* what) {
  for (TokenId t : tokens) {
    if (t >= params.vocab_size) {
      throw ArgumentError(std::string(what) + " token id " + std::to_string(t) +
                          " is outside the vocabulary");
    }
  }
}

void check_response(const PolicyParams& params, std::span<const TokenId> response) {
  if (response.empty()) throw ArgumentError("response is empty");
  check_tokens(params, response, "response");
  if (response.back() != 1) throw ArgumentError("response must end with EOS");
}

double log_sum_exp(const double* row, std::size_t n) {
  const double hi = *std::max_element(row, row + n);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::exp(row[k] - hi);
  return hi + std::log(s);
}

void check_lr(double lr) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ArgumentError("learning rate must be non-negative");
}

void descend(PolicyParams& params, std::span<const double> grad, double lr) {
  for (std::size_t i = 0; i < params.logits.size(); ++i) params.logits[i] -= lr * grad[i];
}

double sequence_total(const PolicyParams& p, std::span<const TokenId> prompt,
                      std::span<const TokenId> response) {
  return logprob(p, prompt, response).total;
}

}  // namespace

// --- vocabulary ------------------------------------------------------------

ToyVocab::ToyVocab(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) throw ArgumentError("vocabulary needs at least BOS and EOS");
  if (symbols_.size() > kMaxVocab) throw ArgumentError("vocabulary larger than 64 symbols");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], static_cast<TokenId>(i)).second) {
      throw ArgumentError("duplicate vocabulary symbol '" + symbols_[i] + "'");
    }
  }
}

ToyVocab ToyVocab::standard(std::size_t size) {
  if (size < 2 || size > kMaxVocab) throw ArgumentError("vocabulary size must be in [2, 64]");
  std::vector<std::string> symbols{"<bos>", "<eos>"};
  for (std::size_t i = 2; i < size; ++i) {
    const std::size_t k = i - 2;
    std::string s(1, static_cast<char>('a' + k % 26));
    if (k >= 26) s += std::to_string(k / 26);
    symbols.push_back(std::move(s));
  }
  return ToyVocab(std::move(symbols));
}

const std::string& ToyVocab::symbol(TokenId id) const {
  if (id >= symbols_.size()) throw ArgumentError("token id out of range");
  return symbols_[id];
}

TokenId ToyVocab::id(std::string_view symbol) const {
  const auto it = index_.find(std::string(symbol));
  if (it == index_.end()) throw ArgumentError("unknown symbol '" + std::string(symbol) + "'");
  return it->second;
}

std::vector<TokenId> ToyVocab::encode_symbols(std::span<const std::string> symbols) const {
  std::vector<TokenId> out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out.push_back(id(s));
  return out;
}

std::vector<TokenId> ToyVocab::encode_text(std::string_view text, std::size_t max_tokens,
                                           bool append_eos) const {
  if (size() < 3) throw ArgumentError("text encoding needs at least one non-special symbol");
  const auto slots = static_cast<std::uint64_t>(size() - 2);
  std::vector<TokenId> out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (max_tokens == 0 || out.size() < max_tokens) {
      out.push_back(static_cast<TokenId>(2 + fnv1a(word.data(), word.size()) % slots));
    }
    word.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  if (append_eos) out.push_back(eos());
  return out;
}

// --- parameters ------------------------------------------------------------

PolicyParams init_policy(const ToyVocab& vocab, std::size_t buckets, std::uint64_t seed,
                         InitMode mode) {
  if (vocab.size() < 2) throw ArgumentError("vocabulary size must be at least 2");
  if (vocab.size() > kMaxVocab) throw ArgumentError("vocabulary size must be at most 64");
  if (buckets == 0) throw ArgumentError("buckets must be at least 1");
  PolicyParams p;
  p.buckets = buckets;
  p.vocab_size = vocab.size();
  p.seed = seed;
  p.logits.assign(buckets * p.vocab_size * p.vocab_size, 0.0);
  if (mode == InitMode::uniform_small) {
    detail::SeededRng rng(seed);
    for (double& x : p.logits) x = rng.uniform(-0.01, 0.01);
  }
  return p;
}

std::size_t prompt_bucket(std::span<const TokenId> prompt, std::size_t buckets) {
  if (buckets == 0) throw ArgumentError("buckets must be at least 1");
  std::uint64_t h = kFnvOffset;
  for (TokenId t : prompt) h = fnv1a(&t, sizeof t, h);
  return static_cast<std::size_t>(h % buckets);
}

std::uint64_t params_hash(const PolicyParams& params) {
  return fnv1a(params.logits.data(), params.logits.size() * sizeof(double));
}

// --- scoring ---------------------------------------------------------------

SequenceScore prefix_logprob(const PolicyParams& params, std::span<const TokenId> prompt,
                             std::span<const TokenId> response) {
  check_tokens(params, prompt, "prompt");
  check_tokens(params, response, "response");
  const std::size_t b = prompt_bucket(prompt, params.buckets);
  const std::size_t V = params.vocab_size;
  SequenceScore out;
  out.per_token.reserve(response.size());
  TokenId prev = 0;
  for (TokenId y : response) {
    const double* row = &params.logits[params.index(b, prev, 0)];
    const double lp = row[y] - log_sum_exp(row, V);
    out.per_token.push_back(lp);
    out.total += lp;
    prev = y;
  }
  return out;
}

SequenceScore logprob(const PolicyParams& params, std::span<const TokenId> prompt,
                      std::span<const TokenId> response) {
  check_response(params, response);
  return prefix_logprob(params, prompt, response);
}

void accumulate_logprob_grad(const PolicyParams& params, std::span<const TokenId> prompt,
                             std::span<const TokenId> response, double weight,
                             std::span<double> grad) {
  check_response(params, response);
  check_tokens(params, prompt, "prompt");
  if (grad.size() != params.logits.size()) throw ArgumentError("gradient buffer has the wrong size");
  const std::size_t b = prompt_bucket(prompt, params.buckets);
  const std::size_t V = params.vocab_size;
  TokenId prev = 0;
  for (TokenId y : response) {
    const std::size_t base = params.index(b, prev, 0);
    const double* row = &params.logits[base];
    const double lse = log_sum_exp(row, V);
    for (std::size_t k = 0; k < V; ++k) grad[base + k] -= weight * std::exp(row[k] - lse);
    grad[base + y] += weight;
    prev = y;
  }
}

// --- SFT -------------------------------------------------------------------

double sft_objective(const PolicyParams& params, std::span<const TokenSftExample> batch) {
  if (batch.empty()) throw ArgumentError("empty batch");
  double nll = 0.0;
  for (const auto& ex : batch) nll -= sequence_total(params, ex.prompt, ex.target);
  return nll / static_cast<double>(batch.size());
}

std::vector<double> sft_gradient(const PolicyParams& params, std::span<const TokenSftExample> batch) {
  if (batch.empty()) throw ArgumentError("empty batch");
  std::vector<double> grad(params.logits.size(), 0.0);
  const double w = -1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) accumulate_logprob_grad(params, ex.prompt, ex.target, w, grad);
  return grad;
}

SftStepResult sft_step(const PolicyParams& params, std::span<const TokenSftExample> batch, double lr) {
  check_lr(lr);
  SftStepResult out{params, sft_objective(params, batch)};
  if (lr > 0.0) descend(out.params, sft_gradient(params, batch), lr);
  return out;
}

// --- DPO -------------------------------------------------------------------

double pair_margin(const PolicyParams& params, const PolicyParams& reference, const TokenPair& pair,
                   double beta) {
  const double r_chosen = dpo::implicit_reward(sequence_total(params, pair.prompt, pair.chosen),
                                               sequence_total(reference, pair.prompt, pair.chosen), beta);
  const double r_rejected =
      dpo::implicit_reward(sequence_total(params, pair.prompt, pair.rejected),
                           sequence_total(reference, pair.prompt, pair.rejected), beta);
  return r_chosen - r_rejected;
}

namespace {

void check_reference(const PolicyParams& params, const PolicyParams& reference) {
  if (params.buckets != reference.buckets || params.vocab_size != reference.vocab_size ||
      params.logits.size() != reference.logits.size()) {
    throw ArgumentError("policy and reference shapes differ");
  }
}

std::vector<double> margins_of(const PolicyParams& params, const PolicyParams& reference,
                               std::span<const TokenPair> batch, double beta) {
  if (batch.empty()) throw ArgumentError("empty batch");
  check_reference(params, reference);
  std::vector<double> m;
  m.reserve(batch.size());
  for (const auto& pair : batch) m.push_back(pair_margin(params, reference, pair, beta));
  return m;
}

}  // namespace

double dpo_objective(const PolicyParams& params, const PolicyParams& reference,
                     std::span<const TokenPair> batch, double beta) {
  return dpo::summarize_margins(margins_of(params, reference, batch, beta)).mean_loss;
}

dpo::LossReport dpo_report(const PolicyParams& params, const PolicyParams& reference,
                           std::span<const TokenPair> batch, double beta) {
  return dpo::summarize_margins(margins_of(params, reference, batch, beta));
}

std::vector<double> dpo_gradient(const PolicyParams& params, const PolicyParams& reference,
                                 std::span<const TokenPair> batch, double beta) {
  const auto margins = margins_of(params, reference, batch, beta);
  std::vector<double> grad(params.logits.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    // d loss / d margin = -sigmoid(-margin); margin is linear in both
    // log-likelihoods with slope +beta / -beta.
    const double coef = dpo::dpo_loss_grad(margins[i]).d_chosen * beta * inv_n;
    accumulate_logprob_grad(params, batch[i].prompt, batch[i].chosen, coef, grad);
    accumulate_logprob_grad(params, batch[i].prompt, batch[i].rejected, -coef, grad);
  }
  return grad;
}

DpoStepResult dpo_step(const PolicyParams& params, const PolicyParams& reference,
                       std::span<const TokenPair> batch, double beta, double lr) {
  check_lr(lr);
  DpoStepResult out{params, dpo_report(params, reference, batch, beta)};
  if (lr > 0.0) descend(out.params, dpo_gradient(params, reference, batch, beta), lr);
  return out;
}

// --- training loop ---------------------------------------------------------

std::string_view to_string(TrainMode mode) { return mode == TrainMode::sft ? "sft" : "dpo"; }

TrainMode parse_train_mode(std::string_view name) {
  if (name == "sft") return TrainMode::sft;
  if (name == "dpo") return TrainMode::dpo;
  throw ArgumentError("unknown training mode '" + std::string(name) + "'");
}

TrainConfig default_config(TrainMode mode) {
  TrainConfig c;
  c.mode = mode;
  c.learning_rate = mode == TrainMode::sft ? 0.1 : 0.05;
  return c;
}

namespace {

template <class T>
class BatchSampler {
public:
  BatchSampler(std::span<const T> data, std::size_t batch_size, std::uint64_t seed)
      : data_(data), batch_size_(batch_size), rng_(seed), order_(data.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    cursor_ = order_.size();
  }

  /// The full set when batching is off, otherwise the next slice of a
  /// reshuffled epoch.
  std::span<const T> next() {
    if (batch_size_ == 0 || batch_size_ >= data_.size()) return data_;
    scratch_.clear();
    while (scratch_.size() < batch_size_) {
      if (cursor_ == order_.size()) {
        for (std::size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[rng_.below(i)]);
        cursor_ = 0;
      }
      scratch_.push_back(data_[order_[cursor_++]]);
    }
    return scratch_;
  }

private:
  std::span<const T> data_;
  std::size_t batch_size_;
  detail::SeededRng rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_;
  std::vector<T> scratch_;
};

}  // namespace

TrainResult train(const PolicyParams& initial, const TrainConfig& config, const ToyDataset& dataset) {
  check_lr(config.learning_rate);
  if (!(config.learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
  if (config.steps == 0) throw ArgumentError("steps must be positive");
  if (config.mode == TrainMode::dpo && !(config.beta > 0.0)) throw ArgumentError("beta must be positive");

  TrainResult result{initial, {}};
  result.trace.reserve(config.steps + 1);

  if (config.mode == TrainMode::sft) {
    if (dataset.sft.empty()) throw ArgumentError("sft mode needs SFT examples");
    BatchSampler<TokenSftExample> sampler(dataset.sft, config.batch_size, config.seed);
    for (std::size_t step = 0; step < config.steps; ++step) {
      const auto batch = sampler.next();
      const double full = sft_objective(result.params, dataset.sft);
      auto grad = sft_gradient(result.params, batch);
      descend(result.params, grad, config.learning_rate);
      result.trace.push_back({step, full, std::nullopt, std::nullopt});
    }
    result.trace.push_back({config.steps, sft_objective(result.params, dataset.sft), std::nullopt, std::nullopt});
    return result;
  }

  if (dataset.pairs.empty()) throw ArgumentError("dpo mode needs preference pairs");
  const PolicyParams reference = initial;
  BatchSampler<TokenPair> sampler(dataset.pairs, config.batch_size, config.seed);
  for (std::size_t step = 0; step < config.steps; ++step) {
    const auto batch = sampler.next();
    const auto report = dpo_report(result.params, reference, dataset.pairs, config.beta);
    auto grad = dpo_gradient(result.params, reference, batch, config.beta);
    descend(result.params, grad, config.learning_rate);
    result.trace.push_back({step, report.mean_loss, report.mean_margin, report.preference_accuracy});
  }
  const auto last = dpo_report(result.params, reference, dataset.pairs, config.beta);
  result.trace.push_back({config.steps, last.mean_loss, last.mean_margin, last.preference_accuracy});
  return result;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> trace) {
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "step,loss,margin,accuracy\n";
  for (const auto& r : trace) {
    out << r.step << ',' << num(r.loss) << ',' << (r.margin ? num(*r.margin) : "") << ','
        << (r.accuracy ? num(*r.accuracy) : "") << '\n';
  }
}

// --- checkpoints -----------------------------------------------------------

void save_checkpoint(std::ostream& out, const ToyVocab& vocab, const PolicyParams& params) {
  if (vocab.size() != params.vocab_size) throw ArgumentError("vocabulary does not match the parameters");
  nlohmann::ordered_json j;
  j["format"] = "sumread-toy-policy";
  j["version"] = 1;
  j["vocab"] = vocab.symbols();
  j["B"] = params.buckets;
  j["V"] = params.vocab_size;
  j["seed"] = params.seed;
  j["log_base"] = "e";
  j["logits"] = params.logits;
  out << j.dump() << '\n';
}

Checkpoint load_checkpoint(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what(), 0, e.byte);
  }
  try {
    if (j.value("format", "") != "sumread-toy-policy") throw DataError("not a toy-policy checkpoint");
    if (j.at("version").get<int>() != 1) throw DataError("unsupported checkpoint version");
    ToyVocab vocab(j.at("vocab").get<std::vector<std::string>>());
    PolicyParams p;
    p.buckets = j.at("B").get<std::size_t>();
    p.vocab_size = j.at("V").get<std::size_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.logits = j.at("logits").get<std::vector<double>>();
    if (p.vocab_size != vocab.size() || p.buckets == 0 ||
        p.logits.size() != p.buckets * p.vocab_size * p.vocab_size) {
      throw DataError("checkpoint tensor shape is inconsistent");
    }
    for (double x : p.logits) {
      if (!std::isfinite(x)) throw DataError("checkpoint has non-finite logits");
    }
    return {std::move(vocab), std::move(p)};
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ArgumentError& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

}  // namespace sumread::toy
