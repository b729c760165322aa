#include "sumread/dpo.hpp"

#include <cmath>

#include "sumread/error.hpp"

namespace sumread::dpo {

std::string_view to_string(Role role) { return role == Role::chosen ? "chosen" : "rejected"; }

Role parse_role(std::string_view name) {
  if (name == "chosen") return Role::chosen;
  if (name == "rejected") return Role::rejected;
  throw ArgumentError("unknown role '" + std::string(name) + "'");
}

namespace {

void check_entries(std::span<const double> xs, const char* what) {
  if (xs.empty()) throw ArgumentError(std::string(what) + " is empty");
  for (double x : xs) {
    if (!std::isfinite(x)) throw ArgumentError(std::string(what) + " has a non-finite entry");
    if (x > 0.0) throw ArgumentError(std::string(what) + " has a positive log-probability");
  }
}

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ArgumentError("beta must be positive");
}

double pooled(std::span<const double> xs, LengthNorm norm) {
  const double sum = sequence_logprob(xs);
  return norm == LengthNorm::per_token ? sum / static_cast<double>(xs.size()) : sum;
}

}  // namespace

void validate(const SequenceLogprobs& seq) {
  check_entries(seq.policy_logprobs, "policy_logprobs");
  check_entries(seq.reference_logprobs, "reference_logprobs");
  if (seq.policy_logprobs.size() != seq.reference_logprobs.size()) {
    throw ArgumentError("policy and reference log-prob lists differ in length for '" + seq.id + "'");
  }
}

double sequence_logprob(std::span<const double> per_token) {
  check_entries(per_token, "log-prob list");
  double sum = 0.0;
  for (double x : per_token) sum += x;
  return sum;
}

double implicit_reward(double policy_lp, double reference_lp, double beta) {
  check_beta(beta);
  return beta * (policy_lp - reference_lp);
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  // Past 30, exp(-x) < 1e-13 and log1p is already exact to working precision;
  // the branch keeps exp from ever seeing a large positive argument.
  if (x > 30.0) return x + std::exp(-x);
  if (x < -30.0) return std::exp(x);
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double dpo_loss(double margin) { return softplus(-margin); }

LossGradient dpo_loss_grad(double margin) {
  const double s = sigmoid(-margin);
  return {-s, s};
}

RewardMargin reward_margin(const SequenceLogprobs& chosen, const SequenceLogprobs& rejected,
                           double beta, LengthNorm norm) {
  validate(chosen);
  validate(rejected);
  if (chosen.role != Role::chosen || rejected.role != Role::rejected) {
    throw ArgumentError("reward_margin expects a chosen then a rejected sequence for '" + chosen.id + "'");
  }
  RewardMargin m;
  m.beta = beta;
  m.r_chosen = implicit_reward(pooled(chosen.policy_logprobs, norm),
                               pooled(chosen.reference_logprobs, norm), beta);
  m.r_rejected = implicit_reward(pooled(rejected.policy_logprobs, norm),
                                 pooled(rejected.reference_logprobs, norm), beta);
  m.margin = m.r_chosen - m.r_rejected;
  return m;
}

std::vector<double> per_token_rewards(const SequenceLogprobs& seq, double beta) {
  validate(seq);
  check_beta(beta);
  std::vector<double> out(seq.policy_logprobs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = beta * (seq.policy_logprobs[i] - seq.reference_logprobs[i]);
  }
  return out;
}

LossReport summarize_margins(std::span<const double> margins) {
  if (margins.empty()) throw ArgumentError("empty batch");
  LossReport r;
  r.n_pairs = margins.size();
  double loss = 0.0, margin = 0.0;
  std::size_t wins = 0;
  for (double m : margins) {
    loss += dpo_loss(m);
    margin += m;
    if (m > 0.0) ++wins;
  }
  const auto n = static_cast<double>(margins.size());
  r.mean_loss = loss / n;
  r.mean_margin = margin / n;
  r.preference_accuracy = static_cast<double>(wins) / n;
  return r;
}

LossReport evaluate_pairs(std::span<const LogprobPair> batch, double beta, LengthNorm norm) {
  if (batch.empty()) throw ArgumentError("empty batch");
  std::vector<double> margins;
  margins.reserve(batch.size());
  for (const auto& pair : batch) margins.push_back(reward_margin(pair.chosen, pair.rejected, beta, norm).margin);
  return summarize_margins(margins);
}

}  // namespace sumread::dpo
