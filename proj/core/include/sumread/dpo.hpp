#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sumread::dpo {

/// Default reward temperature.
inline constexpr double kDefaultBeta = 0.1;

enum class Role { chosen, rejected };

std::string_view to_string(Role role);
Role parse_role(std::string_view name);

/// Per-token natural-log probabilities of one response under the policy
/// being trained and under the frozen reference model.
struct SequenceLogprobs {
  std::string id;
  Role role = Role::chosen;
  std::vector<double> policy_logprobs;
  std::vector<double> reference_logprobs;
};

/// Throws ArgumentError unless both lists are non-empty, equally long,
/// finite and <= 0.
void validate(const SequenceLogprobs& seq);

/// Sum of per-token log-probabilities. Throws on an empty list or a
/// positive entry.
double sequence_logprob(std::span<const double> per_token);

/// beta * (policy_lp - reference_lp), the reward implied by the policy's
/// log-ratio against the reference. beta must be positive.
double implicit_reward(double policy_lp, double reference_lp, double beta);

/// Logistic function, evaluated without overflow for any finite input.
double sigmoid(double x);

/// log(1 + e^x) without overflow or cancellation.
double softplus(double x);

/// -log sigmoid(margin) = softplus(-margin). Total and finite for all finite
/// margins; strictly positive and strictly decreasing.
double dpo_loss(double margin);

struct LossGradient {
  double d_chosen;    // d loss / d r_chosen   = -sigmoid(-margin)
  double d_rejected;  // d loss / d r_rejected = +sigmoid(-margin)
};

LossGradient dpo_loss_grad(double margin);

struct RewardMargin {
  double beta = kDefaultBeta;
  double r_chosen = 0.0;
  double r_rejected = 0.0;
  double margin = 0.0;  // r_chosen - r_rejected
};

enum class LengthNorm {
  none,      // raw sequence log-likelihoods (the training objective)
  per_token  // mean per-token log-prob; diagnostics only
};

/// Throws ArgumentError when the roles are not chosen then rejected.
RewardMargin reward_margin(const SequenceLogprobs& chosen, const SequenceLogprobs& rejected,
                           double beta, LengthNorm norm = LengthNorm::none);

/// Element-wise beta * (policy - reference). Summed left to right this
/// reproduces implicit_reward over the summed sequences up to rounding.
std::vector<double> per_token_rewards(const SequenceLogprobs& seq, double beta);

struct LossReport {
  std::size_t n_pairs = 0;
  double mean_loss = 0.0;
  double mean_margin = 0.0;
  double preference_accuracy = 0.0;  // fraction with margin > 0
};

struct LogprobPair {
  SequenceLogprobs chosen;
  SequenceLogprobs rejected;
};

LossReport evaluate_pairs(std::span<const LogprobPair> batch, double beta,
                          LengthNorm norm = LengthNorm::none);

/// Reduces already-computed margins in order. Shared by evaluate_pairs and
/// the toy trainer.
LossReport summarize_margins(std::span<const double> margins);

}  // namespace sumread::dpo
