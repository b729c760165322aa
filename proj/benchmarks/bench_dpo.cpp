#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sumread/dpo.hpp"
#include "sumread/toy_policy.hpp"

using namespace sumread;

namespace {

void BM_DpoLoss(benchmark::State& state) {
  double m = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpo::dpo_loss(m));
    m = m > 5.0 ? -5.0 : m + 0.001;
  }
}
BENCHMARK(BM_DpoLoss);

void BM_EvaluatePairs(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lp(-4.0, -0.01);
  std::vector<dpo::LogprobPair> batch;
  for (int i = 0; i < state.range(0); ++i) {
    dpo::SequenceLogprobs c{"p" + std::to_string(i), dpo::Role::chosen, {}, {}};
    dpo::SequenceLogprobs r{c.id, dpo::Role::rejected, {}, {}};
    for (int t = 0; t < 32; ++t) {
      c.policy_logprobs.push_back(lp(rng));
      c.reference_logprobs.push_back(lp(rng));
      r.policy_logprobs.push_back(lp(rng));
      r.reference_logprobs.push_back(lp(rng));
    }
    batch.push_back({std::move(c), std::move(r)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(dpo::evaluate_pairs(batch, 0.1));
}
BENCHMARK(BM_EvaluatePairs)->Arg(16)->Arg(256);

std::vector<toy::TokenPair> toy_pairs(std::size_t n, std::size_t vocab) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<toy::TokenId> tok(2, static_cast<toy::TokenId>(vocab - 1));
  std::vector<toy::TokenPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    pairs.push_back({"p" + std::to_string(i), {tok(rng), tok(rng), tok(rng)},
                     {tok(rng), tok(rng), 1}, {tok(rng), tok(rng), tok(rng), tok(rng), 1}});
  }
  return pairs;
}

void BM_ToyLogprob(benchmark::State& state) {
  const auto vocab = toy::ToyVocab::standard(16);
  const auto params = toy::init_policy(vocab, 64, 1);
  const auto pairs = toy_pairs(1, 16);
  for (auto _ : state) benchmark::DoNotOptimize(toy::logprob(params, pairs[0].prompt, pairs[0].chosen));
}
BENCHMARK(BM_ToyLogprob);

void BM_ToyDpoGradient(benchmark::State& state) {
  const auto vocab = toy::ToyVocab::standard(16);
  const auto params = toy::init_policy(vocab, 64, 1);
  const auto reference = toy::init_policy(vocab, 64, 2);
  const auto pairs = toy_pairs(static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(toy::dpo_gradient(params, reference, pairs, 0.1));
}
BENCHMARK(BM_ToyDpoGradient)->Arg(16)->Arg(128);

}  // namespace
