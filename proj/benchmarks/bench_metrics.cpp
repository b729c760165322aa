#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sumread/metrics.hpp"

using namespace sumread;

namespace {

std::string passage(std::size_t words) {
  static const char* pool[] = {"The", "Eiffel", "tower,", "built", "in", "1889;", "a", "landmark!",
                               "Caf\u00e9", "\u00c9cole", "(Paris)", "an", "\u201cold\u201d", "city"};
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += pool[(i * 7 + 3) % std::size(pool)];
  }
  return out;
}

void BM_NormalizeAnswer(benchmark::State& state) {
  const auto text = passage(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(normalize_answer(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_NormalizeAnswer)->Arg(8)->Arg(64)->Arg(512);

void BM_ExactMatch(benchmark::State& state) {
  const auto prediction = passage(6);
  const std::vector<std::string> refs = {passage(5), passage(6), "Eiffel Tower"};
  for (auto _ : state) benchmark::DoNotOptimize(exact_match(prediction, refs));
}
BENCHMARK(BM_ExactMatch);

void BM_UnigramF1(benchmark::State& state) {
  const auto prediction = passage(static_cast<std::size_t>(state.range(0)));
  const std::vector<std::string> refs = {passage(4), passage(12)};
  for (auto _ : state) benchmark::DoNotOptimize(unigram_f1(prediction, refs));
}
BENCHMARK(BM_UnigramF1)->Arg(8)->Arg(64)->Arg(512);

void BM_AnswerInContext(benchmark::State& state) {
  const auto context = passage(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(answer_in_context("old city", context, true));
}
BENCHMARK(BM_AnswerInContext)->Arg(64)->Arg(512);

}  // namespace
