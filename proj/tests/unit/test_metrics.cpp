#include <cmath>
#include <string>
#include <vector>

#include "case_generator.hpp"
#include "doctest.h"
#include "reference_metrics.hpp"
#include "sumread/error.hpp"
#include "sumread/metrics.hpp"

using namespace sumread;
using Strings = std::vector<std::string>;

TEST_CASE("normalize_answer follows the reference oracle") {
  for (const char* text : {"The Eiffel Tower!", "", "a  An THE dog", "Paris, France", "  the  ", "...",
                           "l'\u00c9t\u00e9 \u2014 \u0386\u039b\u03a6\u0391 \u00ab\u0401\u0436\u00bb", "tab\tand\nnewline", "no\u00a0break"}) {
    CAPTURE(text);
    CHECK(normalize_answer(text).tokens == oracle::normalize(text));
  }
  CHECK(normalize_answer("The Eiffel Tower!").tokens == Strings{"eiffel", "tower"});
  CHECK(normalize_answer("").tokens.empty());
  CHECK(normalize_answer("a  An THE dog").tokens == Strings{"dog"});
}

TEST_CASE("normalize_answer deletes punctuation inside words") {
  CHECK(normalize_answer("don't").tokens == Strings{"dont"});
  CHECK(normalize_answer("U.S.A.").tokens == Strings{"usa"});
  CHECK(normalize_answer("t-h-e").tokens.empty());  // joins to an article, then dropped
}

TEST_CASE("normalized tokens are never empty, never articles, never punctuation") {
  oracle::CaseGenerator gen(99);
  for (int i = 0; i < 300; ++i) {
    for (const auto& tok : normalize_answer(gen.text()).tokens) {
      CHECK_FALSE(tok.empty());
      CHECK(tok != "a");
      CHECK(tok != "an");
      CHECK(tok != "the");
      CHECK(tok.find_first_of(".,!?;:'\"") == std::string::npos);
    }
  }
}

TEST_CASE("invalid UTF-8 bytes pass through untouched") {
  const std::string text = "ab\xFF" "cd";
  CHECK(normalize_answer(text).tokens == Strings{text});
}

TEST_CASE("exact_match") {
  CHECK(exact_match("Paris", Strings{"Paris"}) == 1);
  CHECK(exact_match("the Paris", Strings{"Paris"}) == 1);
  CHECK(exact_match("Paris, France", Strings{"Paris"}) == 0);
  CHECK(exact_match("paris", Strings{"London", "PARIS."}) == 1);
  CHECK(exact_match("", Strings{"the"}) == 1);  // both normalize to nothing
  CHECK_THROWS_AS(exact_match("x", Strings{}), ArgumentError);
}

TEST_CASE("unigram_f1") {
  CHECK(unigram_f1("cat sat", Strings{"cat sat"}) == 1.0);
  CHECK(unigram_f1("dog", Strings{"cat"}) == 0.0);
  CHECK(unigram_f1("cat sat", Strings{"the cat sat down"}) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(unigram_f1("", Strings{"cat"}) == 0.0);
  CHECK(unigram_f1("cat", Strings{""}) == 0.0);
  // Multiset overlap: the repeated prediction token only matches once.
  const double p = 1.0 / 2.0, r = 1.0 / 1.0;
  CHECK(unigram_f1("cat cat", Strings{"cat"}) == doctest::Approx(2 * p * r / (p + r)));
  CHECK_THROWS_AS(unigram_f1("x", Strings{}), ArgumentError);
}

TEST_CASE("metric properties over random cases") {
  oracle::CaseGenerator gen(2024);
  for (int i = 0; i < 500; ++i) {
    auto c = gen.next();
    const int em = exact_match(c.prediction, c.references);
    const double f1 = unigram_f1(c.prediction, c.references);
    CHECK(f1 >= 0.0);
    CHECK(f1 <= 1.0);
    if (em == 1 && !normalize_answer(c.prediction).tokens.empty()) CHECK(f1 == 1.0);
    c.references.push_back(gen.text());
    CHECK(exact_match(c.prediction, c.references) >= em);
    CHECK(unigram_f1(c.prediction, c.references) >= f1);
  }
}

TEST_CASE("metrics agree exactly with the oracle on random cases") {
  oracle::CaseGenerator gen(7);
  for (int i = 0; i < 1000; ++i) {
    const auto c = gen.next();
    CAPTURE(c.prediction);
    REQUIRE(normalize_answer(c.prediction).tokens == oracle::normalize(c.prediction));
    CHECK(exact_match(c.prediction, c.references) == oracle::exact_match(c.prediction, c.references));
    CHECK(unigram_f1(c.prediction, c.references) == oracle::unigram_f1(c.prediction, c.references));
  }
}

TEST_CASE("case folding matches the C library inside the supported scope") {
  for (char32_t cp = 0; cp < 0x0530; ++cp) {
    if (!oracle::in_case_scope(cp) || oracle::is_listed_punctuation(cp) || oracle::is_listed_space(cp)) continue;
    std::string s;
    if (cp < 0x80) {
      s.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      s.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      s.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      continue;
    }
    if (cp == 0) continue;
    CAPTURE(static_cast<unsigned>(cp));
    CHECK(normalize_answer(s).tokens == oracle::normalize(s));
  }
}

TEST_CASE("punctuation and whitespace classes match the listed sets") {
  for (char32_t cp = 1; cp < 0x3100; ++cp) {
    CAPTURE(static_cast<unsigned>(cp));
    CHECK(is_punctuation(cp) == oracle::is_listed_punctuation(cp));
    CHECK(is_whitespace(cp) == oracle::is_listed_space(cp));
  }
}

TEST_CASE("token_count") {
  CHECK(token_count("a b  c") == 3);
  CHECK(token_count("word") == 1);
  CHECK(token_count("same text here") == token_count("same text here"));
  CHECK_THROWS_AS(token_count(""), ArgumentError);
  CHECK_THROWS_AS(token_count("   "), ArgumentError);

  const CharBudgetTokenCounter chars(4);
  CHECK(chars.count("abcdefgh") == 2);
  CHECK(chars.count("abcdefghi") == 3);
  CHECK(make_token_counter("whitespace")->name() == "whitespace");
  CHECK(make_token_counter("chars3")->count("abcdef") == 2);
  CHECK_THROWS_AS(make_token_counter("bpe"), ArgumentError);
  CHECK_THROWS_AS(make_token_counter("chars0"), ArgumentError);
}

TEST_CASE("ept") {
  CHECK(ept(1, 20) == 0.05);
  CHECK(ept(0, 17) == 0.0);
  CHECK_THROWS_AS(ept(1, 0), ArgumentError);
  CHECK(ept_ratio(59.59, 147.30) == doctest::Approx(0.4046).epsilon(1e-4));
}

TEST_CASE("ira uses the first answer by default") {
  CHECK(ira(Strings{"Paris"}, "the capital Paris is large") == 1);
  CHECK(ira(Strings{"Paris France"}, "the capital Paris is large") == 0);
  CHECK(ira(Strings{"London", "Paris"}, "the capital Paris is large") == 0);
  ContainmentOptions any;
  any.policy = AnswerPolicy::any;
  CHECK(ira(Strings{"London", "Paris"}, "the capital Paris is large", any) == 1);
  CHECK_THROWS_AS(ira(Strings{}, "ctx"), ArgumentError);
}

TEST_CASE("containment: normalized token runs versus raw bytes") {
  CHECK(answer_in_context("The Beatles", "...the beatles formed...", true));
  CHECK_FALSE(answer_in_context("The Beatles", "...the beatles formed...", false));
  CHECK(answer_in_context("Paris", "the capital, Paris, is...", false));
  // Normalized mode matches whole tokens only.
  CHECK_FALSE(answer_in_context("cat", "concatenate", true));
  CHECK(answer_in_context("cat", "concatenate", false));
  // An answer that normalizes to nothing is never contained.
  CHECK_FALSE(answer_in_context("the", "the end", true));
}

TEST_CASE("containment agrees with a naive token scan") {
  oracle::CaseGenerator gen(5);
  for (int i = 0; i < 400; ++i) {
    const auto answer = gen.text();
    const auto context = gen.text() + " " + (i % 2 ? answer : gen.text()) + " " + gen.text();
    CHECK(answer_in_context(answer, context, true) ==
          oracle::contains_run(oracle::normalize(context), oracle::normalize(answer)));
  }
}

TEST_CASE("score_instance keeps ept * token_len == em") {
  const WhitespaceTokenCounter ws;
  const auto row = score_instance("q1", "Paris", Strings{"Paris"}, "Paris is the capital", ws);
  CHECK(row.em == 1);
  CHECK(row.f1 == 1.0);
  CHECK(row.token_len == 4);
  CHECK(row.ept == 0.25);
  CHECK(row.ira == 1);
  oracle::CaseGenerator gen(3);
  for (int i = 0; i < 200; ++i) {
    const auto c = gen.next();
    const std::string ctx = "ctx " + gen.text();
    const auto r = score_instance("r", c.prediction, c.references, ctx, ws);
    CHECK(r.ept * static_cast<double>(r.token_len) == static_cast<double>(r.em));
  }
}

TEST_CASE("aggregate") {
  std::vector<ScoreRow> rows;
  for (int i = 0; i < 4; ++i) rows.push_back({"q" + std::to_string(i), 1, 1.0, 10, 0.1, 1});
  const auto rep = aggregate(rows, "m");
  CHECK(rep.n == 4);
  CHECK(rep.em_pct == 100.0);
  CHECK(rep.mean_token_len == 10.0);
  CHECK(rep.ept_ratio == 10.0);
  CHECK(rep.ept_mean == doctest::Approx(0.1));
  CHECK(rep.ira_pct == 100.0);
  CHECK_THROWS_AS(aggregate(std::vector<ScoreRow>{}), ArgumentError);
}

TEST_CASE("aggregate is independent of row order") {
  std::vector<ScoreRow> rows;
  for (int i = 0; i < 50; ++i) {
    const std::size_t len = 1 + static_cast<std::size_t>(i * 7 % 13);
    const int em = i % 3 == 0;
    rows.push_back({"id" + std::to_string(i), em, 0.1 * (i % 10), len, ept(em, len), i % 2});
  }
  const auto a = aggregate(rows);
  std::reverse(rows.begin(), rows.end());
  const auto b = aggregate(rows);
  CHECK(a.em_pct == b.em_pct);
  CHECK(a.f1_pct == b.f1_pct);
  CHECK(a.mean_token_len == b.mean_token_len);
  CHECK(a.ept_mean == b.ept_mean);
}

TEST_CASE("retention against a baseline") {
  AggregateReport origin;
  origin.model = "Origin";
  origin.em_pct = 59.59;
  origin.mean_token_len = 147.30;
  AggregateReport sft;
  sft.em_pct = 55.21;
  sft.mean_token_len = 29.99;
  const auto point = retention(sft, origin);
  CHECK(point.baseline == "Origin");
  CHECK(point.length_fraction == doctest::Approx(0.2036).epsilon(1e-3));
  CHECK(point.em_retention == doctest::Approx(0.9265).epsilon(1e-3));

  AggregateReport empty;
  CHECK_THROWS_AS(retention(sft, empty), ArgumentError);
}
