#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "reference_metrics.hpp"
#include "sumread/corpus.hpp"
#include "sumread/error.hpp"
#include "sumread/interchange.hpp"

using namespace sumread;
using testing::make_instance;

namespace {

ParseResult<QaInstance> squad(const std::string& text, ErrorMode mode = ErrorMode::collect) {
  std::istringstream in(text);
  return parse_squad(in, Split::train, mode);
}

ParseResult<QaInstance> retrieved(const std::string& text, ErrorMode mode = ErrorMode::collect) {
  std::istringstream in(text);
  return parse_retrieved(in, Split::validation, mode);
}

std::vector<QaInstance> numbered(std::size_t n) {
  std::vector<QaInstance> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(make_instance("q" + std::to_string(i), "question?", {"ans"}, "context with ans"));
  }
  return out;
}

std::set<std::string> ids(const std::vector<QaInstance>& v) {
  std::set<std::string> out;
  for (const auto& i : v) out.insert(i.id);
  return out;
}

}  // namespace

TEST_CASE("parse_squad: two qas share one paragraph") {
  const auto r = squad(R"({"data":[{"title":"t","paragraphs":[{"context":"Paris is big.","qas":[
      {"id":"a","question":"Where?","answers":[{"text":"Paris","answer_start":0}]},
      {"id":"b","question":"What?","answers":[{"text":"Paris"},{"text":"paris"}]}]}]}]})");
  REQUIRE(r.items.size() == 2);
  CHECK(r.errors.empty());
  CHECK(r.items[0].context == r.items[1].context);
  CHECK(r.items[0].source == Source::squad);
  CHECK(r.items[1].answers == std::vector<std::string>{"Paris", "paris"});
}

TEST_CASE("parse_squad: empty data array") {
  const auto r = squad(R"({"data":[]})");
  CHECK(r.items.empty());
  CHECK(r.errors.empty());
}

TEST_CASE("parse_squad: malformed JSON reports a byte offset") {
  try {
    squad(R"({"data":[{"paragraphs": [}]})");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.offset() > 0);
  }
}

TEST_CASE("parse_squad: qa without answers is a record error naming the qa") {
  const std::string doc = R"({"data":[{"paragraphs":[{"context":"c","qas":[
      {"id":"good","question":"q","answers":[{"text":"c"}]},
      {"id":"bad","question":"q","answers":[]}]}]}]})";
  const auto r = squad(doc);
  CHECK(r.items.size() == 1);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].record == "bad");
  CHECK_THROWS_AS(squad(doc, ErrorMode::strict), RecordErrorException);
}

TEST_CASE("parse_retrieved keeps only the rank-1 context") {
  const auto r = retrieved(
      R"({"id":"x","question":"q","answers":["c1"],"contexts":[{"text":"c1 text"},{"text":"c2"},{"text":"c3"}]})"
      "\n");
  REQUIRE(r.items.size() == 1);
  CHECK(r.items[0].context == "c1 text");
  CHECK(r.items[0].source == Source::retrieved);
  CHECK(r.items[0].split == Split::validation);
}

TEST_CASE("parse_retrieved collects malformed lines with line numbers") {
  const std::string text =
      R"({"id":"1","question":"q","answers":["a"],"contexts":[{"text":"a"}]})"
      "\n"
      R"({"id":"2","question":"q","answers":["a"],"contexts":[{"text":"a"}]})"
      "\n"
      "{not json\n"
      R"({"id":"3","question":"q","answers":["a"],"contexts":["a"]})"
      "\n";
  const auto r = retrieved(text);
  CHECK(r.items.size() == 3);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 3);
  CHECK_THROWS_AS(retrieved(text, ErrorMode::strict), RecordErrorException);
}

TEST_CASE("parse_retrieved record errors") {
  const auto no_answers = retrieved(R"({"id":"e","question":"q","answers":[],"contexts":[{"text":"a"}]})");
  CHECK(no_answers.items.empty());
  REQUIRE(no_answers.errors.size() == 1);
  CHECK(no_answers.errors[0].record == "e");

  const auto no_contexts = retrieved(R"({"id":"f","question":"q","answers":["a"],"contexts":[]})");
  CHECK(no_contexts.items.empty());
  CHECK(no_contexts.errors.size() == 1);

  const auto dup = retrieved(R"({"id":"d","question":"q","answers":["a"],"contexts":["a"]})"
                             "\n"
                             R"({"id":"d","question":"q","answers":["a"],"contexts":["a"]})");
  CHECK(dup.items.size() == 1);
  REQUIRE(dup.errors.size() == 1);
  CHECK(dup.errors[0].line == 2);
}

TEST_CASE("filter_answer_in_context partitions and counts") {
  const std::vector<QaInstance> in = {
      make_instance("1", "q", {"Paris"}, "the capital, Paris, is..."),
      make_instance("2", "q", {"Rome"}, "nothing here"),
      make_instance("3", "q", {"The Beatles"}, "...the beatles formed..."),
  };
  const auto normalized = filter_answer_in_context(in);
  CHECK(ids(normalized.kept) == std::set<std::string>{"1", "3"});
  CHECK(normalized.stats.total == 3);
  CHECK(normalized.stats.kept == 2);
  CHECK(normalized.stats.dropped == 1);
  CHECK(normalized.stats.kept_fraction == doctest::Approx(2.0 / 3.0));

  ContainmentOptions raw;
  raw.normalize = false;
  CHECK(ids(filter_answer_in_context(in, raw).kept) == std::set<std::string>{"1"});

  const auto none = filter_answer_in_context(std::vector<QaInstance>{});
  CHECK(none.stats.total == 0);
  CHECK(none.stats.kept_fraction == 0.0);
}

TEST_CASE("filter is idempotent and every kept instance has IRA 1") {
  std::istringstream in(testing::read_file(testing::data_dir() / "micro" / "retrieved_micro.jsonl"));
  const auto parsed = parse_retrieved(in);
  REQUIRE(parsed.errors.empty());
  const auto once = filter_answer_in_context(parsed.items);
  const auto twice = filter_answer_in_context(once.kept);
  CHECK(once.kept == twice.kept);
  CHECK(twice.stats.dropped == 0);
  for (const auto& inst : once.kept) {
    CHECK(ira(inst.answers, inst.context) == 1);
    CHECK(oracle::contains_run(oracle::normalize(inst.context), oracle::normalize(inst.answers.front())));
  }
}

TEST_CASE("split_dataset sizes") {
  const auto ten = numbered(10);
  const auto a = split_dataset(ten, {0.8, 0.2}, 7);
  CHECK(a.train.size() == 8);
  CHECK(a.validation.size() == 2);
  CHECK(a.test.empty());
  const auto b = split_dataset(ten, {0.8, 0.2}, 7);
  CHECK(a.train == b.train);

  const auto five = split_dataset(numbered(5), {0.5, 0.5}, 1);
  CHECK(five.train.size() == 2);
  CHECK(five.validation.size() == 3);
  CHECK(five.test.empty());

  const auto partial = split_dataset(numbered(10), {0.5, 0.25}, 1);
  CHECK(partial.train.size() == 5);
  CHECK(partial.validation.size() == 2);
  CHECK(partial.test.size() == 3);
  for (const auto& i : partial.test) CHECK(i.split == Split::test);

  CHECK_THROWS_AS(split_dataset(ten, {0.8, 0.3}, 1), ArgumentError);
  CHECK_THROWS_AS(split_dataset(ten, {0.0, 0.3}, 1), ArgumentError);
}

TEST_CASE("split_dataset is a partition and depends on the seed") {
  const auto in = numbered(40);
  const auto a = split_dataset(in, {0.6, 0.3}, 1);
  const auto b = split_dataset(in, {0.6, 0.3}, 2);
  CHECK(a.train.size() == b.train.size());
  CHECK(ids(a.train) != ids(b.train));

  std::set<std::string> all;
  std::size_t total = 0;
  for (const auto* part : {&a.train, &a.validation, &a.test}) {
    total += part->size();
    for (const auto& i : *part) all.insert(i.id);
  }
  CHECK(total == in.size());
  CHECK(all == ids(in));
}

TEST_CASE("instances round-trip through instances.jsonl") {
  std::vector<QaInstance> in = {make_instance("r1", "Wer? \"quoted\"", {"\u00c4", "b"}, "line\nbreak \u00c4"),
                                make_instance("r2", "q", {"x"}, "x y")};
  in[1].source = Source::retrieved;
  in[1].split = Split::test;
  std::stringstream buf;
  io::write_instances(buf, in);
  CHECK(buf.str().rfind(R"({"id":"r1","question":)", 0) == 0);
  CHECK(io::read_instances(buf) == in);
}
