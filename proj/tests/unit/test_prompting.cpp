#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "sumread/error.hpp"
#include "sumread/interchange.hpp"
#include "sumread/prompting.hpp"

using namespace sumread;
using testing::make_instance;

namespace {

std::string golden(const char* name) { return testing::read_file(testing::template_dir() / name); }

const char* golden_name(PromptKind kind) {
  switch (kind) {
    case PromptKind::type1: return "type1.txt";
    case PromptKind::type2: return "type2.txt";
    case PromptKind::type3: return "type3.txt";
    case PromptKind::reader: return "reader.txt";
  }
  return "";
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

}  // namespace

TEST_CASE("built-in templates equal the golden files") {
  for (auto kind : {PromptKind::type1, PromptKind::type2, PromptKind::type3, PromptKind::reader}) {
    CAPTURE(to_string(kind));
    CHECK(std::string(prompt_template(kind)) == golden(golden_name(kind)));
  }
}

TEST_CASE("type2 rendering, byte for byte") {
  const auto inst = make_instance("i", "q?", {"ans"}, "c.");
  CHECK(render_summarizer_prompt(inst, PromptKind::type2).prompt ==
        "Summarize below context into one sentence according to fit the following context and question.\n"
        "Context: c.\nQuestion: q?\nOutput:");
}

TEST_CASE("rendering with sentinels reproduces the golden text") {
  const auto inst = make_instance("s", "\x01Q\x01", {"\x01" "A\x01"}, "\x01" "C\x01");
  for (auto kind : {PromptKind::type1, PromptKind::type2, PromptKind::type3}) {
    std::string expected = golden(golden_name(kind));
    expected = replace_all(expected, "{context}", inst.context);
    expected = replace_all(expected, "{question}", inst.question);
    expected = replace_all(expected, "{answer}", inst.answers[0]);
    const auto rec = render_summarizer_prompt(inst, kind);
    CHECK(rec.prompt == expected);
    CHECK(rec.id == "s");
    CHECK(rec.kind == kind);
  }
  std::string reader = golden("reader.txt");
  reader = replace_all(reader, "{context}", "CTX");
  reader = replace_all(reader, "{question}", "QQ");
  CHECK(render_reader_prompt("QQ", "CTX").prompt == reader);
}

TEST_CASE("type1 and type3 carry the fields their inputs name") {
  const auto inst = make_instance("i", "Who?", {"Ada", "Byron"}, "Ada wrote notes.");
  const auto t1 = render_summarizer_prompt(inst, PromptKind::type1).prompt;
  const auto t3 = render_summarizer_prompt(inst, PromptKind::type3).prompt;
  CHECK(t1.find("\nQuestion: Who?\n") != std::string::npos);
  CHECK(t1.find("\nAnswer: Ada\n") != std::string::npos);
  CHECK(t3.find("Question:") == std::string::npos);
  CHECK(t3.find("\nAnswer: Ada\n") != std::string::npos);
  CHECK(render_summarizer_prompt(inst, PromptKind::type3, 1).prompt.find("\nAnswer: Byron\n") !=
        std::string::npos);
  CHECK(t1.substr(t1.size() - 7) == "Output:");
}

TEST_CASE("rendering is deterministic and does not re-substitute") {
  const auto inst = make_instance("i", "{context}", {"{question}"}, "{answer}");
  const auto a = render_summarizer_prompt(inst, PromptKind::type1);
  const auto b = render_summarizer_prompt(inst, PromptKind::type1);
  CHECK(a == b);
  CHECK(a.prompt.find("Context: {answer}\nQuestion: {context}\nAnswer: {question}\n") != std::string::npos);
}

TEST_CASE("type2 never leaks an answer absent from the inputs") {
  for (int i = 0; i < 50; ++i) {
    const std::string answer = "zq" + std::to_string(i * 7919) + "xv";
    const auto inst = make_instance("i", "what is item " + std::to_string(i) + "?", {answer},
                                    "item " + std::to_string(i) + " is described here.");
    CHECK(render_summarizer_prompt(inst, PromptKind::type2).prompt.find(answer) == std::string::npos);
  }
}

TEST_CASE("prompt argument errors") {
  const auto inst = make_instance("i", "q", {"a"}, "c");
  CHECK_THROWS_AS(render_summarizer_prompt(inst, PromptKind::type1, 1), ArgumentError);
  CHECK_THROWS_AS(render_summarizer_prompt(inst, PromptKind::type3, 5), ArgumentError);
  CHECK_NOTHROW(render_summarizer_prompt(inst, PromptKind::type2, 5));
  CHECK_THROWS_AS(render_summarizer_prompt(inst, PromptKind::reader), ArgumentError);
  CHECK_THROWS_AS(render_reader_prompt("   ", "ctx"), ArgumentError);
  CHECK_THROWS_AS(render_reader_prompt("q", ""), ArgumentError);
  CHECK_THROWS_AS(parse_prompt_kind("type4"), ArgumentError);
  CHECK(parse_prompt_kind("2") == PromptKind::type2);
  CHECK(parse_prompt_kind("reader") == PromptKind::reader);
}

TEST_CASE("reader prompt layout and context extraction") {
  const std::string ctx = "Line one.\nLine two: still context.";
  const auto rec = render_reader_prompt("Why?", ctx, "r1");
  CHECK(rec.kind == PromptKind::reader);
  CHECK(rec.id == "r1");
  CHECK(rec.prompt.find("Context: " + ctx + "\nQuestion: Why?\nAnswer:") != std::string::npos);
  CHECK(rec.prompt.substr(rec.prompt.size() - 7) == "Answer:");
  CHECK(extract_context(rec.prompt) == ctx);
  CHECK(extract_question(rec.prompt) == "Why?");
}

TEST_CASE("type2 shape detection") {
  const auto inst = make_instance("i", "q", {"a"}, "c");
  CHECK(looks_like_type2_prompt(render_summarizer_prompt(inst, PromptKind::type2).prompt));
  CHECK_FALSE(looks_like_type2_prompt(render_summarizer_prompt(inst, PromptKind::type3).prompt));
  CHECK_FALSE(looks_like_type2_prompt("Context: c\nOutput:"));
}

TEST_CASE("prompts.jsonl round-trip") {
  const auto inst = make_instance("p", "q", {"a"}, "c");
  const std::vector<PromptRecord> recs = {render_summarizer_prompt(inst, PromptKind::type1),
                                          render_reader_prompt("q", "c", "p")};
  std::stringstream buf;
  io::write_prompts(buf, recs);
  CHECK(io::read_prompts(buf) == recs);
}
