#include "sumread/prompting.hpp"

#include "sumread/error.hpp"

namespace sumread {
namespace {

constexpr std::string_view kType1 =
    "Summarize below context into one sentence according to fit the following context, question "
    "and answer.\n"
    "Context: {context}\n"
    "Question: {question}\n"
    "Answer: {answer}\n"
    "Output:";

constexpr std::string_view kType2 =
    "Summarize below context into one sentence according to fit the following context and "
    "question.\n"
    "Context: {context}\n"
    "Question: {question}\n"
    "Output:";

constexpr std::string_view kType3 =
    "Summarize below context into one sentence according to fit the following context and "
    "answer.\n"
    "Context: {context}\n"
    "Answer: {answer}\n"
    "Output:";

constexpr std::string_view kReader =
    "Given the context and question, predict the answer to the question.\n"
    "Context: {context}\n"
    "Question: {question}\n"
    "Answer:";

constexpr std::string_view kContextLabel = "\nContext: ";
constexpr std::string_view kQuestionLabel = "\nQuestion: ";

std::string_view header_of(std::string_view tmpl) { return tmpl.substr(0, tmpl.find('\n')); }

}  // namespace

std::string_view to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::type1: return "type1";
    case PromptKind::type2: return "type2";
    case PromptKind::type3: return "type3";
    case PromptKind::reader: return "reader";
  }
  return "unknown";
}

PromptKind parse_prompt_kind(std::string_view name) {
  if (name == "type1" || name == "1") return PromptKind::type1;
  if (name == "type2" || name == "2") return PromptKind::type2;
  if (name == "type3" || name == "3") return PromptKind::type3;
  if (name == "reader") return PromptKind::reader;
  throw ArgumentError("unknown prompt kind '" + std::string(name) + "'");
}

std::string_view prompt_template(PromptKind kind) {
  switch (kind) {
    case PromptKind::type1: return kType1;
    case PromptKind::type2: return kType2;
    case PromptKind::type3: return kType3;
    case PromptKind::reader: return kReader;
  }
  throw ArgumentError("unknown prompt kind");
}

std::string render_template(std::string_view tmpl, std::string_view context,
                            std::string_view question, std::string_view answer) {
  struct Slot {
    std::string_view name;
    std::string_view value;
  };
  const Slot slots[] = {{"{context}", context}, {"{question}", question}, {"{answer}", answer}};

  std::string out;
  out.reserve(tmpl.size() + context.size() + question.size() + answer.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool matched = false;
    if (tmpl[i] == '{') {
      for (const auto& s : slots) {
        if (tmpl.substr(i, s.name.size()) == s.name) {
          out += s.value;
          i += s.name.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(tmpl[i++]);
  }
  return out;
}

PromptRecord render_summarizer_prompt(const QaInstance& instance, PromptKind kind,
                                      std::size_t answer_index) {
  if (kind == PromptKind::reader) {
    throw ArgumentError("reader prompts are rendered with render_reader_prompt");
  }
  std::string_view answer;
  if (kind != PromptKind::type2) {
    if (answer_index >= instance.answers.size()) {
      throw ArgumentError("answer_index " + std::to_string(answer_index) + " out of range for '" +
                          instance.id + "'");
    }
    answer = instance.answers[answer_index];
  }
  return {instance.id, kind,
          render_template(prompt_template(kind), instance.context, instance.question, answer)};
}

PromptRecord render_reader_prompt(std::string_view question, std::string_view filtered_context,
                                  std::string id) {
  if (is_blank(question)) throw ArgumentError("reader prompt needs a non-empty question");
  if (is_blank(filtered_context)) throw ArgumentError("reader prompt needs a non-empty context");
  return {std::move(id), PromptKind::reader,
          render_template(kReader, filtered_context, question, {})};
}

std::optional<std::string> extract_context(std::string_view prompt) {
  const auto start = prompt.find(kContextLabel);
  if (start == std::string_view::npos) return std::nullopt;
  const auto body = start + kContextLabel.size();
  const auto end = prompt.find(kQuestionLabel, body);
  if (end == std::string_view::npos) return std::nullopt;
  return std::string(prompt.substr(body, end - body));
}

std::optional<std::string> extract_question(std::string_view prompt) {
  const auto ctx = prompt.find(kContextLabel);
  if (ctx == std::string_view::npos) return std::nullopt;
  const auto start = prompt.find(kQuestionLabel, ctx + kContextLabel.size());
  if (start == std::string_view::npos) return std::nullopt;
  const auto body = start + kQuestionLabel.size();
  const auto end = prompt.find('\n', body);
  if (end == std::string_view::npos) return std::nullopt;
  return std::string(prompt.substr(body, end - body));
}

bool looks_like_type2_prompt(std::string_view prompt) {
  const auto header = header_of(kType2);
  if (!prompt.starts_with(header) || prompt.size() == header.size() ||
      prompt[header.size()] != '\n') {
    return false;
  }
  if (!prompt.ends_with("\nOutput:")) return false;
  return extract_context(prompt).has_value() && extract_question(prompt).has_value();
}

}  // namespace sumread
