#include "sumread/types.hpp"

#include "sumread/error.hpp"

namespace sumread {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::squad: return "squad";
    case Source::retrieved: return "retrieved";
  }
  return "unknown";
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "unknown";
}

Source parse_source(std::string_view name) {
  if (name == "squad") return Source::squad;
  if (name == "retrieved") return Source::retrieved;
  throw ArgumentError("unknown source '" + std::string(name) + "'");
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "validation") return Split::validation;
  if (name == "test") return Split::test;
  throw ArgumentError("unknown split '" + std::string(name) + "'");
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\n\r\f\v";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

bool is_blank(std::string_view text) { return trim(text).empty(); }

std::string check_instance(const QaInstance& instance) {
  if (instance.answers.empty()) return "no answers";
  for (std::size_t i = 0; i < instance.answers.size(); ++i) {
    if (is_blank(instance.answers[i])) return "answer " + std::to_string(i) + " is empty";
  }
  if (instance.context.empty()) return "empty context";
  return {};
}

}  // namespace sumread
