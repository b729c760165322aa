#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sumread {

enum class Source { squad, retrieved };
enum class Split { train, validation, test };

std::string_view to_string(Source s);
std::string_view to_string(Split s);
Source parse_source(std::string_view name);
Split parse_split(std::string_view name);

/// One (question, answers, context) record.
struct QaInstance {
  std::string id;
  std::string question;
  std::vector<std::string> answers;  // reference answers, source order kept
  std::string context;
  Source source = Source::squad;
  Split split = Split::train;

  friend bool operator==(const QaInstance&, const QaInstance&) = default;
};

/// Checks the record-level invariants: non-empty answers, none blank after
/// trimming, non-empty context. Returns an empty string when valid.
std::string check_instance(const QaInstance& instance);

std::string_view trim(std::string_view text);
bool is_blank(std::string_view text);

}  // namespace sumread
