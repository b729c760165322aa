#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "sumread/types.hpp"

namespace sumread {

/// type1 uses (question, answer, context), type2 (question, context),
/// type3 (answer, context), reader (question, filtered context).
enum class PromptKind { type1, type2, type3, reader };

std::string_view to_string(PromptKind kind);
PromptKind parse_prompt_kind(std::string_view name);  // accepts "1".."3" too

struct PromptRecord {
  std::string id;
  PromptKind kind = PromptKind::type2;
  std::string prompt;

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

/// Literal template text with `{context}`, `{question}`, `{answer}`
/// placeholders. Version v1; the golden copies live in core/templates/v1.
std::string_view prompt_template(PromptKind kind);

/// Substitutes placeholders in one left-to-right pass; substituted values
/// are never rescanned, so values containing "{question}" stay literal.
std::string render_template(std::string_view tmpl, std::string_view context,
                            std::string_view question, std::string_view answer);

/// `answer_index` selects the reference answer for type1/type3 and is
/// ignored for type2.
PromptRecord render_summarizer_prompt(const QaInstance& instance, PromptKind kind,
                                      std::size_t answer_index = 0);

/// Throws ArgumentError on empty or whitespace-only input.
PromptRecord render_reader_prompt(std::string_view question, std::string_view filtered_context,
                                  std::string id = {});

/// Pulls the Context field back out of a type2 or reader prompt. Returns
/// nothing when the prompt does not have that shape.
std::optional<std::string> extract_context(std::string_view prompt);
std::optional<std::string> extract_question(std::string_view prompt);

/// True when the text is shaped like a rendered type2 prompt: header line,
/// Context line, Question line, trailing "Output:".
bool looks_like_type2_prompt(std::string_view prompt);

}  // namespace sumread
