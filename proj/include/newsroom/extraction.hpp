#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "newsroom/errors.hpp"

namespace newsroom::extraction {

struct SectionNotFound : Error {
    explicit SectionNotFound(const std::string& heading)
        : Error("SectionNotFound", "section not found: " + heading),
          heading(heading) {}
    std::string heading;
};
struct EmptySection : Error {
    explicit EmptySection(const std::string& heading)
        : Error("EmptySection", "section is empty: " + heading) {}
};
struct EmptyItems : Error {
    explicit EmptyItems(const std::string& heading)
        : Error("EmptyItems", "no numbered items under: " + heading) {}
};
struct EmptyAdvice : Error {
    EmptyAdvice() : Error("EmptyAdvice", "advice section has no items") {}
};

// Protocol heading names the agents are instructed to emit.
inline constexpr std::string_view kArticleHeading = "Article";
inline constexpr std::string_view kExtractionHeading = "Extraction";
inline constexpr std::string_view kExplanationHeading = "Explanation";
inline constexpr std::string_view kEvaluationHeading = "Evaluation for reader's notes";
inline constexpr std::string_view kAdviceHeading = "Advice";
inline constexpr std::string_view kImprovementHeading = "Improvement";
inline constexpr std::string_view kRevisedArticleHeading = "Revised Article";

struct ReaderNotes {
    std::vector<std::string> extraction_items;
    std::vector<std::string> explanation_items;
    std::string raw;

    bool fields_equal(const ReaderNotes& other) const {
        return extraction_items == other.extraction_items &&
               explanation_items == other.explanation_items;
    }
};

struct EditorFeedback {
    std::string accuracy_eval;
    std::string complexity_eval;
    std::string conveyance_eval;
    std::vector<std::string> advice_items;
    std::string raw;

    bool fields_equal(const EditorFeedback& other) const {
        return accuracy_eval == other.accuracy_eval &&
               complexity_eval == other.complexity_eval &&
               conveyance_eval == other.conveyance_eval &&
               advice_items == other.advice_items;
    }
};

struct Article {
    std::string body;
    int iteration = 0; // 0 = initial writing

    bool operator==(const Article&) const = default;
};

// Content between the first heading line whose text equals `heading` (any
// number of leading '#', case-insensitive, surrounding whitespace ignored;
// an exact-case match is preferred when both exist) and the next heading of
// same-or-higher level, trimmed. Line content is preserved byte-exact.
std::string extract_section(std::string_view raw, std::string_view heading);

// Items split on line-initial "N." markers; continuation lines belong to
// the current item; the numbering prefix is stripped.
std::vector<std::string> split_numbered_items(std::string_view text);
std::string format_numbered(const std::vector<std::string>& items);

ReaderNotes parse_notes(std::string_view raw);
EditorFeedback parse_feedback(std::string_view raw);

// Initial-writing and revision outputs ("## Article" / "## Revised Article").
Article parse_article(std::string_view raw, int iteration);
Article parse_revised_article(std::string_view raw, int iteration);

std::string to_protocol_text(const ReaderNotes& notes);
std::string to_protocol_text(const EditorFeedback& feedback);

// Token-multiset containment ratio on lowercased word tokens:
// |shared| / min(|a|, |b|). Symmetric; 1.0 for identical texts.
double copy_similarity(std::string_view candidate, std::string_view source);
bool detect_copy(std::string_view candidate, std::string_view source,
                 double threshold = 0.95);

} // namespace newsroom::extraction
