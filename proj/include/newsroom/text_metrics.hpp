#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "newsroom/errors.hpp"
#include "newsroom/lexicon.hpp"

namespace newsroom::metrics {

struct EmptyText : Error {
    explicit EmptyText(const std::string& msg = "text contains no word characters")
        : Error("EmptyText", msg) {}
};

// Raw counts all three readability formulas are computed from. Recomputing
// any formula from a stored TextStats reproduces the stored score exactly.
struct TextStats {
    long sentence_count = 0;
    long word_count = 0;
    long letter_count = 0;     // alphabetic characters only, digits excluded
    long syllable_count = 0;
    long difficult_word_count = 0; // words not familiar per the lexicon

    bool operator==(const TextStats&) const = default;
};

struct ReadabilityScores {
    double cli = 0.0;
    double fkgl = 0.0;
    double dcrs = 0.0;
    TextStats stats;

    bool operator==(const ReadabilityScores&) const = default;
};

// Sentence rule: split on '.', '!', '?' followed by whitespace and an
// uppercase letter or digit; a fixed abbreviation stop-list (Dr., Mr., Mrs.,
// Ms., Prof., Fig., Eq., e.g., i.e., et al., vs.) never splits. Text with no
// terminator is one sentence.
std::vector<std::string> segment_sentences(std::string_view text);

// Word rule: a token is a maximal run of alphanumerics, allowing internal
// apostrophes and hyphens; leading/trailing punctuation is stripped.
std::vector<std::string> tokenize_words(std::string_view text);

// Vowel-group heuristic (a e i o u y), one silent terminal "e" removed unless
// the word ends in "le" after a consonant; hyphen parts counted separately;
// digit-only tokens count 1. Always >= 1.
long count_syllables(std::string_view word);

// Counts for one text. `lexicon` may be null when difficult-word counts are
// not needed (CLI/FKGL only); difficult_word_count is then 0.
TextStats compute_stats(std::string_view text, const Lexicon* lexicon = nullptr);

// Formula evaluation from stored counts.
double coleman_liau_from(const TextStats& s);
double flesch_kincaid_from(const TextStats& s);
double dale_chall_from(const TextStats& s);

double coleman_liau(std::string_view text);
double flesch_kincaid(std::string_view text);
double dale_chall(std::string_view text, const Lexicon& lexicon);

// All three metrics over one shared TextStats.
ReadabilityScores score_all(std::string_view text, const Lexicon& lexicon);

} // namespace newsroom::metrics
