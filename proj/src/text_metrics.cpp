#include "newsroom/text_metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "newsroom/detail/text_chars.hpp"

namespace newsroom::metrics {

namespace detail = newsroom::metrics::detail;
using detail::CodePoint;

namespace {

constexpr std::array<std::string_view, 11> kAbbreviations = {
    "dr", "mr", "mrs", "ms", "prof", "fig", "eq", "e.g", "i.e", "et al", "vs",
};

bool is_terminator(char32_t c) { return c == U'.' || c == U'!' || c == U'?'; }

bool is_closer(char32_t c) {
    return c == U'"' || c == U'\'' || c == U')' || c == U']' || c == 0x2019 ||
           c == 0x201D;
}

bool is_opener(char32_t c) {
    return c == U'"' || c == U'\'' || c == U'(' || c == U'[' || c == 0x2018 ||
           c == 0x201C;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

// The word before the period (case-insensitive) is on the abbreviation
// stop-list, with a non-alphanumeric boundary in front of it.
bool ends_with_abbreviation(std::string_view text, std::size_t period_offset) {
    const std::string prefix = ascii_lower(text.substr(
        period_offset > 16 ? period_offset - 16 : 0,
        period_offset > 16 ? 16 : period_offset));
    for (const auto abbr : kAbbreviations) {
        if (prefix.size() < abbr.size()) {
            continue;
        }
        if (prefix.compare(prefix.size() - abbr.size(), abbr.size(), abbr) != 0) {
            continue;
        }
        const std::size_t before = prefix.size() - abbr.size();
        if (before == 0 && period_offset > 16) {
            continue; // boundary unknown, window truncated the char before
        }
        if (before == 0 ||
            !detail::is_alnum(static_cast<unsigned char>(prefix[before - 1]))) {
            return true;
        }
    }
    return false;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

long part_syllables(std::string_view part) {
    std::string letters;
    for (const auto& cp : detail::decode_utf8(part)) {
        if (cp.value < 0x80 && detail::is_letter(cp.value)) {
            letters.push_back(static_cast<char>(detail::to_lower(cp.value)));
        }
    }
    if (letters.empty()) {
        return 0;
    }
    const auto is_vowel = [](char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' ||
               c == 'y';
    };
    long groups = 0;
    bool prev_vowel = false;
    for (const char c : letters) {
        const bool v = is_vowel(c);
        if (v && !prev_vowel) {
            ++groups;
        }
        prev_vowel = v;
    }
    const std::size_t n = letters.size();
    if (n >= 2 && letters[n - 1] == 'e') {
        const bool le_after_consonant =
            n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if (!le_after_consonant) {
            --groups;
        }
    }
    return std::max<long>(groups, 1);
}

} // namespace

std::vector<std::string> tokenize_words(std::string_view text) {
    if (!detail::has_word_char(text)) {
        throw EmptyText();
    }
    std::vector<std::string> tokens;
    const auto cps = detail::decode_utf8(text);
    std::size_t i = 0;
    while (i < cps.size()) {
        const char32_t c = cps[i].value;
        if (!(detail::is_alnum(c) || detail::is_apostrophe(c) ||
              detail::is_hyphen(c))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cps.size() &&
               (detail::is_alnum(cps[j].value) ||
                detail::is_apostrophe(cps[j].value) ||
                detail::is_hyphen(cps[j].value))) {
            ++j;
        }
        // strip leading/trailing joiners so apostrophes and hyphens are
        // kept only when internal
        std::size_t b = i;
        std::size_t e = j;
        while (b < e && !detail::is_alnum(cps[b].value)) {
            ++b;
        }
        while (e > b && !detail::is_alnum(cps[e - 1].value)) {
            --e;
        }
        if (b < e) {
            const std::size_t off = cps[b].offset;
            const std::size_t end = cps[e - 1].offset + cps[e - 1].length;
            tokens.emplace_back(text.substr(off, end - off));
        }
        i = j;
    }
    return tokens;
}

std::vector<std::string> segment_sentences(std::string_view text) {
    if (!detail::has_word_char(text)) {
        throw EmptyText();
    }
    const auto cps = detail::decode_utf8(text);
    std::vector<std::string> sentences;
    std::size_t start = 0; // index into cps
    std::size_t i = 0;
    const std::size_t n = cps.size();

    const auto emit = [&](std::size_t from, std::size_t to_exclusive) {
        if (from >= to_exclusive) {
            return;
        }
        const std::size_t off = cps[from].offset;
        const std::size_t end =
            cps[to_exclusive - 1].offset + cps[to_exclusive - 1].length;
        std::string s = trim(text.substr(off, end - off));
        if (!s.empty()) {
            sentences.push_back(std::move(s));
        }
    };

    while (i < n) {
        if (!is_terminator(cps[i].value)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        int terminators = 0;
        while (j < n && (is_terminator(cps[j].value) || is_closer(cps[j].value))) {
            if (is_terminator(cps[j].value)) {
                ++terminators;
            }
            ++j;
        }
        const bool abbreviated = cps[i].value == U'.' && terminators == 1 &&
                                 ends_with_abbreviation(text, cps[i].offset);
        if (!abbreviated) {
            std::size_t k = j;
            while (k < n && detail::is_space(cps[k].value)) {
                ++k;
            }
            std::size_t m = k;
            while (m < n && is_opener(cps[m].value)) {
                ++m;
            }
            const bool upper_or_digit =
                m < n && ((cps[m].value >= U'A' && cps[m].value <= U'Z') ||
                          detail::is_digit(cps[m].value));
            if (k > j && upper_or_digit) {
                emit(start, j);
                start = k;
                i = k;
                continue;
            }
        }
        i = j;
    }
    emit(start, n);
    return sentences;
}

long count_syllables(std::string_view word) {
    long total = 0;
    for (const auto& part : detail::split_hyphen_parts(word)) {
        total += part_syllables(part);
    }
    return std::max<long>(total, 1);
}

TextStats compute_stats(std::string_view text, const Lexicon* lexicon) {
    const auto sentences = segment_sentences(text);
    const auto words = tokenize_words(text);
    TextStats stats;
    stats.sentence_count = static_cast<long>(sentences.size());
    stats.word_count = static_cast<long>(words.size());
    for (const auto& w : words) {
        for (const auto& cp : detail::decode_utf8(w)) {
            if (detail::is_letter(cp.value)) {
                ++stats.letter_count;
            }
        }
        stats.syllable_count += count_syllables(w);
        if (lexicon != nullptr && !lexicon->is_familiar(w)) {
            ++stats.difficult_word_count;
        }
    }
    return stats;
}

double coleman_liau_from(const TextStats& s) {
    const double words = static_cast<double>(s.word_count);
    const double letters_per_100 = 100.0 * static_cast<double>(s.letter_count) / words;
    const double sentences_per_100 =
        100.0 * static_cast<double>(s.sentence_count) / words;
    return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8;
}

double flesch_kincaid_from(const TextStats& s) {
    const double words = static_cast<double>(s.word_count);
    const double sentences = static_cast<double>(s.sentence_count);
    return 0.39 * (words / sentences) +
           11.8 * (static_cast<double>(s.syllable_count) / words) - 15.59;
}

double dale_chall_from(const TextStats& s) {
    const double words = static_cast<double>(s.word_count);
    const double pct_difficult =
        100.0 * static_cast<double>(s.difficult_word_count) / words;
    double score = 0.1579 * pct_difficult +
                   0.0496 * (words / static_cast<double>(s.sentence_count));
    if (pct_difficult > 5.0) {
        score += 3.6365;
    }
    return score;
}

double coleman_liau(std::string_view text) {
    return coleman_liau_from(compute_stats(text));
}

double flesch_kincaid(std::string_view text) {
    return flesch_kincaid_from(compute_stats(text));
}

double dale_chall(std::string_view text, const Lexicon& lexicon) {
    if (lexicon.size() == 0) {
        throw EmptyLexicon();
    }
    return dale_chall_from(compute_stats(text, &lexicon));
}

ReadabilityScores score_all(std::string_view text, const Lexicon& lexicon) {
    if (lexicon.size() == 0) {
        throw EmptyLexicon();
    }
    ReadabilityScores scores;
    scores.stats = compute_stats(text, &lexicon);
    scores.cli = coleman_liau_from(scores.stats);
    scores.fkgl = flesch_kincaid_from(scores.stats);
    scores.dcrs = dale_chall_from(scores.stats);
    return scores;
}

} // namespace newsroom::metrics
