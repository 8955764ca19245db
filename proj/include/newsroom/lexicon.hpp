#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "newsroom/errors.hpp"

namespace newsroom::metrics {

struct EmptyLexicon : Error {
    explicit EmptyLexicon(const std::string& msg = "lexicon contains no words")
        : Error("EmptyLexicon", msg) {}
};

// Familiar-word list for the Dale-Chall score. Read-only after load and
// shareable across threads.
//
// Membership is checked on a normalized form: lowercase, possessive "'s"
// (and a bare trailing apostrophe) stripped, then the raw form plus regular
// inflections -s/-es/-ies/-ed/-ing, restoring doubled consonants, a dropped
// final "e" and "ie"/"y" stems. A hyphenated token is familiar when every
// hyphen-separated part is. Tokens without any letter (bare numbers) count
// as familiar.
class Lexicon {
public:
    static Lexicon load_file(const std::filesystem::path& path);
    static Lexicon from_words(const std::vector<std::string>& words,
                              std::string source_label);

    bool is_familiar(std::string_view token) const;
    bool contains(std::string_view normalized_word) const;

    std::size_t size() const noexcept { return words_.size(); }
    const std::string& source_label() const noexcept { return source_label_; }

private:
    Lexicon() = default;

    std::unordered_set<std::string> words_;
    std::string source_label_;
};

} // namespace newsroom::metrics
