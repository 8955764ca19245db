#include "newsroom/lexicon.hpp"

#include <cctype>
#include <fstream>

#include "newsroom/detail/text_chars.hpp"

namespace newsroom::metrics {

namespace detail = newsroom::metrics::detail;

namespace {

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

std::string normalize_entry(std::string_view raw) {
    std::string w = trim(raw);
    for (char& c : w) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    while (!w.empty() && w.back() == '.') {
        w.pop_back();
    }
    return w;
}

// Lowercase, fold curly apostrophes to ASCII, strip possessive suffix.
std::string normalize_token(std::string_view token) {
    std::string out;
    out.reserve(token.size());
    for (const auto& cp : detail::decode_utf8(token)) {
        if (detail::is_apostrophe(cp.value)) {
            out.push_back('\'');
        } else if (cp.value < 0x80) {
            out.push_back(static_cast<char>(
                std::tolower(static_cast<unsigned char>(cp.value))));
        } else {
            out.append(token.substr(cp.offset, cp.length));
        }
    }
    if (out.size() >= 2 && out.compare(out.size() - 2, 2, "'s") == 0) {
        out.erase(out.size() - 2);
    } else if (!out.empty() && out.back() == '\'') {
        out.pop_back();
    }
    return out;
}

// Regular-inflection stems tried in addition to the raw form.
std::vector<std::string> suffix_candidates(const std::string& w) {
    std::vector<std::string> cands;
    const std::size_t n = w.size();
    const auto ends = [&](std::string_view suffix) {
        return n >= suffix.size() &&
               w.compare(n - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends("ies") && n >= 5) {
        cands.push_back(w.substr(0, n - 3) + "y");
    }
    if (ends("es") && n > 3) {
        cands.push_back(w.substr(0, n - 2));
    }
    if (ends("s") && !ends("ss") && n > 2) {
        cands.push_back(w.substr(0, n - 1));
    }
    if (ends("ied") && n >= 5) {
        cands.push_back(w.substr(0, n - 3) + "y");
    }
    if (ends("ed") && n > 3) {
        cands.push_back(w.substr(0, n - 2));
        cands.push_back(w.substr(0, n - 1));
        if (n > 4 && w[n - 3] == w[n - 4]) {
            cands.push_back(w.substr(0, n - 3));
        }
    }
    if (ends("ing") && n > 4) {
        cands.push_back(w.substr(0, n - 3));
        cands.push_back(w.substr(0, n - 3) + "e");
        if (n > 5 && w[n - 4] == w[n - 5]) {
            cands.push_back(w.substr(0, n - 4));
        }
        if (ends("ying") && n >= 5) {
            cands.push_back(w.substr(0, n - 4) + "ie");
        }
    }
    return cands;
}

bool token_has_letter(std::string_view token) {
    for (const auto& cp : detail::decode_utf8(token)) {
        if (detail::is_letter(cp.value)) {
            return true;
        }
    }
    return false;
}

} // namespace

Lexicon Lexicon::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("LexiconFileError",
                    "cannot open lexicon file: " + path.string());
    }
    Lexicon lex;
    lex.source_label_ = path.filename().string();
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        lex.words_.insert(normalize_entry(t));
    }
    if (lex.words_.empty()) {
        throw EmptyLexicon("lexicon file has no entries: " + path.string());
    }
    return lex;
}

Lexicon Lexicon::from_words(const std::vector<std::string>& words,
                            std::string source_label) {
    Lexicon lex;
    lex.source_label_ = std::move(source_label);
    for (const auto& w : words) {
        const std::string e = normalize_entry(w);
        if (!e.empty()) {
            lex.words_.insert(e);
        }
    }
    if (lex.words_.empty()) {
        throw EmptyLexicon();
    }
    return lex;
}

bool Lexicon::contains(std::string_view normalized_word) const {
    return words_.count(std::string(normalized_word)) != 0;
}

bool Lexicon::is_familiar(std::string_view token) const {
    if (!token_has_letter(token)) {
        return true; // bare numbers count as familiar
    }
    const auto parts = detail::split_hyphen_parts(token);
    if (parts.size() > 1) {
        for (const auto& p : parts) {
            if (!is_familiar(p)) {
                return false;
            }
        }
        return true;
    }
    const std::string w = normalize_token(token);
    if (contains(w)) {
        return true;
    }
    for (const auto& cand : suffix_candidates(w)) {
        if (contains(cand)) {
            return true;
        }
    }
    return false;
}

} // namespace newsroom::metrics
