#pragma once

// Code-point classification shared by tokenization, sentence segmentation
// and lexicon normalization. ASCII is classified directly; a small set of
// common Unicode punctuation/whitespace is recognized, every other non-ASCII
// code point counts as a letter.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace newsroom::metrics::detail {

struct CodePoint {
    char32_t value = 0;
    std::size_t offset = 0; // byte offset in the source string
    std::size_t length = 0; // byte length of the encoding
};

// Minimal UTF-8 decode; invalid bytes are passed through one byte at a time
// as Latin-1 so classification stays total.
std::vector<CodePoint> decode_utf8(std::string_view text);

bool is_space(char32_t c);
bool is_digit(char32_t c);
bool is_letter(char32_t c);
bool is_apostrophe(char32_t c);
bool is_hyphen(char32_t c);

inline bool is_alnum(char32_t c) { return is_letter(c) || is_digit(c); }

inline char32_t to_lower(char32_t c) {
    return (c >= U'A' && c <= U'Z') ? c + 32 : c;
}

// Splits a token string on hyphen code points; empty parts are dropped.
std::vector<std::string> split_hyphen_parts(std::string_view token);

// True if the string contains at least one alphanumeric code point.
bool has_word_char(std::string_view text);

} // namespace newsroom::metrics::detail
