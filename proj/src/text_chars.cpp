#include "newsroom/detail/text_chars.hpp"

namespace newsroom::metrics::detail {

std::vector<CodePoint> decode_utf8(std::string_view text) {
    std::vector<CodePoint> out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        char32_t cp = b0;
        if ((b0 & 0x80u) == 0) {
            len = 1;
        } else if ((b0 & 0xE0u) == 0xC0u) {
            len = 2;
            cp = b0 & 0x1Fu;
        } else if ((b0 & 0xF0u) == 0xE0u) {
            len = 3;
            cp = b0 & 0x0Fu;
        } else if ((b0 & 0xF8u) == 0xF0u) {
            len = 4;
            cp = b0 & 0x07u;
        } else {
            out.push_back({cp, i, 1});
            ++i;
            continue;
        }
        if (i + len > n) {
            out.push_back({b0, i, 1});
            ++i;
            continue;
        }
        bool valid = true;
        for (std::size_t k = 1; k < len; ++k) {
            const auto bk = static_cast<unsigned char>(text[i + k]);
            if ((bk & 0xC0u) != 0x80u) {
                valid = false;
                break;
            }
            cp = (cp << 6) | (bk & 0x3Fu);
        }
        if (!valid) {
            out.push_back({b0, i, 1});
            ++i;
            continue;
        }
        out.push_back({cp, i, len});
        i += len;
    }
    return out;
}

bool is_space(char32_t c) {
    switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x00A0: case 0x2028: case 0x2029: case 0x202F: case 0x205F:
    case 0x3000:
        return true;
    default:
        return c >= 0x2000 && c <= 0x200A;
    }
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

bool is_hyphen(char32_t c) { return c == U'-' || c == 0x2010 || c == 0x2011; }

bool is_letter(char32_t c) {
    if (c < 0x80) {
        return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
    }
    if (is_space(c) || is_apostrophe(c) || is_hyphen(c)) {
        return false;
    }
    switch (c) {
    case 0x2018: case 0x201A: case 0x201B: case 0x201C: case 0x201D:
    case 0x201E: case 0x201F: case 0x2026: case 0x00AB: case 0x00BB:
    case 0x00B7: case 0x2022:
        return false;
    default:
        return !(c >= 0x2012 && c <= 0x2015);
    }
}

std::vector<std::string> split_hyphen_parts(std::string_view token) {
    std::vector<std::string> parts;
    std::string cur;
    for (const auto& cp : decode_utf8(token)) {
        if (is_hyphen(cp.value)) {
            if (!cur.empty()) {
                parts.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.append(token.substr(cp.offset, cp.length));
        }
    }
    if (!cur.empty()) {
        parts.push_back(std::move(cur));
    }
    return parts;
}

bool has_word_char(std::string_view text) {
    for (const auto& cp : decode_utf8(text)) {
        if (is_alnum(cp.value)) {
            return true;
        }
    }
    return false;
}

} // namespace newsroom::metrics::detail
