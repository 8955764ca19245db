#include "newsroom/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_map>

#include "newsroom/text_metrics.hpp"

namespace newsroom::extraction {

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

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        auto line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

struct HeadingLine {
    std::size_t line_index;
    int level;
    std::string text; // trimmed, trailing #s removed
};

std::optional<HeadingLine> parse_heading(std::string_view line,
                                         std::size_t index) {
    std::size_t i = 0;
    while (i < line.size() && i < 3 && line[i] == ' ') {
        ++i;
    }
    std::size_t hashes = 0;
    while (i < line.size() && line[i] == '#') {
        ++i;
        ++hashes;
    }
    if (hashes == 0) {
        return std::nullopt;
    }
    std::string text = trim(line.substr(i));
    // strip a trailing closing run of #
    while (!text.empty() && text.back() == '#') {
        text.pop_back();
    }
    text = trim(text);
    return HeadingLine{index, static_cast<int>(hashes), std::move(text)};
}

} // namespace

std::string extract_section(std::string_view raw, std::string_view heading) {
    if (heading.empty()) {
        throw std::invalid_argument("heading must be nonempty");
    }
    const auto lines = split_lines(raw);
    std::vector<HeadingLine> headings;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (auto h = parse_heading(lines[i], i)) {
            headings.push_back(std::move(*h));
        }
    }
    const std::string wanted = trim(heading);
    const std::string wanted_lower = lower(wanted);
    const HeadingLine* match = nullptr;
    for (const auto& h : headings) { // exact case first
        if (h.text == wanted) {
            match = &h;
            break;
        }
    }
    if (match == nullptr) {
        for (const auto& h : headings) {
            if (lower(h.text) == wanted_lower) {
                match = &h;
                break;
            }
        }
    }
    if (match == nullptr) {
        throw SectionNotFound(wanted);
    }
    std::size_t end_line = lines.size();
    for (const auto& h : headings) {
        if (h.line_index > match->line_index && h.level <= match->level) {
            end_line = h.line_index;
            break;
        }
    }
    std::string body;
    for (std::size_t i = match->line_index + 1; i < end_line; ++i) {
        if (i > match->line_index + 1) {
            body.push_back('\n');
        }
        body.append(lines[i]);
    }
    body = trim(body);
    if (body.empty()) {
        throw EmptySection(wanted);
    }
    return body;
}

std::vector<std::string> split_numbered_items(std::string_view text) {
    std::vector<std::string> items;
    std::string current;
    bool in_item = false;
    for (const auto line : split_lines(text)) {
        std::size_t i = 0;
        while (i < line.size() &&
               std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t d = i;
        while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) {
            ++d;
        }
        const bool marker = d > i && d < line.size() && line[d] == '.' &&
                            (d + 1 == line.size() ||
                             std::isspace(static_cast<unsigned char>(line[d + 1])));
        if (marker) {
            if (in_item) {
                items.push_back(trim(current));
            }
            current = std::string(line.substr(d + 1));
            in_item = true;
        } else if (in_item) {
            current.push_back('\n');
            current.append(line);
        }
        // lines before the first marker are ignored
    }
    if (in_item) {
        items.push_back(trim(current));
    }
    items.erase(std::remove_if(items.begin(), items.end(),
                               [](const std::string& s) { return s.empty(); }),
                items.end());
    return items;
}

std::string format_numbered(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += std::to_string(i + 1) + ". " + items[i] + "\n";
    }
    return out;
}

namespace {

std::vector<std::string> section_items(std::string_view raw,
                                       std::string_view heading) {
    std::string body;
    try {
        body = extract_section(raw, heading);
    } catch (const EmptySection&) {
        throw EmptyItems(std::string(heading));
    }
    auto items = split_numbered_items(body);
    if (items.empty()) {
        throw EmptyItems(std::string(heading));
    }
    return items;
}

} // namespace

ReaderNotes parse_notes(std::string_view raw) {
    ReaderNotes notes;
    notes.raw = std::string(raw);
    notes.extraction_items = section_items(raw, kExtractionHeading);
    notes.explanation_items = section_items(raw, kExplanationHeading);
    return notes;
}

EditorFeedback parse_feedback(std::string_view raw) {
    EditorFeedback fb;
    fb.raw = std::string(raw);
    try {
        fb.advice_items = section_items(raw, kAdviceHeading);
    } catch (const EmptyItems&) {
        throw EmptyAdvice();
    }
    // Evaluation bullets are optional: the loop only consumes the advice.
    std::string eval_body;
    try {
        eval_body = extract_section(raw, kEvaluationHeading);
    } catch (const SectionNotFound&) {
        return fb;
    } catch (const EmptySection&) {
        return fb;
    }
    std::string* target = nullptr;
    for (const auto line : split_lines(eval_body)) {
        const std::string t = trim(line);
        if (t.size() >= 2 && (t[0] == '-' || t[0] == '*') && t[1] == ' ') {
            const std::string low = lower(t);
            const auto colon = t.find(':');
            std::string value =
                colon == std::string::npos ? "" : trim(t.substr(colon + 1));
            if (low.find("content accuracy") != std::string::npos) {
                fb.accuracy_eval = value;
                target = &fb.accuracy_eval;
            } else if (low.find("complexity") != std::string::npos ||
                       low.find("lexical") != std::string::npos) {
                fb.complexity_eval = value;
                target = &fb.complexity_eval;
            } else if (low.find("conveyance") != std::string::npos) {
                fb.conveyance_eval = value;
                target = &fb.conveyance_eval;
            } else {
                target = nullptr;
            }
        } else if (target != nullptr && !t.empty()) {
            target->push_back(' ');
            target->append(t);
        }
    }
    return fb;
}

Article parse_article(std::string_view raw, int iteration) {
    return Article{extract_section(raw, kArticleHeading), iteration};
}

Article parse_revised_article(std::string_view raw, int iteration) {
    return Article{extract_section(raw, kRevisedArticleHeading), iteration};
}

std::string to_protocol_text(const ReaderNotes& notes) {
    std::string out = "### ";
    out += kExtractionHeading;
    out += "\n" + format_numbered(notes.extraction_items);
    out += "\n### ";
    out += kExplanationHeading;
    out += "\n" + format_numbered(notes.explanation_items);
    return out;
}

std::string to_protocol_text(const EditorFeedback& feedback) {
    std::string out = "## ";
    out += kEvaluationHeading;
    out += "\n";
    if (!feedback.accuracy_eval.empty()) {
        out += "- Content accuracy of reader's notes: " +
               feedback.accuracy_eval + "\n";
    }
    if (!feedback.complexity_eval.empty()) {
        out += "- Lexical and technical complexity of reader's notes: " +
               feedback.complexity_eval + "\n";
    }
    if (!feedback.conveyance_eval.empty()) {
        out += "- Information conveyance of reader's notes: " +
               feedback.conveyance_eval + "\n";
    }
    out += "\n## ";
    out += kAdviceHeading;
    out += "\n" + format_numbered(feedback.advice_items);
    return out;
}

double copy_similarity(std::string_view candidate, std::string_view source) {
    std::vector<std::string> a;
    std::vector<std::string> b;
    try {
        a = metrics::tokenize_words(candidate);
        b = metrics::tokenize_words(source);
    } catch (const metrics::EmptyText&) {
        return 0.0;
    }
    std::unordered_map<std::string, long> counts;
    for (auto& t : a) {
        ++counts[lower(t)];
    }
    long shared = 0;
    for (auto& t : b) {
        auto it = counts.find(lower(t));
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++shared;
        }
    }
    const auto smaller = static_cast<double>(std::min(a.size(), b.size()));
    return smaller == 0 ? 0.0 : static_cast<double>(shared) / smaller;
}

bool detect_copy(std::string_view candidate, std::string_view source,
                 double threshold) {
    return copy_similarity(candidate, source) >= threshold;
}

} // namespace newsroom::extraction
