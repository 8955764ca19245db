#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "newsroom/extraction.hpp"

using namespace newsroom::extraction;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(NEWSROOM_TEST_DATA_DIR) + "/protocol/" + name);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("extract_section basics") {
    CHECK(extract_section("## Article\nHello", "Article") == "Hello");
    CHECK_THROWS_AS(extract_section("## Other\nX", "Article"), SectionNotFound);
    CHECK(extract_section("### Extraction\nA\n### Explanation\nB",
                          "Extraction") == "A");
    CHECK(extract_section("### Extraction\nA\n### Explanation\nB",
                          "Explanation") == "B");
}

TEST_CASE("extract_section heading matching is depth- and case-insensitive") {
    CHECK(extract_section("# article\nbody text", "Article") == "body text");
    CHECK(extract_section("#### ARTICLE ####\nbody", "Article") == "body");
    // deeper headings stay inside the section
    CHECK(extract_section("## Article\nintro\n### Detail\nmore\n## Next\nno",
                          "Article") == "intro\n### Detail\nmore");
    // exact-case heading wins over a case-variant occurring earlier
    const std::string both = "## ARTICLE\nupper\n## Article\nexact";
    CHECK(extract_section(both, "Article") == "exact");
}

TEST_CASE("extract_section preserves interior bytes and trims the edges") {
    const std::string raw = "## Article\n\n  two  spaces kept \nline2\n";
    CHECK(extract_section(raw, "Article") == "two  spaces kept \nline2");
    CHECK_THROWS_AS(extract_section("## Article\n\n\n## Next\nX", "Article"),
                    EmptySection);
}

TEST_CASE("numbered item splitting") {
    const auto items = split_numbered_items("1. first\n2. second\ncontinues\n3. third");
    REQUIRE(items.size() == 3);
    CHECK(items[0] == "first");
    CHECK(items[1] == "second\ncontinues");
    CHECK(items[2] == "third");
    CHECK(split_numbered_items("no markers at all").empty());
    CHECK(split_numbered_items("12. item with 3.5 inside").size() == 1);
}

TEST_CASE("parse_notes on the bundled case-study fixtures") {
    const auto n1 = parse_notes(fixture("reader_notes_1.md"));
    CHECK(n1.extraction_items.size() == 4);
    CHECK(n1.explanation_items.size() == 4);

    const auto n2 = parse_notes(fixture("reader_notes_2.md"));
    CHECK(n2.explanation_items.size() == 4);

    const auto n3 = parse_notes(fixture("reader_notes_3.md"));
    CHECK(n3.extraction_items.size() == 5);
    REQUIRE(n3.explanation_items.size() == 5);
    CHECK(n3.explanation_items[0].rfind("Smartphone: A device", 0) == 0);
}

TEST_CASE("parse_notes failure modes") {
    CHECK_THROWS_AS(parse_notes("### Extraction\n1. a\nno explanation here"),
                    SectionNotFound);
    CHECK_THROWS_AS(parse_notes("### Extraction\nplain\n### Explanation\n1. x"),
                    EmptyItems);
}

TEST_CASE("parse_feedback on the bundled case-study fixtures") {
    const auto f1 = parse_feedback(fixture("editor_feedback_1.md"));
    REQUIRE(f1.advice_items.size() == 4);
    CHECK(f1.advice_items[0] == "Simplify technical terms");
    CHECK(f1.advice_items[1] == "Break down processes");
    CHECK(f1.advice_items[2] == "Emphasize benefits");
    CHECK(f1.advice_items[3] == "Conclusion statement");
    CHECK(!f1.accuracy_eval.empty());
    CHECK(!f1.complexity_eval.empty());
    CHECK(!f1.conveyance_eval.empty());

    CHECK(parse_feedback(fixture("editor_feedback_2.md")).advice_items.size() == 4);
    CHECK(parse_feedback(fixture("editor_feedback_3.md")).advice_items.size() == 5);
}

TEST_CASE("parse_feedback leniency and failure modes") {
    CHECK_THROWS_AS(parse_feedback("## Advice\nno numbered lines"), EmptyAdvice);
    CHECK_THROWS_AS(parse_feedback("## Evaluation for reader's notes\n- x: y"),
                    SectionNotFound);
    // evaluation bullets absent, advice intact
    const auto lenient = parse_feedback("## Advice\n1. keep it short\n2. define terms");
    CHECK(lenient.advice_items.size() == 2);
    CHECK(lenient.accuracy_eval.empty());
    CHECK(lenient.complexity_eval.empty());
    CHECK(lenient.conveyance_eval.empty());
}

TEST_CASE("protocol round-trip is field-equal") {
    for (const char* name : {"reader_notes_1.md", "reader_notes_2.md",
                             "reader_notes_3.md"}) {
        const auto parsed = parse_notes(fixture(name));
        const auto reparsed = parse_notes(to_protocol_text(parsed));
        CHECK(parsed.fields_equal(reparsed));
    }
    for (const char* name : {"editor_feedback_1.md", "editor_feedback_2.md",
                             "editor_feedback_3.md"}) {
        const auto parsed = parse_feedback(fixture(name));
        const auto reparsed = parse_feedback(to_protocol_text(parsed));
        CHECK(parsed.fields_equal(reparsed));
    }
}

TEST_CASE("round-trip holds for generated item lists") {
    std::mt19937 rng(23);
    const char* words[] = {"explain", "terms",  "context", "shorter",
                           "sentences", "reader", "notes",  "clearly"};
    for (int round = 0; round < 50; ++round) {
        ReaderNotes notes;
        const auto gen_items = [&](std::vector<std::string>& out) {
            const auto count = 1 + rng() % 5;
            for (std::size_t i = 0; i < count; ++i) {
                std::string item = words[rng() % 8];
                const auto extra = rng() % 6;
                for (std::size_t w = 0; w < extra; ++w) {
                    item += std::string(" ") + words[rng() % 8];
                }
                out.push_back(item);
            }
        };
        gen_items(notes.extraction_items);
        gen_items(notes.explanation_items);
        const auto reparsed = parse_notes(to_protocol_text(notes));
        CHECK(notes.fields_equal(reparsed));

        EditorFeedback fb;
        fb.accuracy_eval = "fine";
        fb.complexity_eval = "plain";
        fb.conveyance_eval = "complete";
        gen_items(fb.advice_items);
        const auto fb2 = parse_feedback(to_protocol_text(fb));
        CHECK(fb.fields_equal(fb2));
    }
}

TEST_CASE("article extraction") {
    const auto a = parse_article("## Article\nBody text here.", 0);
    CHECK(a.body == "Body text here.");
    CHECK(a.iteration == 0);
    const auto r = parse_revised_article(
        "## Improvement\nchose advice 2\n## Revised Article\nNew body.", 3);
    CHECK(r.body == "New body.");
    CHECK(r.iteration == 3);
    CHECK_THROWS_AS(parse_revised_article("## Article\nX", 1), SectionNotFound);
}

TEST_CASE("copy detection") {
    const std::string source =
        "The study reports a smartphone based system for malaria diagnosis "
        "combining a paper test with learning algorithms and secure records. "
        "Field tests in rural areas identified most cases correctly. The "
        "platform shares location tagged results with health networks.";
    CHECK(detect_copy(source, source));
    CHECK_FALSE(detect_copy("Completely different words about gardening herbs.",
                            source));
    // source plus a short appended sentence stays above the threshold
    const std::string appended = source + " Great news too.";
    CHECK(detect_copy(appended, source));
    CHECK(copy_similarity(appended, source) == copy_similarity(source, appended));
}

TEST_CASE("copy similarity is symmetric and reflexive over random texts") {
    std::mt19937 rng(5);
    const char* words[] = {"malaria", "soil",   "data",  "field", "crop",
                           "water",   "record", "phone", "test",  "secure"};
    for (int i = 0; i < 40; ++i) {
        std::string a;
        std::string b;
        const auto make = [&](std::string& out) {
            const auto n = 3 + rng() % 12;
            for (std::size_t k = 0; k < n; ++k) {
                out += std::string(words[rng() % 10]) + " ";
            }
        };
        make(a);
        make(b);
        CHECK(copy_similarity(a, a) == doctest::Approx(1.0));
        CHECK(copy_similarity(a, b) == doctest::Approx(copy_similarity(b, a)));
    }
}
