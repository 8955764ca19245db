#include "newsroom/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "newsroom/text_metrics.hpp"

namespace newsroom::corpus {

using nlohmann::json;

std::string dataset_name(Dataset d) {
    switch (d) {
    case Dataset::scitech: return "SCITech";
    case Dataset::elife: return "eLife";
    case Dataset::plos: return "PLOS";
    case Dataset::custom: return "custom";
    }
    return "custom";
}

Dataset dataset_from_name(const std::string& name) {
    std::string low;
    for (const char c : name) {
        low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (low == "scitech") return Dataset::scitech;
    if (low == "elife") return Dataset::elife;
    if (low == "plos") return Dataset::plos;
    return Dataset::custom;
}

std::vector<Paper> load_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("FileError", "cannot open corpus file: " + path.string());
    }
    std::vector<Paper> papers;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first =
            std::find_if(line.begin(), line.end(), [](unsigned char c) {
                return !std::isspace(c);
            });
        if (first == line.end()) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!j.is_object()) {
            throw ParseError(line_no, "line is not a JSON object");
        }
        Paper p;
        if (!j.contains("id") || !j["id"].is_string() ||
            j["id"].get<std::string>().empty()) {
            throw MissingField(line_no, "id");
        }
        if (!j.contains("abstract") || !j["abstract"].is_string() ||
            j["abstract"].get<std::string>().empty()) {
            throw MissingField(line_no, "abstract");
        }
        p.id = j["id"].get<std::string>();
        p.abstract = j["abstract"].get<std::string>();
        if (j.contains("summary") && j["summary"].is_string() &&
            !j["summary"].get<std::string>().empty()) {
            p.summary = j["summary"].get<std::string>();
        }
        if (j.contains("dataset") && j["dataset"].is_string()) {
            p.source = dataset_from_name(j["dataset"].get<std::string>());
        }
        papers.push_back(std::move(p));
    }
    return papers;
}

namespace {

// Explicit Fisher-Yates so the membership is stable across platforms and
// standard-library versions.
void deterministic_shuffle(std::vector<Paper>& papers, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = papers.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(papers[i - 1], papers[j]);
    }
}

} // namespace

CorpusSplit split_corpus(std::vector<Paper> papers, const SplitRatios& ratios,
                         std::uint64_t seed) {
    const double sum = ratios.train + ratios.validation + ratios.test;
    if (std::abs(sum - 1.0) > 1e-9 || ratios.train < 0 ||
        ratios.validation < 0 || ratios.test < 0) {
        throw BadRatios("split ratios must be non-negative and sum to 1, got " +
                        std::to_string(sum));
    }
    if (papers.empty()) {
        throw EmptyCorpus();
    }
    deterministic_shuffle(papers, seed);
    const auto n = papers.size();
    auto n_val = static_cast<std::size_t>(
        std::llround(ratios.validation * static_cast<double>(n)));
    auto n_test = static_cast<std::size_t>(
        std::llround(ratios.test * static_cast<double>(n)));
    if (n_val + n_test > n) { // rounding overflow on tiny corpora
        n_test = n - std::min(n_val, n);
    }
    const std::size_t n_train = n - n_val - n_test;

    CorpusSplit split;
    split.train.assign(papers.begin(), papers.begin() + n_train);
    split.validation.assign(papers.begin() + n_train,
                            papers.begin() + n_train + n_val);
    split.test.assign(papers.begin() + n_train + n_val, papers.end());
    return split;
}

CorpusSplit split_with_manifest(std::vector<Paper> papers,
                                const std::set<std::string>& test_ids) {
    if (papers.empty()) {
        throw EmptyCorpus();
    }
    CorpusSplit split;
    for (auto& p : papers) {
        if (test_ids.count(p.id) != 0) {
            split.test.push_back(std::move(p));
        } else {
            split.train.push_back(std::move(p));
        }
    }
    return split;
}

std::set<std::string> load_split_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("FileError",
                    "cannot open split manifest: " + path.string());
    }
    std::set<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() &&
               std::isspace(static_cast<unsigned char>(line.back()))) {
            line.pop_back();
        }
        std::size_t b = 0;
        while (b < line.size() &&
               std::isspace(static_cast<unsigned char>(line[b]))) {
            ++b;
        }
        const std::string id = line.substr(b);
        if (!id.empty() && id.front() != '#') {
            ids.insert(id);
        }
    }
    return ids;
}

CorpusStats corpus_stats(std::span<const Paper> papers) {
    if (papers.empty()) {
        throw EmptyCorpus();
    }
    CorpusStats stats;
    stats.pair_count = papers.size();
    double words_ori = 0;
    double sentences_ori = 0;
    double words_pln = 0;
    double sentences_pln = 0;
    std::size_t pln_count = 0;
    for (const auto& p : papers) {
        const auto s = metrics::compute_stats(p.abstract);
        words_ori += static_cast<double>(s.word_count);
        sentences_ori += static_cast<double>(s.sentence_count);
        if (p.summary.has_value()) {
            const auto sp = metrics::compute_stats(*p.summary);
            words_pln += static_cast<double>(sp.word_count);
            sentences_pln += static_cast<double>(sp.sentence_count);
            ++pln_count;
        }
    }
    const auto n = static_cast<double>(papers.size());
    stats.avg_words_ori = words_ori / n;
    stats.avg_sentences_ori = sentences_ori / n;
    if (pln_count > 0) {
        stats.avg_words_pln = words_pln / static_cast<double>(pln_count);
        stats.avg_sentences_pln = sentences_pln / static_cast<double>(pln_count);
    }
    return stats;
}

} // namespace newsroom::corpus
