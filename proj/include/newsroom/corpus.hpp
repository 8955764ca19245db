#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "newsroom/errors.hpp"

namespace newsroom::corpus {

struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("ParseError",
                "line " + std::to_string(line) + ": " + what),
          line(line) {}
    std::size_t line;
};
struct MissingField : Error {
    MissingField(std::size_t line, const std::string& key)
        : Error("MissingField", "line " + std::to_string(line) +
                                    ": missing or empty key '" + key + "'"),
          line(line), key(key) {}
    std::size_t line;
    std::string key;
};
struct BadRatios : Error {
    explicit BadRatios(const std::string& msg) : Error("BadRatios", msg) {}
};
struct EmptyCorpus : Error {
    EmptyCorpus() : Error("EmptyCorpus", "corpus contains no papers") {}
};

enum class Dataset { scitech, elife, plos, custom };

std::string dataset_name(Dataset d);
Dataset dataset_from_name(const std::string& name);

struct Paper {
    std::string id;
    std::string abstract; // the pipeline input
    std::optional<std::string> summary; // human reference, when available
    Dataset source = Dataset::custom;

    bool operator==(const Paper&) const = default;
};

// One JSON object per line with keys `id`, `abstract`, optional `summary`
// and optional `dataset`. Blank lines are skipped.
std::vector<Paper> load_jsonl(const std::filesystem::path& path);

struct SplitRatios {
    double train = 0.9;
    double validation = 0.05;
    double test = 0.05;
};

struct CorpusSplit {
    std::vector<Paper> train;
    std::vector<Paper> validation;
    std::vector<Paper> test;
};

// Deterministic Fisher-Yates shuffle under `seed`; validation and test take
// their rounded shares, the remainder goes to train.
CorpusSplit split_corpus(std::vector<Paper> papers, const SplitRatios& ratios,
                         std::uint64_t seed);

// Fixed published split: listed ids form the test set, the rest stays in
// train (validation is left empty).
CorpusSplit split_with_manifest(std::vector<Paper> papers,
                                const std::set<std::string>& test_ids);

// One id per line; '#' comments and blank lines ignored.
std::set<std::string> load_split_manifest(const std::filesystem::path& path);

struct CorpusStats {
    std::size_t pair_count = 0;
    double avg_words_ori = 0.0;
    double avg_sentences_ori = 0.0;
    std::optional<double> avg_words_pln;     // only when summaries exist
    std::optional<double> avg_sentences_pln;
};

// Averages use the text_metrics tokenizer and sentence rule.
CorpusStats corpus_stats(std::span<const Paper> papers);

} // namespace newsroom::corpus
