#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsroom/corpus.hpp"
#include "newsroom/errors.hpp"
#include "newsroom/pipeline.hpp"
#include "newsroom/text_metrics.hpp"

namespace newsroom::evaluator {

struct NonPositiveAverage : Error {
    explicit NonPositiveAverage(double v)
        : Error("NonPositiveAverage",
                "method average must be > 0, got " + std::to_string(v)) {}
};
struct LengthMismatch : Error {
    LengthMismatch(std::size_t a, std::size_t b)
        : Error("LengthMismatch", "paired vectors differ in length: " +
                                      std::to_string(a) + " vs " +
                                      std::to_string(b)) {}
};
struct TooFewPairs : Error {
    explicit TooFewPairs(std::size_t n)
        : Error("TooFewPairs",
                "need at least 2 aligned pairs, got " + std::to_string(n)) {}
};
struct RaggedTraces : Error {
    RaggedTraces(int a, int b)
        : Error("RaggedTraces", "traces disagree on iteration count: " +
                                    std::to_string(a) + " vs " +
                                    std::to_string(b)) {}
};

struct ArticleForEval {
    std::string doc_id;
    corpus::Dataset dataset = corpus::Dataset::custom;
    std::string text;
};

struct DocScore {
    std::string doc_id;
    corpus::Dataset dataset = corpus::Dataset::custom;
    metrics::ReadabilityScores scores;
};

struct DatasetCells {
    corpus::Dataset dataset = corpus::Dataset::custom;
    double cli = 0.0;
    double fkgl = 0.0;
    double dcrs = 0.0;
    std::size_t documents = 0;
};

// One table row: per-document scores, per-dataset metric means, their grand
// mean, and the improvement of the reference over this method.
struct MethodResult {
    std::string method_name;
    std::vector<DocScore> per_document;
    std::vector<DatasetCells> cells; // dataset order: SCITech, eLife, PLOS, custom
    double avg = 0.0;                // mean over all cells present
    std::optional<double> impr_vs_reference; // percent
    std::optional<double> p_value;           // vs reference, when computable
};

MethodResult evaluate_articles(const std::string& method_name,
                               std::span<const ArticleForEval> articles,
                               const metrics::Lexicon& lexicon);

// Mean of the given cell values (the "Avg." column).
double average_of_cells(std::span<const double> cells);

// 100 * (method_avg - reference_avg) / method_avg: how much lower (better)
// the reference is than this method.
double improvement_pct(double method_avg, double reference_avg);

struct SignificanceOptions {
    int resamples = 10'000;
    std::uint64_t seed = 42;
    bool use_t_test = false; // paired two-sided t-test instead of bootstrap

    bool operator==(const SignificanceOptions&) const = default;
};

// Two-sided p-value for the difference between aligned per-document values.
// Default: seeded paired bootstrap over the mean difference; differences
// are sorted first so the value is invariant to document order.
double paired_significance(std::span<const double> a,
                           std::span<const double> b,
                           const SignificanceOptions& options = {});

// Fills impr_vs_reference and, where per-document scores align by id,
// p_value for every method against the named reference row. The paired
// values are each document's mean over the three metrics.
void attach_reference_columns(std::vector<MethodResult>& methods,
                              const std::string& reference_name,
                              const SignificanceOptions& options = {});

struct TrendRow {
    int iteration = 0;
    std::string label; // "initial writing" for iteration 0
    double cli = 0.0;
    double fkgl = 0.0;
    double dcrs = 0.0;
    std::size_t documents = 0;
};

struct TrendTable {
    int iterations = 0; // rows cover 0..iterations
    std::vector<TrendRow> rows;
};

// Per-iteration metric means over all traces' articles.
TrendTable trend_table(std::span<const pipeline::IterationTrace> traces,
                       const metrics::Lexicon& lexicon);

std::string trend_csv(const TrendTable& table);

// Markdown table, one row per method: dataset x metric cells, Avg. and
// Impr.(%) with significance markers (*: p<0.05, **: p<0.01) vs the
// reference row. Two decimals; the JSON report keeps full precision.
std::string render_results_table(std::span<const MethodResult> methods,
                                 const std::string& reference_name);

nlohmann::json results_json(std::span<const MethodResult> methods,
                            const std::string& reference_name);

} // namespace newsroom::evaluator
