#include "newsroom/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

namespace newsroom::evaluator {

MethodResult evaluate_articles(const std::string& method_name,
                               std::span<const ArticleForEval> articles,
                               const metrics::Lexicon& lexicon) {
    if (articles.empty()) {
        throw Error("EmptyInput", "no articles to evaluate for " + method_name);
    }
    MethodResult result;
    result.method_name = method_name;
    for (const auto& a : articles) {
        try {
            result.per_document.push_back(
                {a.doc_id, a.dataset, metrics::score_all(a.text, lexicon)});
        } catch (const metrics::EmptyText& e) {
            throw metrics::EmptyText("document '" + a.doc_id +
                                     "': " + e.what());
        }
    }
    static constexpr corpus::Dataset kOrder[] = {
        corpus::Dataset::scitech, corpus::Dataset::elife,
        corpus::Dataset::plos, corpus::Dataset::custom};
    std::vector<double> all_cells;
    for (const auto ds : kOrder) {
        DatasetCells cells;
        cells.dataset = ds;
        for (const auto& d : result.per_document) {
            if (d.dataset != ds) {
                continue;
            }
            cells.cli += d.scores.cli;
            cells.fkgl += d.scores.fkgl;
            cells.dcrs += d.scores.dcrs;
            ++cells.documents;
        }
        if (cells.documents == 0) {
            continue;
        }
        const auto n = static_cast<double>(cells.documents);
        cells.cli /= n;
        cells.fkgl /= n;
        cells.dcrs /= n;
        all_cells.insert(all_cells.end(), {cells.cli, cells.fkgl, cells.dcrs});
        result.cells.push_back(cells);
    }
    result.avg = average_of_cells(all_cells);
    return result;
}

double average_of_cells(std::span<const double> cells) {
    if (cells.empty()) {
        throw Error("EmptyInput", "no cells to average");
    }
    double sum = 0;
    for (const double c : cells) {
        sum += c;
    }
    return sum / static_cast<double>(cells.size());
}

double improvement_pct(double method_avg, double reference_avg) {
    if (method_avg <= 0.0) {
        throw NonPositiveAverage(method_avg);
    }
    return 100.0 * (method_avg - reference_avg) / method_avg;
}

namespace {

// ---- Student-t tail via the regularized incomplete beta function

double ln_gamma(double x) {
    static const double cof[6] = {76.18009172947146,    -86.50532032941677,
                                  24.01409824083091,    -1.231739572450155,
                                  0.1208650973866179e-2, -0.5395239384953e-5};
    double y = x;
    double tmp = x + 5.5;
    tmp -= (x + 0.5) * std::log(tmp);
    double ser = 1.000000000190015;
    for (const double c : cof) {
        ser += c / ++y;
    }
    return -tmp + std::log(2.5066282746310005 * ser / x);
}

double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3.0e-12;
    constexpr double kFpMin = 1.0e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) {
        d = kFpMin;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) +
                               a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * betacf(a, b, x) / a;
    }
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

double paired_t_test(const std::vector<double>& diffs) {
    const auto n = static_cast<double>(diffs.size());
    double mean = 0;
    for (const double d : diffs) {
        mean += d;
    }
    mean /= n;
    double var = 0;
    for (const double d : diffs) {
        var += (d - mean) * (d - mean);
    }
    var /= (n - 1.0);
    if (var == 0.0) {
        return mean == 0.0 ? 1.0 : 0.0;
    }
    const double t = mean / std::sqrt(var / n);
    const double df = n - 1.0;
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double bootstrap_p(const std::vector<double>& sorted_diffs, int resamples,
                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = sorted_diffs.size();
    long le = 0;
    long ge = 0;
    for (int b = 0; b < resamples; ++b) {
        double sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += sorted_diffs[rng() % n];
        }
        if (sum <= 0) ++le;
        if (sum >= 0) ++ge;
    }
    const double lo = static_cast<double>(std::min(le, ge));
    const double p = 2.0 * (lo + 1.0) / (static_cast<double>(resamples) + 1.0);
    return std::min(p, 1.0);
}

} // namespace

double paired_significance(std::span<const double> a,
                           std::span<const double> b,
                           const SignificanceOptions& options) {
    if (a.size() != b.size()) {
        throw LengthMismatch(a.size(), b.size());
    }
    if (a.size() < 2) {
        throw TooFewPairs(a.size());
    }
    std::vector<double> diffs(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        diffs[i] = a[i] - b[i];
    }
    // order-invariant: the resampling only sees the difference distribution
    std::sort(diffs.begin(), diffs.end());
    if (options.use_t_test) {
        return paired_t_test(diffs);
    }
    return bootstrap_p(diffs, options.resamples, options.seed);
}

void attach_reference_columns(std::vector<MethodResult>& methods,
                              const std::string& reference_name,
                              const SignificanceOptions& options) {
    const auto ref = std::find_if(
        methods.begin(), methods.end(), [&](const MethodResult& m) {
            return m.method_name == reference_name;
        });
    if (ref == methods.end()) {
        throw Error("ConfigError",
                    "reference method not found: " + reference_name);
    }
    std::map<std::string, double> ref_doc_means;
    for (const auto& d : ref->per_document) {
        ref_doc_means[d.doc_id] =
            (d.scores.cli + d.scores.fkgl + d.scores.dcrs) / 3.0;
    }
    for (auto& m : methods) {
        if (m.method_name == reference_name) {
            m.impr_vs_reference = 0.0;
            continue;
        }
        m.impr_vs_reference = improvement_pct(m.avg, ref->avg);
        std::vector<double> mine;
        std::vector<double> theirs;
        for (const auto& d : m.per_document) {
            const auto it = ref_doc_means.find(d.doc_id);
            if (it == ref_doc_means.end()) {
                continue;
            }
            mine.push_back((d.scores.cli + d.scores.fkgl + d.scores.dcrs) / 3.0);
            theirs.push_back(it->second);
        }
        if (mine.size() >= 2 && mine.size() == m.per_document.size() &&
            mine.size() == ref->per_document.size()) {
            m.p_value = paired_significance(mine, theirs, options);
        }
    }
}

TrendTable trend_table(std::span<const pipeline::IterationTrace> traces,
                       const metrics::Lexicon& lexicon) {
    if (traces.empty()) {
        throw Error("EmptyInput", "no traces for trend table");
    }
    const int n = traces.front().iterations;
    for (const auto& t : traces) {
        if (t.iterations != n) {
            throw RaggedTraces(n, t.iterations);
        }
        if (static_cast<int>(t.articles.size()) != n + 1) {
            throw RaggedTraces(n, static_cast<int>(t.articles.size()) - 1);
        }
    }
    TrendTable table;
    table.iterations = n;
    for (int k = 0; k <= n; ++k) {
        TrendRow row;
        row.iteration = k;
        row.label = k == 0 ? "initial writing" : "revision " + std::to_string(k);
        for (const auto& t : traces) {
            const auto s =
                metrics::score_all(t.articles[static_cast<std::size_t>(k)].body,
                                   lexicon);
            row.cli += s.cli;
            row.fkgl += s.fkgl;
            row.dcrs += s.dcrs;
            ++row.documents;
        }
        const auto docs = static_cast<double>(row.documents);
        row.cli /= docs;
        row.fkgl /= docs;
        row.dcrs /= docs;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string trend_csv(const TrendTable& table) {
    std::ostringstream out;
    out << "iteration,label,cli,fkgl,dcrs,documents\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& r : table.rows) {
        out << r.iteration << "," << r.label << "," << r.cli << "," << r.fkgl
            << "," << r.dcrs << "," << r.documents << "\n";
    }
    return out.str();
}

namespace {

std::string fmt2(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << v;
    return out.str();
}

std::string significance_marker(const std::optional<double>& p) {
    if (!p.has_value()) {
        return "";
    }
    if (*p < 0.01) {
        return "**";
    }
    if (*p < 0.05) {
        return "*";
    }
    return "";
}

} // namespace

std::string render_results_table(std::span<const MethodResult> methods,
                                 const std::string& reference_name) {
    std::vector<corpus::Dataset> datasets;
    for (const auto& m : methods) {
        for (const auto& c : m.cells) {
            if (std::find(datasets.begin(), datasets.end(), c.dataset) ==
                datasets.end()) {
                datasets.push_back(c.dataset);
            }
        }
    }
    std::ostringstream out;
    out << "| Approach |";
    for (const auto ds : datasets) {
        const auto name = corpus::dataset_name(ds);
        out << " " << name << " CLI | " << name << " FKGL | " << name
            << " DCRS |";
    }
    out << " Avg. | Impr.(%) |\n|---|";
    for (std::size_t i = 0; i < datasets.size() * 3 + 2; ++i) {
        out << "---|";
    }
    out << "\n";
    for (const auto& m : methods) {
        out << "| " << m.method_name << " |";
        for (const auto ds : datasets) {
            const auto it = std::find_if(
                m.cells.begin(), m.cells.end(),
                [&](const DatasetCells& c) { return c.dataset == ds; });
            if (it == m.cells.end()) {
                out << " - | - | - |";
            } else {
                out << " " << fmt2(it->cli) << " | " << fmt2(it->fkgl) << " | "
                    << fmt2(it->dcrs) << " |";
            }
        }
        out << " " << fmt2(m.avg) << " | ";
        if (m.impr_vs_reference.has_value()) {
            out << fmt2(*m.impr_vs_reference) << significance_marker(m.p_value);
        } else {
            out << "-";
        }
        out << " |\n";
    }
    out << "\nReference row: " << reference_name
        << ". Markers: * p<0.05, ** p<0.01 (paired against the reference).\n";
    return out.str();
}

nlohmann::json results_json(std::span<const MethodResult> methods,
                            const std::string& reference_name) {
    nlohmann::json out;
    out["reference"] = reference_name;
    out["methods"] = nlohmann::json::array();
    for (const auto& m : methods) {
        nlohmann::json jm;
        jm["name"] = m.method_name;
        jm["avg"] = m.avg;
        if (m.impr_vs_reference.has_value()) {
            jm["improvement_pct"] = *m.impr_vs_reference;
        }
        if (m.p_value.has_value()) {
            jm["p_value"] = *m.p_value;
        }
        jm["cells"] = nlohmann::json::array();
        for (const auto& c : m.cells) {
            jm["cells"].push_back({{"dataset", corpus::dataset_name(c.dataset)},
                                   {"cli", c.cli},
                                   {"fkgl", c.fkgl},
                                   {"dcrs", c.dcrs},
                                   {"documents", c.documents}});
        }
        jm["per_document"] = nlohmann::json::array();
        for (const auto& d : m.per_document) {
            jm["per_document"].push_back(
                {{"id", d.doc_id},
                 {"dataset", corpus::dataset_name(d.dataset)},
                 {"cli", d.scores.cli},
                 {"fkgl", d.scores.fkgl},
                 {"dcrs", d.scores.dcrs},
                 {"sentences", d.scores.stats.sentence_count},
                 {"words", d.scores.stats.word_count},
                 {"letters", d.scores.stats.letter_count},
                 {"syllables", d.scores.stats.syllable_count},
                 {"difficult_words", d.scores.stats.difficult_word_count}});
        }
        out["methods"].push_back(std::move(jm));
    }
    return out;
}

} // namespace newsroom::evaluator
