// newsroom: iterative journalist/reader/editor rewriting of scientific
// abstracts into lay articles, plus readability evaluation and reporting.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "newsroom/agents.hpp"
#include "newsroom/config.hpp"
#include "newsroom/corpus.hpp"
#include "newsroom/evaluator.hpp"
#include "newsroom/extraction.hpp"
#include "newsroom/llm_client.hpp"
#include "newsroom/pipeline.hpp"
#include "newsroom/text_metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace newsroom;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string corpus_path;
    std::string lexicon_path;
    std::string out_dir;
    std::string backend;
    std::string mode;
    std::string dataset;
    int iterations = -1;
    int select = -1;
    int workers = -1;
    long seed = -1;
    bool one_shot = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Config file (JSON)");
    cmd->add_option("--corpus", flags.corpus_path, "Corpus JSONL file");
    cmd->add_option("--lexicon", flags.lexicon_path, "Familiar-word list");
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--backend", flags.backend,
                    "Chat backend: live | mock:<fixture-dir>");
    cmd->add_option("--mode", flags.mode,
                    "full | no-reading | no-suggestions | no-collab");
    cmd->add_option("--dataset", flags.dataset,
                    "Dataset tag for corpus lines without one");
    cmd->add_option("--iterations", flags.iterations, "Revision rounds");
    cmd->add_option("--select", flags.select, "Iteration picked as output");
    cmd->add_option("--workers", flags.workers, "Concurrent documents");
    cmd->add_option("--seed", flags.seed, "Seed for splits/bootstrap/one-shot");
    cmd->add_flag("--one-shot", flags.one_shot,
                  "Inject a demonstration into the first write");
}

config::RunConfig resolve_config(const CommonFlags& flags) {
    config::RunConfig cfg = flags.config_path.empty()
                                ? config::default_config()
                                : config::load_config(flags.config_path);
    if (!flags.corpus_path.empty()) cfg.corpus_path = flags.corpus_path;
    if (!flags.lexicon_path.empty()) cfg.lexicon_path = flags.lexicon_path;
    if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
    if (!flags.backend.empty()) cfg.backend = flags.backend;
    if (!flags.mode.empty()) {
        cfg.pipeline.mode = pipeline::mode_from_name(flags.mode);
    }
    if (!flags.dataset.empty()) cfg.dataset = flags.dataset;
    if (flags.iterations >= 0) cfg.pipeline.iterations = flags.iterations;
    if (flags.select >= 0) cfg.pipeline.select_iteration = flags.select;
    if (flags.workers >= 1) cfg.workers = flags.workers;
    if (flags.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(flags.seed);
        cfg.significance.seed = cfg.seed;
    }
    if (flags.one_shot) cfg.one_shot = true;
    if (cfg.pipeline.select_iteration > cfg.pipeline.iterations) {
        cfg.pipeline.select_iteration = cfg.pipeline.iterations;
    }
    return cfg;
}

std::vector<corpus::Paper> load_corpus_for(const config::RunConfig& cfg) {
    if (cfg.corpus_path.empty()) {
        throw config::ConfigError("no corpus given (--corpus or config)");
    }
    auto papers = corpus::load_jsonl(cfg.corpus_path);
    if (papers.empty()) {
        throw corpus::EmptyCorpus();
    }
    const auto tag = corpus::dataset_from_name(cfg.dataset);
    for (auto& p : papers) {
        if (p.source == corpus::Dataset::custom) {
            p.source = tag;
        }
    }
    return papers;
}

// Seeded demonstration pick: first paper with a reference summary wins a
// deterministic draw among all such papers.
std::optional<std::string> pick_demonstration(
    const std::vector<corpus::Paper>& papers, std::uint64_t seed) {
    std::vector<const corpus::Paper*> candidates;
    for (const auto& p : papers) {
        if (p.summary.has_value()) {
            candidates.push_back(&p);
        }
    }
    if (candidates.empty()) {
        return std::nullopt;
    }
    std::mt19937_64 rng(seed);
    const auto& pick = *candidates[rng() % candidates.size()];
    return "Paper summary:\n" + pick.abstract + "\n\nArticle:\n" +
           *pick.summary;
}

void print_warnings(const config::RunConfig& cfg) {
    for (const auto& w : config::lint_config(cfg)) {
        std::cerr << "warning: " << w << "\n";
    }
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("FileError", "cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const fs::path& path, std::string_view text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("FileError", "cannot write file: " + path.string());
    }
    out << text;
}

int run_batch(const config::RunConfig& cfg,
              const std::vector<corpus::Paper>& papers, bool write_report) {
    const auto roles = config::build_role_set(cfg);
    const llm::ChatClient client(config::build_backend(cfg));
    const fs::path out_dir(cfg.output_dir);
    const fs::path trace_dir = out_dir / "traces";
    const fs::path selected_dir = out_dir / "selected";
    fs::create_directories(trace_dir);
    fs::create_directories(selected_dir);

    pipeline::PipelineConfig pcfg = cfg.pipeline;
    if (cfg.one_shot && !pcfg.one_shot.has_value()) {
        pcfg.one_shot = pick_demonstration(papers, cfg.seed);
    }

    const auto batch = pipeline::run_corpus(
        papers, pcfg, roles, client, cfg.workers,
        [](const pipeline::DocumentOutcome& o) {
            if (o.failure.has_value()) {
                std::cerr << "failed  " << o.doc_id << ": "
                          << o.failure->message << "\n";
            } else {
                std::cerr << "done    " << o.doc_id << "\n";
            }
        });

    json report;
    report["mode"] = pipeline::mode_name(pcfg.mode);
    report["iterations"] = pcfg.iterations;
    report["select_iteration"] = pcfg.select_iteration;
    report["documents"] = json::array();
    for (const auto& o : batch.outcomes) {
        json doc;
        doc["id"] = o.doc_id;
        if (o.trace.has_value()) {
            const auto trace_file = trace_dir / (o.doc_id + ".trace.jsonl");
            pipeline::write_trace(*o.trace, trace_file);
            const auto& article =
                pipeline::select_output(*o.trace, pcfg.select_iteration);
            write_text(selected_dir / (o.doc_id + ".md"), article.body);
            doc["status"] = "ok";
            doc["trace"] = trace_file.string();
        } else {
            doc["status"] = "failed";
            doc["step"] = o.failure->step;
            doc["iteration"] = o.failure->iteration;
            doc["error_kind"] = o.failure->kind;
            doc["error"] = o.failure->message;
        }
        report["documents"].push_back(std::move(doc));
    }
    if (write_report) {
        write_text(out_dir / "run_report.json", report.dump(1) + "\n");
    }
    const auto failures = batch.failures();
    std::cout << "completed " << batch.traces().size() << "/" << papers.size()
              << " documents";
    if (!failures.empty()) {
        std::cout << " (" << failures.size() << " failed)";
    }
    std::cout << "; outputs under " << out_dir.string() << "\n";
    return failures.empty() ? 0 : 1;
}

int cmd_run(const CommonFlags& flags, bool dry_run, bool print_config) {
    config::RunConfig cfg = resolve_config(flags);
    if (print_config) {
        std::cout << config::config_to_json(cfg).dump(1) << "\n";
        return 0;
    }
    config::validate_config(cfg);
    print_warnings(cfg);
    const auto papers = load_corpus_for(cfg);
    if (dry_run) {
        // render every iteration-0 prompt without touching the network
        const auto roles = config::build_role_set(cfg);
        std::optional<std::string> demo;
        if (cfg.one_shot) {
            demo = pick_demonstration(papers, cfg.seed);
        }
        for (const auto& p : papers) {
            agents::RoleContext ctx;
            ctx.paper_abstract = p.abstract;
            ctx.demonstration = demo;
            const auto messages = agents::render_messages(roles.journalist, ctx);
            std::cout << "=== " << p.id << " (journalist, iteration 0)\n";
            for (const auto& m : messages) {
                std::cout << "--- " << llm::role_name(m.role) << "\n"
                          << m.content << "\n";
            }
        }
        std::cout << "dry run: config valid, " << papers.size()
                  << " documents, no requests sent\n";
        return 0;
    }
    return run_batch(cfg, papers, /*write_report=*/true);
}

int cmd_metrics(const CommonFlags& flags, const std::string& text_file) {
    config::RunConfig cfg = resolve_config(flags);
    const auto lexicon = metrics::Lexicon::load_file(cfg.lexicon_path);
    const std::string text = slurp(text_file);
    const auto s = metrics::score_all(text, lexicon);
    json out = {
        {"cli", s.cli},
        {"fkgl", s.fkgl},
        {"dcrs", s.dcrs},
        {"sentences", s.stats.sentence_count},
        {"words", s.stats.word_count},
        {"letters", s.stats.letter_count},
        {"syllables", s.stats.syllable_count},
        {"difficult_words", s.stats.difficult_word_count},
    };
    std::cout << out.dump(1) << "\n";
    return 0;
}

int cmd_stats(const CommonFlags& flags) {
    config::RunConfig cfg = resolve_config(flags);
    const auto papers = load_corpus_for(cfg);
    const auto stats = corpus::corpus_stats(papers);
    json out = {
        {"pairs", stats.pair_count},
        {"avg_words_ori", stats.avg_words_ori},
        {"avg_sentences_ori", stats.avg_sentences_ori},
    };
    if (stats.avg_words_pln.has_value()) {
        out["avg_words_pln"] = *stats.avg_words_pln;
        out["avg_sentences_pln"] = *stats.avg_sentences_pln;
    }
    std::cout << out.dump(1) << "\n";
    return 0;
}

int cmd_split(const CommonFlags& flags) {
    config::RunConfig cfg = resolve_config(flags);
    const auto papers = load_corpus_for(cfg);
    corpus::CorpusSplit split;
    if (cfg.split_manifest.has_value()) {
        split = corpus::split_with_manifest(
            papers, corpus::load_split_manifest(*cfg.split_manifest));
    } else {
        split = corpus::split_corpus(papers, {}, cfg.seed);
    }
    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    const auto dump = [&](const char* name,
                          const std::vector<corpus::Paper>& part) {
        std::ofstream out(out_dir / (std::string(name) + ".jsonl"));
        for (const auto& p : part) {
            json line = {{"id", p.id}, {"abstract", p.abstract}};
            if (p.summary.has_value()) {
                line["summary"] = *p.summary;
            }
            line["dataset"] = corpus::dataset_name(p.source);
            out << line.dump() << "\n";
        }
    };
    dump("train", split.train);
    dump("validation", split.validation);
    dump("test", split.test);
    std::cout << "train " << split.train.size() << " / validation "
              << split.validation.size() << " / test " << split.test.size()
              << " under " << out_dir.string() << "\n";
    return 0;
}

int cmd_evaluate(const CommonFlags& flags,
                 const std::vector<std::string>& article_sets,
                 const std::string& reference) {
    config::RunConfig cfg = resolve_config(flags);
    const auto lexicon = metrics::Lexicon::load_file(cfg.lexicon_path);
    std::map<std::string, corpus::Dataset> dataset_by_id;
    if (!cfg.corpus_path.empty()) {
        for (const auto& p : load_corpus_for(cfg)) {
            dataset_by_id[p.id] = p.source;
        }
    }
    std::vector<evaluator::MethodResult> methods;
    for (const auto& spec : article_sets) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
            throw config::ConfigError(
                "--articles expects name=<dir>, got '" + spec + "'");
        }
        const std::string name = spec.substr(0, eq);
        const fs::path dir = spec.substr(eq + 1);
        std::vector<evaluator::ArticleForEval> articles;
        if (!fs::is_directory(dir)) {
            throw config::ConfigError("article directory not found: " +
                                      dir.string());
        }
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) {
                continue;
            }
            const auto ext = entry.path().extension();
            if (ext != ".md" && ext != ".txt") {
                continue;
            }
            const std::string id = entry.path().stem().string();
            const auto ds = dataset_by_id.count(id) != 0
                                ? dataset_by_id[id]
                                : corpus::dataset_from_name(cfg.dataset);
            articles.push_back({id, ds, slurp(entry.path())});
        }
        std::sort(articles.begin(), articles.end(),
                  [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
        methods.push_back(evaluator::evaluate_articles(name, articles, lexicon));
    }
    if (methods.empty()) {
        throw config::ConfigError("no --articles sets given");
    }
    const std::string ref =
        reference.empty() ? methods.front().method_name : reference;
    evaluator::attach_reference_columns(methods, ref, cfg.significance);
    const fs::path out_dir(cfg.output_dir);
    write_text(out_dir / "results_table.md",
               evaluator::render_results_table(methods, ref));
    write_text(out_dir / "results.json",
               evaluator::results_json(methods, ref).dump(1) + "\n");
    std::cout << evaluator::render_results_table(methods, ref);
    std::cout << "reports under " << out_dir.string() << "\n";
    return 0;
}

int cmd_trend(const CommonFlags& flags, const std::string& traces_dir) {
    config::RunConfig cfg = resolve_config(flags);
    const auto lexicon = metrics::Lexicon::load_file(cfg.lexicon_path);
    std::vector<pipeline::IterationTrace> traces;
    const fs::path dir = traces_dir.empty()
                             ? fs::path(cfg.output_dir) / "traces"
                             : fs::path(traces_dir);
    if (!fs::is_directory(dir)) {
        throw config::ConfigError("trace directory not found: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().string().ends_with(".trace.jsonl")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        traces.push_back(pipeline::read_trace(f));
    }
    const auto table = evaluator::trend_table(traces, lexicon);
    const std::string csv = evaluator::trend_csv(table);
    write_text(fs::path(cfg.output_dir) / "trend.csv", csv);
    std::cout << csv;
    return 0;
}

int cmd_ablate(const CommonFlags& flags) {
    config::RunConfig cfg = resolve_config(flags);
    config::validate_config(cfg);
    print_warnings(cfg);
    const auto papers = load_corpus_for(cfg);
    const auto lexicon = metrics::Lexicon::load_file(cfg.lexicon_path);
    const fs::path base_out(cfg.output_dir);

    std::vector<evaluator::MethodResult> methods;
    int exit_code = 0;
    for (const auto mode :
         {pipeline::Mode::full, pipeline::Mode::no_reading,
          pipeline::Mode::no_suggestions, pipeline::Mode::no_collaboration}) {
        config::RunConfig mode_cfg = cfg;
        mode_cfg.pipeline.mode = mode;
        mode_cfg.output_dir =
            (base_out / ("ablation_" + pipeline::mode_name(mode))).string();
        std::cerr << "== mode " << pipeline::mode_name(mode) << "\n";
        exit_code |= run_batch(mode_cfg, papers, /*write_report=*/true);

        std::vector<evaluator::ArticleForEval> articles;
        const fs::path selected = fs::path(mode_cfg.output_dir) / "selected";
        for (const auto& p : papers) {
            const auto file = selected / (p.id + ".md");
            if (fs::exists(file)) {
                articles.push_back({p.id, p.source, slurp(file)});
            }
        }
        if (!articles.empty()) {
            methods.push_back(evaluator::evaluate_articles(
                pipeline::mode_name(mode), articles, lexicon));
        }
    }
    if (!methods.empty()) {
        evaluator::attach_reference_columns(methods, "full", cfg.significance);
        const std::string table =
            evaluator::render_results_table(methods, "full");
        write_text(base_out / "ablation_table.md", table);
        std::cout << table;
    }
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Iterative journalist/reader/editor rewriting of scientific "
        "abstracts, with readability evaluation"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    bool dry_run = false;
    bool print_cfg = false;
    auto* run = app.add_subcommand(
        "run", "Run the rewrite loop over a corpus, writing traces and "
               "selected articles");
    add_common(run, run_flags);
    run->add_flag("--dry-run", dry_run,
                  "Validate config and render iteration-0 prompts only");
    run->add_flag("--print-config", print_cfg,
                  "Echo the fully-resolved config and exit");

    CommonFlags eval_flags;
    std::vector<std::string> article_sets;
    std::string reference;
    auto* evaluate = app.add_subcommand(
        "evaluate", "Score article sets and emit a comparison report");
    add_common(evaluate, eval_flags);
    evaluate->add_option("--articles", article_sets,
                         "name=<dir of <doc-id>.md files>; repeatable");
    evaluate->add_option("--reference", reference,
                         "Method name the comparison columns refer to");

    CommonFlags ablate_flags;
    auto* ablate = app.add_subcommand(
        "ablate", "Run all four modes over one corpus and compare");
    add_common(ablate, ablate_flags);

    CommonFlags trend_flags;
    std::string traces_dir;
    auto* trend = app.add_subcommand(
        "trend", "Per-iteration readability means from stored traces");
    add_common(trend, trend_flags);
    trend->add_option("--traces", traces_dir, "Directory of *.trace.jsonl");

    CommonFlags metrics_flags;
    std::string text_file;
    auto* metrics_cmd = app.add_subcommand(
        "metrics", "Readability scores for one text file");
    add_common(metrics_cmd, metrics_flags);
    metrics_cmd->add_option("file", text_file, "Text file to score")
        ->required();

    CommonFlags stats_flags;
    auto* stats = app.add_subcommand(
        "stats", "Corpus size and average word/sentence counts");
    add_common(stats, stats_flags);

    CommonFlags split_flags;
    auto* split = app.add_subcommand(
        "split", "Write deterministic train/validation/test splits");
    add_common(split, split_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_flags, dry_run, print_cfg);
        if (evaluate->parsed()) {
            return cmd_evaluate(eval_flags, article_sets, reference);
        }
        if (ablate->parsed()) return cmd_ablate(ablate_flags);
        if (trend->parsed()) return cmd_trend(trend_flags, traces_dir);
        if (metrics_cmd->parsed()) return cmd_metrics(metrics_flags, text_file);
        if (stats->parsed()) return cmd_stats(stats_flags);
        if (split->parsed()) return cmd_split(split_flags);
    } catch (const Error& e) {
        json err = {{"error",
                     {{"kind", e.kind()}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err = {{"error",
                     {{"kind", "Unexpected"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 3;
    }
    return 0;
}
