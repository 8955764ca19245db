#include "newsroom/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace newsroom::pipeline {

using nlohmann::json;
namespace ext = newsroom::extraction;

std::string mode_name(Mode mode) {
    switch (mode) {
    case Mode::full: return "full";
    case Mode::no_reading: return "no-reading";
    case Mode::no_suggestions: return "no-suggestions";
    case Mode::no_collaboration: return "no-collab";
    }
    return "full";
}

Mode mode_from_name(const std::string& name) {
    if (name == "full") return Mode::full;
    if (name == "no-reading" || name == "no_reading") return Mode::no_reading;
    if (name == "no-suggestions" || name == "no_suggestions") {
        return Mode::no_suggestions;
    }
    if (name == "no-collab" || name == "no-collaboration" ||
        name == "no_collaboration") {
        return Mode::no_collaboration;
    }
    throw Error("ConfigError", "unknown pipeline mode: " + name);
}

RoleSet make_role_set(const llm::EndpointConfig& endpoint,
                      const llm::SamplingParams& params,
                      const std::filesystem::path& prompts_dir) {
    using agents::RoleKind;
    return RoleSet{
        agents::make_role(RoleKind::journalist, endpoint, params, prompts_dir),
        agents::make_role(RoleKind::reader, endpoint, params, prompts_dir),
        agents::make_role(RoleKind::editor, endpoint, params, prompts_dir),
        agents::make_role(RoleKind::revision, endpoint, params, prompts_dir),
    };
}

namespace {

struct CopyDetected : Error {
    explicit CopyDetected(double similarity)
        : Error("CopyDetected",
                "revision copies its input (similarity " +
                    std::to_string(similarity) + ")") {}
};

class DocumentRun {
public:
    DocumentRun(const corpus::Paper& paper, const PipelineConfig& cfg,
                const RoleSet& roles, const llm::ChatClient& client)
        : paper_(paper), cfg_(cfg), roles_(roles), client_(client),
          trace_(std::make_shared<IterationTrace>()) {
        trace_->paper = paper;
        trace_->mode = cfg.mode;
        trace_->iterations = cfg.iterations;
        trace_->select_iteration = cfg.select_iteration;
    }

    IterationTrace run() {
        initial_write();
        for (int i = 1; i <= cfg_.iterations; ++i) {
            iterate(i);
        }
        return std::move(*trace_);
    }

private:
    // One agent step: invoke, record the raw transcript, parse. Protocol
    // failures and copy-detection re-invoke with the identical messages up
    // to max_agent_retries; transport-level errors fail the step at once
    // (the client has already retried them).
    template <typename Parse>
    auto step(const std::string& name, int iteration,
              const agents::AgentRole& role, const agents::RoleContext& ctx,
              Parse&& parse) {
        StepRecord rec;
        rec.step = name;
        rec.iteration = iteration;
        const auto started = std::chrono::steady_clock::now();
        const auto finish = [&] {
            rec.duration_ms =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - started)
                    .count();
            trace_->steps.push_back(rec);
        };
        std::string last_kind = "AgentFailure";
        std::string last_message = "no attempts made";
        for (int attempt = 0; attempt <= cfg_.max_agent_retries; ++attempt) {
            rec.attempts = attempt + 1;
            std::string raw;
            try {
                raw = agents::invoke_role(
                    client_, role, ctx,
                    llm::CallTag{paper_.id, name, iteration, attempt});
            } catch (const Error& e) {
                finish();
                throw AgentFailure(name, iteration, e.kind(), e.what(), trace_);
            }
            rec.raw_attempts.push_back(raw);
            try {
                auto parsed = parse(raw);
                finish();
                return parsed;
            } catch (const Error& e) {
                last_kind = e.kind();
                last_message = e.what();
            }
        }
        finish();
        throw AgentFailure(name, iteration, last_kind, last_message, trace_);
    }

    void initial_write() {
        agents::RoleContext ctx;
        ctx.paper_abstract = paper_.abstract;
        ctx.demonstration = cfg_.one_shot;
        trace_->articles.push_back(step(
            "journalist", 0, roles_.journalist, ctx,
            [&](const std::string& raw) { return ext::parse_article(raw, 0); }));
    }

    void iterate(int i) {
        const std::string& previous = trace_->articles.back().body;
        std::optional<std::string> advice_text;

        if (cfg_.mode == Mode::full || cfg_.mode == Mode::no_suggestions) {
            agents::RoleContext ctx;
            ctx.article = previous;
            trace_->notes.push_back(
                step("reader", i, roles_.reader, ctx,
                     [](const std::string& raw) { return ext::parse_notes(raw); }));
        }

        if (cfg_.mode == Mode::full) {
            agents::RoleContext ctx;
            ctx.paper_abstract = paper_.abstract;
            ctx.article = previous;
            ctx.notes = trace_->notes.back().raw;
            trace_->feedback.push_back(step(
                "editor", i, roles_.editor, ctx, [](const std::string& raw) {
                    return ext::parse_feedback(raw);
                }));
            advice_text = ext::format_numbered(trace_->feedback.back().advice_items);
        } else if (cfg_.mode == Mode::no_reading) {
            // the editor advises from the abstract and article alone
            agents::RoleContext ctx;
            ctx.paper_abstract = paper_.abstract;
            ctx.article = previous;
            const auto editor = agents::without_field(
                roles_.editor, agents::ContextField::notes);
            trace_->feedback.push_back(step(
                "editor", i, editor, ctx, [](const std::string& raw) {
                    return ext::parse_feedback(raw);
                }));
            advice_text = ext::format_numbered(trace_->feedback.back().advice_items);
        } else if (cfg_.mode == Mode::no_suggestions) {
            // the reader's explanations stand in for editor advice
            advice_text =
                ext::format_numbered(trace_->notes.back().explanation_items);
        }

        agents::RoleContext ctx;
        ctx.paper_abstract = paper_.abstract;
        ctx.article = previous;
        ctx.advice = advice_text;
        const auto role = cfg_.mode == Mode::no_collaboration
                              ? agents::without_field(
                                    roles_.revision, agents::ContextField::advice)
                              : roles_.revision;
        trace_->articles.push_back(
            step("revision", i, role, ctx, [&](const std::string& raw) {
                auto article = ext::parse_revised_article(raw, i);
                const double sim =
                    ext::copy_similarity(article.body, paper_.abstract);
                if (sim >= cfg_.copy_threshold) {
                    throw CopyDetected(sim);
                }
                return article;
            }));
    }

    const corpus::Paper& paper_;
    const PipelineConfig& cfg_;
    const RoleSet& roles_;
    const llm::ChatClient& client_;
    std::shared_ptr<IterationTrace> trace_;
};

} // namespace

IterationTrace run_document(const corpus::Paper& paper,
                            const PipelineConfig& cfg, const RoleSet& roles,
                            const llm::ChatClient& client) {
    if (cfg.iterations < 0) {
        throw Error("ConfigError", "iterations must be >= 0");
    }
    if (cfg.select_iteration < 0 || cfg.select_iteration > cfg.iterations) {
        throw Error("ConfigError",
                    "select_iteration must lie in [0, iterations]");
    }
    return DocumentRun(paper, cfg, roles, client).run();
}

const extraction::Article& select_output(const IterationTrace& trace, int k) {
    if (k < 0 || k > trace.iterations ||
        k >= static_cast<int>(trace.articles.size())) {
        throw IterationOutOfRange(k, trace.iterations);
    }
    return trace.articles[static_cast<std::size_t>(k)];
}

std::vector<const IterationTrace*> BatchResult::traces() const {
    std::vector<const IterationTrace*> out;
    for (const auto& o : outcomes) {
        if (o.trace.has_value()) {
            out.push_back(&*o.trace);
        }
    }
    return out;
}

std::vector<const FailureRecord*> BatchResult::failures() const {
    std::vector<const FailureRecord*> out;
    for (const auto& o : outcomes) {
        if (o.failure.has_value()) {
            out.push_back(&*o.failure);
        }
    }
    return out;
}

BatchResult run_corpus(std::span<const corpus::Paper> papers,
                       const PipelineConfig& cfg, const RoleSet& roles,
                       const llm::ChatClient& client, int worker_cap,
                       const DocumentCallback& on_done) {
    if (worker_cap < 1) {
        throw std::invalid_argument("worker_cap must be >= 1");
    }
    BatchResult result;
    result.outcomes.resize(papers.size());

    std::atomic<std::size_t> next{0};
    std::mutex done_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= papers.size()) {
                return;
            }
            const auto& paper = papers[idx];
            DocumentOutcome outcome;
            outcome.index = idx;
            outcome.doc_id = paper.id;
            try {
                outcome.trace = run_document(paper, cfg, roles, client);
            } catch (const AgentFailure& e) {
                outcome.failure = FailureRecord{paper.id, e.step, e.iteration,
                                                e.cause_kind, e.what()};
            } catch (const Error& e) {
                outcome.failure =
                    FailureRecord{paper.id, "", 0, e.kind(), e.what()};
            }
            if (on_done) {
                std::lock_guard lock(done_mutex);
                on_done(outcome);
            }
            result.outcomes[idx] = std::move(outcome);
        }
    };

    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(worker_cap),
                              std::max<std::size_t>(papers.size(), 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            threads.emplace_back(worker);
        }
        for (auto& t : threads) {
            t.join();
        }
    }
    return result;
}

// ------------------------------------------------------------ persistence

void write_trace(const IterationTrace& trace,
                 const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("FileError", "cannot write trace file: " + file.string());
    }
    json meta = {
        {"record", "meta"},
        {"doc_id", trace.paper.id},
        {"dataset", corpus::dataset_name(trace.paper.source)},
        {"abstract", trace.paper.abstract},
        {"mode", mode_name(trace.mode)},
        {"iterations", trace.iterations},
        {"select_iteration", trace.select_iteration},
    };
    out << meta.dump() << "\n";

    std::size_t article_i = 0;
    std::size_t notes_i = 0;
    std::size_t feedback_i = 0;
    for (const auto& s : trace.steps) {
        json rec = {
            {"record", "step"},       {"step", s.step},
            {"iteration", s.iteration}, {"attempts", s.attempts},
            {"duration_ms", s.duration_ms}, {"raw_attempts", s.raw_attempts},
        };
        if (s.step == "journalist" || s.step == "revision") {
            rec["article"] = trace.articles.at(article_i++).body;
        } else if (s.step == "reader") {
            const auto& n = trace.notes.at(notes_i++);
            rec["extraction"] = n.extraction_items;
            rec["explanation"] = n.explanation_items;
        } else if (s.step == "editor") {
            const auto& f = trace.feedback.at(feedback_i++);
            rec["accuracy"] = f.accuracy_eval;
            rec["complexity"] = f.complexity_eval;
            rec["conveyance"] = f.conveyance_eval;
            rec["advice"] = f.advice_items;
        }
        out << rec.dump() << "\n";
    }
}

IterationTrace read_trace(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw Error("FileError", "cannot read trace file: " + file.string());
    }
    IterationTrace trace;
    std::string line;
    bool have_meta = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw Error("TraceFormatError",
                        file.string() + ": " + e.what());
        }
        const std::string kind = rec.value("record", "");
        if (kind == "meta") {
            trace.paper.id = rec.value("doc_id", "");
            trace.paper.abstract = rec.value("abstract", "");
            trace.paper.source =
                corpus::dataset_from_name(rec.value("dataset", "custom"));
            trace.mode = mode_from_name(rec.value("mode", "full"));
            trace.iterations = rec.value("iterations", 0);
            trace.select_iteration = rec.value("select_iteration", 0);
            have_meta = true;
            continue;
        }
        if (kind != "step") {
            continue;
        }
        StepRecord s;
        s.step = rec.value("step", "");
        s.iteration = rec.value("iteration", 0);
        s.attempts = rec.value("attempts", 0);
        s.duration_ms = rec.value("duration_ms", 0.0);
        for (const auto& raw : rec.value("raw_attempts", json::array())) {
            s.raw_attempts.push_back(raw.get<std::string>());
        }
        const std::string last_raw =
            s.raw_attempts.empty() ? "" : s.raw_attempts.back();
        if (s.step == "journalist" || s.step == "revision") {
            trace.articles.push_back(
                extraction::Article{rec.value("article", ""), s.iteration});
        } else if (s.step == "reader") {
            extraction::ReaderNotes n;
            for (const auto& it : rec.value("extraction", json::array())) {
                n.extraction_items.push_back(it.get<std::string>());
            }
            for (const auto& it : rec.value("explanation", json::array())) {
                n.explanation_items.push_back(it.get<std::string>());
            }
            n.raw = last_raw;
            trace.notes.push_back(std::move(n));
        } else if (s.step == "editor") {
            extraction::EditorFeedback f;
            f.accuracy_eval = rec.value("accuracy", "");
            f.complexity_eval = rec.value("complexity", "");
            f.conveyance_eval = rec.value("conveyance", "");
            for (const auto& it : rec.value("advice", json::array())) {
                f.advice_items.push_back(it.get<std::string>());
            }
            f.raw = last_raw;
            trace.feedback.push_back(std::move(f));
        }
        trace.steps.push_back(std::move(s));
    }
    if (!have_meta) {
        throw Error("TraceFormatError",
                    file.string() + ": missing meta record");
    }
    return trace;
}

} // namespace newsroom::pipeline
