#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newsroom/agents.hpp"
#include "newsroom/corpus.hpp"
#include "newsroom/errors.hpp"
#include "newsroom/extraction.hpp"
#include "newsroom/llm_client.hpp"

namespace newsroom::pipeline {

struct IterationOutOfRange : Error {
    IterationOutOfRange(int k, int n)
        : Error("IterationOutOfRange",
                "iteration " + std::to_string(k) +
                    " out of range for a trace with " + std::to_string(n) +
                    " iterations") {}
};

enum class Mode { full, no_reading, no_suggestions, no_collaboration };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct PipelineConfig {
    int iterations = 5;       // revision rounds after the initial writing
    int select_iteration = 3; // article picked as the final output
    Mode mode = Mode::full;
    int max_agent_retries = 3;
    std::optional<std::string> one_shot; // demonstration for the first write
    double copy_threshold = 0.95;

    bool operator==(const PipelineConfig&) const = default;
};

struct StepRecord {
    std::string step; // journalist | reader | editor | revision
    int iteration = 0;
    int attempts = 0;
    double duration_ms = 0.0;
    std::vector<std::string> raw_attempts; // transcript of every attempt
};

// Complete record of one document's run: articles[0] is the initial
// writing, articles[i] the i-th revision. Mode decides which of the notes
// and feedback lists are populated.
struct IterationTrace {
    corpus::Paper paper;
    Mode mode = Mode::full;
    int iterations = 0;
    int select_iteration = 0;
    std::vector<extraction::Article> articles;
    std::vector<extraction::ReaderNotes> notes;
    std::vector<extraction::EditorFeedback> feedback;
    std::vector<StepRecord> steps;
};

struct AgentFailure : Error {
    AgentFailure(std::string step, int iteration, std::string cause_kind,
                 const std::string& message,
                 std::shared_ptr<IterationTrace> partial)
        : Error("AgentFailure", "step '" + step + "' failed at iteration " +
                                    std::to_string(iteration) + ": " + message),
          step(std::move(step)), iteration(iteration),
          cause_kind(std::move(cause_kind)), partial_trace(std::move(partial)) {}

    std::string step;
    int iteration;
    std::string cause_kind;
    std::shared_ptr<IterationTrace> partial_trace; // for diagnosis
};

struct RoleSet {
    agents::AgentRole journalist;
    agents::AgentRole reader;
    agents::AgentRole editor;
    agents::AgentRole revision;
};

// Roles built from the shipped templates, all pointing at one endpoint.
// The journalist and revision share the endpoint by design; callers with
// distinct endpoints per role assemble the RoleSet directly.
RoleSet make_role_set(const llm::EndpointConfig& endpoint,
                      const llm::SamplingParams& params,
                      const std::filesystem::path& prompts_dir);

IterationTrace run_document(const corpus::Paper& paper,
                            const PipelineConfig& cfg, const RoleSet& roles,
                            const llm::ChatClient& client);

const extraction::Article& select_output(const IterationTrace& trace, int k);

struct FailureRecord {
    std::string doc_id;
    std::string step;
    int iteration = 0;
    std::string kind;
    std::string message;
};

struct DocumentOutcome {
    std::size_t index = 0;
    std::string doc_id;
    std::optional<IterationTrace> trace;
    std::optional<FailureRecord> failure;
};

struct BatchResult {
    std::vector<DocumentOutcome> outcomes; // input order

    std::vector<const IterationTrace*> traces() const;
    std::vector<const FailureRecord*> failures() const;
};

using DocumentCallback = std::function<void(const DocumentOutcome&)>;

// Bounded cross-document parallelism; output order equals input order and
// per-document failures are recorded, never fatal to the batch.
BatchResult run_corpus(std::span<const corpus::Paper> papers,
                       const PipelineConfig& cfg, const RoleSet& roles,
                       const llm::ChatClient& client, int worker_cap,
                       const DocumentCallback& on_done = nullptr);

// Line-delimited trace persistence (one JSON record per line): a "meta"
// record followed by one "step" record per agent invocation, in execution
// order. The same files serve as replay fixtures.
void write_trace(const IterationTrace& trace,
                 const std::filesystem::path& file);
IterationTrace read_trace(const std::filesystem::path& file);

} // namespace newsroom::pipeline
