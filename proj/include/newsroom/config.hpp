#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsroom/errors.hpp"
#include "newsroom/evaluator.hpp"
#include "newsroom/llm_client.hpp"
#include "newsroom/pipeline.hpp"

namespace newsroom::config {

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("ConfigError", msg) {}
};

struct RoleConfig {
    llm::EndpointConfig endpoint;
    std::string api_key_env; // env var read at role-set build time
    llm::SamplingParams params;
    std::optional<std::string> prompt_file; // template override

    bool operator==(const RoleConfig&) const = default;
};

// Everything one invocation needs. `seed` fixes every artifact-side random
// choice: corpus splits, bootstrap resampling and the demonstration pick.
struct RunConfig {
    std::uint64_t seed = 42;
    std::string output_dir = "out";
    std::string lexicon_path;
    std::string prompts_dir;
    std::string corpus_path;
    std::optional<std::string> split_manifest;
    std::string dataset = "custom"; // tag applied when lines carry none
    int workers = 4;
    std::string backend = "live"; // "live" | "mock:<fixture-dir>"

    pipeline::PipelineConfig pipeline;
    bool one_shot = false; // draw a demonstration from the corpus (seeded)

    RoleConfig journalist;
    RoleConfig reader;
    RoleConfig editor;
    RoleConfig revision;

    evaluator::SignificanceOptions significance;

    bool operator==(const RunConfig&) const = default;
};

RunConfig default_config();

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

// Hard errors: referenced files must exist.
void validate_config(const RunConfig& cfg);

// Non-fatal observations, e.g. a reader model at least as large as the
// journalist's.
std::vector<std::string> lint_config(const RunConfig& cfg);

// Loads templates and resolves API keys. Environment beats file config for
// secrets: NEWSROOM_<ROLE>_API_KEY, then NEWSROOM_API_KEY, then the role's
// api_key_env variable, then the literal api_key field.
pipeline::RoleSet build_role_set(const RunConfig& cfg);

std::shared_ptr<llm::ChatBackend> build_backend(const RunConfig& cfg);

} // namespace newsroom::config
