#include "newsroom/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include "newsroom/agents.hpp"

namespace newsroom::config {

using nlohmann::json;

namespace {

constexpr const char* kRoleNames[] = {"journalist", "reader", "editor",
                                      "revision"};

RoleConfig default_role(const std::string& model) {
    RoleConfig role;
    role.endpoint.base_url = "http://127.0.0.1:8000/v1";
    role.endpoint.model_name = model;
    return role;
}

json endpoint_to_json(const llm::EndpointConfig& e, const std::string& env) {
    json out = {
        {"base_url", e.base_url},
        {"model", e.model_name},
        {"timeout_s", e.timeout_s},
        {"max_retries", e.max_retries},
        {"backoff_initial_ms", e.backoff_initial_ms},
        {"connection_cap", e.connection_cap},
    };
    if (e.api_key.has_value()) {
        out["api_key"] = *e.api_key;
    }
    if (!env.empty()) {
        out["api_key_env"] = env;
    }
    return out;
}

json params_to_json(const llm::SamplingParams& p) {
    json out = {
        {"top_p", p.top_p},
        {"frequency_penalty", p.frequency_penalty},
        {"repetition_penalty", p.repetition_penalty},
        {"send_repetition_penalty", p.send_repetition_penalty},
        {"max_tokens", p.max_tokens},
    };
    if (p.temperature.has_value()) {
        out["temperature"] = *p.temperature;
    }
    return out;
}

json role_to_json(const RoleConfig& r) {
    json out = {
        {"endpoint", endpoint_to_json(r.endpoint, r.api_key_env)},
        {"params", params_to_json(r.params)},
    };
    if (r.prompt_file.has_value()) {
        out["prompt_file"] = *r.prompt_file;
    }
    return out;
}

void endpoint_from_json(const json& j, RoleConfig& role) {
    auto& e = role.endpoint;
    e.base_url = j.value("base_url", e.base_url);
    e.model_name = j.value("model", e.model_name);
    if (j.contains("api_key") && j["api_key"].is_string()) {
        e.api_key = j["api_key"].get<std::string>();
    }
    role.api_key_env = j.value("api_key_env", role.api_key_env);
    e.timeout_s = j.value("timeout_s", e.timeout_s);
    e.max_retries = j.value("max_retries", e.max_retries);
    e.backoff_initial_ms = j.value("backoff_initial_ms", e.backoff_initial_ms);
    e.connection_cap = j.value("connection_cap", e.connection_cap);
    if (e.timeout_s <= 0) {
        throw ConfigError("endpoint timeout_s must be > 0");
    }
    if (e.max_retries < 0) {
        throw ConfigError("endpoint max_retries must be >= 0");
    }
}

void params_from_json(const json& j, llm::SamplingParams& p) {
    p.top_p = j.value("top_p", p.top_p);
    p.frequency_penalty = j.value("frequency_penalty", p.frequency_penalty);
    p.repetition_penalty = j.value("repetition_penalty", p.repetition_penalty);
    p.send_repetition_penalty =
        j.value("send_repetition_penalty", p.send_repetition_penalty);
    p.max_tokens = j.value("max_tokens", p.max_tokens);
    if (j.contains("temperature") && j["temperature"].is_number()) {
        p.temperature = j["temperature"].get<double>();
    }
    if (p.top_p <= 0.0 || p.top_p > 1.0) {
        throw ConfigError("top_p must lie in (0, 1]");
    }
    if (p.max_tokens <= 0) {
        throw ConfigError("max_tokens must be > 0");
    }
}

void role_from_json(const json& j, RoleConfig& role) {
    if (j.contains("endpoint")) {
        endpoint_from_json(j["endpoint"], role);
    }
    if (j.contains("params")) {
        params_from_json(j["params"], role.params);
    }
    if (j.contains("prompt_file") && j["prompt_file"].is_string()) {
        role.prompt_file = j["prompt_file"].get<std::string>();
    }
}

// trailing parameter-count marker like "7B" or "1.8b" in a model name
std::optional<double> model_size_billions(const std::string& model) {
    static const std::regex size_re(R"(([0-9]+(?:\.[0-9]+)?)\s*[bB]\b)");
    std::smatch m;
    std::optional<double> last;
    auto begin = model.cbegin();
    while (std::regex_search(begin, model.cend(), m, size_re)) {
        last = std::stod(m[1].str());
        begin = m.suffix().first;
    }
    return last;
}

std::optional<std::string> env_value(const std::string& name) {
    if (name.empty()) {
        return std::nullopt;
    }
    const char* v = std::getenv(name.c_str());
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

std::string upper(std::string s) {
    for (char& c : s) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
}

} // namespace

RunConfig default_config() {
    RunConfig cfg;
    const auto data = agents::default_data_dir();
    cfg.lexicon_path = (data / "dale_chall_familiar_words.txt").string();
    cfg.prompts_dir = (data / "prompts").string();
    cfg.journalist = default_role("Qwen1.5-7B");
    cfg.editor = default_role("Qwen1.5-7B");
    cfg.revision = default_role("Qwen1.5-7B");
    cfg.reader = default_role("Qwen1.5-1.8B");
    return cfg;
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg = default_config();
    cfg.seed = j.value("seed", cfg.seed);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.lexicon_path = j.value("lexicon", cfg.lexicon_path);
    cfg.prompts_dir = j.value("prompts_dir", cfg.prompts_dir);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.backend = j.value("backend", cfg.backend);
    if (cfg.workers < 1) {
        throw ConfigError("workers must be >= 1");
    }

    if (j.contains("corpus")) {
        const auto& c = j["corpus"];
        cfg.corpus_path = c.value("path", cfg.corpus_path);
        cfg.dataset = c.value("dataset", cfg.dataset);
        if (c.contains("split_manifest") && c["split_manifest"].is_string()) {
            cfg.split_manifest = c["split_manifest"].get<std::string>();
        }
    }

    if (j.contains("pipeline")) {
        const auto& p = j["pipeline"];
        cfg.pipeline.iterations = p.value("iterations", cfg.pipeline.iterations);
        cfg.pipeline.select_iteration =
            p.value("select_iteration", cfg.pipeline.select_iteration);
        if (p.contains("mode")) {
            cfg.pipeline.mode =
                pipeline::mode_from_name(p["mode"].get<std::string>());
        }
        cfg.pipeline.max_agent_retries =
            p.value("max_agent_retries", cfg.pipeline.max_agent_retries);
        cfg.pipeline.copy_threshold =
            p.value("copy_threshold", cfg.pipeline.copy_threshold);
        cfg.one_shot = p.value("one_shot", cfg.one_shot);
        if (p.contains("one_shot_text") && p["one_shot_text"].is_string()) {
            cfg.pipeline.one_shot = p["one_shot_text"].get<std::string>();
        }
        if (cfg.pipeline.iterations < 0) {
            throw ConfigError("pipeline.iterations must be >= 0");
        }
        if (cfg.pipeline.select_iteration < 0 ||
            cfg.pipeline.select_iteration > cfg.pipeline.iterations) {
            throw ConfigError(
                "pipeline.select_iteration must lie in [0, iterations]");
        }
    }

    if (j.contains("roles")) {
        const auto& roles = j["roles"];
        if (roles.contains("journalist")) {
            role_from_json(roles["journalist"], cfg.journalist);
        }
        if (roles.contains("reader")) {
            role_from_json(roles["reader"], cfg.reader);
        }
        if (roles.contains("editor")) {
            role_from_json(roles["editor"], cfg.editor);
        }
        // the journalist also revises unless a revision block overrides it
        if (roles.contains("revision")) {
            role_from_json(roles["revision"], cfg.revision);
        } else {
            cfg.revision = cfg.journalist;
        }
    } else {
        cfg.revision = cfg.journalist;
    }

    if (j.contains("evaluation")) {
        const auto& e = j["evaluation"];
        cfg.significance.resamples =
            e.value("bootstrap_resamples", cfg.significance.resamples);
        cfg.significance.use_t_test =
            e.value("use_t_test", cfg.significance.use_t_test);
        cfg.significance.seed = cfg.seed;
    }
    cfg.significance.seed = cfg.seed;
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json j = {
        {"seed", cfg.seed},
        {"output_dir", cfg.output_dir},
        {"lexicon", cfg.lexicon_path},
        {"prompts_dir", cfg.prompts_dir},
        {"workers", cfg.workers},
        {"backend", cfg.backend},
        {"corpus",
         {{"path", cfg.corpus_path}, {"dataset", cfg.dataset}}},
        {"pipeline",
         {{"iterations", cfg.pipeline.iterations},
          {"select_iteration", cfg.pipeline.select_iteration},
          {"mode", pipeline::mode_name(cfg.pipeline.mode)},
          {"max_agent_retries", cfg.pipeline.max_agent_retries},
          {"copy_threshold", cfg.pipeline.copy_threshold},
          {"one_shot", cfg.one_shot}}},
        {"roles",
         {{"journalist", role_to_json(cfg.journalist)},
          {"reader", role_to_json(cfg.reader)},
          {"editor", role_to_json(cfg.editor)},
          {"revision", role_to_json(cfg.revision)}}},
        {"evaluation",
         {{"bootstrap_resamples", cfg.significance.resamples},
          {"use_t_test", cfg.significance.use_t_test}}},
    };
    if (cfg.split_manifest.has_value()) {
        j["corpus"]["split_manifest"] = *cfg.split_manifest;
    }
    if (cfg.pipeline.one_shot.has_value()) {
        j["pipeline"]["one_shot_text"] = *cfg.pipeline.one_shot;
    }
    return j;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void validate_config(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    if (!fs::exists(cfg.lexicon_path)) {
        throw ConfigError("lexicon file not found: " + cfg.lexicon_path);
    }
    for (const auto* role : {&cfg.journalist, &cfg.reader, &cfg.editor,
                             &cfg.revision}) {
        if (role->prompt_file.has_value() && !fs::exists(*role->prompt_file)) {
            throw ConfigError("prompt file not found: " + *role->prompt_file);
        }
    }
    if (!fs::is_directory(cfg.prompts_dir)) {
        throw ConfigError("prompts directory not found: " + cfg.prompts_dir);
    }
    if (!cfg.corpus_path.empty() && !fs::exists(cfg.corpus_path)) {
        throw ConfigError("corpus file not found: " + cfg.corpus_path);
    }
    if (cfg.split_manifest.has_value() && !fs::exists(*cfg.split_manifest)) {
        throw ConfigError("split manifest not found: " + *cfg.split_manifest);
    }
    if (cfg.backend.rfind("mock:", 0) == 0) {
        const auto dir = cfg.backend.substr(5);
        if (!fs::is_directory(dir)) {
            throw ConfigError("mock fixture directory not found: " + dir);
        }
    } else if (cfg.backend != "live") {
        throw ConfigError("backend must be 'live' or 'mock:<dir>', got '" +
                          cfg.backend + "'");
    }
}

std::vector<std::string> lint_config(const RunConfig& cfg) {
    std::vector<std::string> warnings;
    const auto reader_size = model_size_billions(cfg.reader.endpoint.model_name);
    const auto journalist_size =
        model_size_billions(cfg.journalist.endpoint.model_name);
    const auto editor_size = model_size_billions(cfg.editor.endpoint.model_name);
    if (reader_size.has_value()) {
        const double big = std::min(journalist_size.value_or(1e9),
                                    editor_size.value_or(1e9));
        if (big < 1e9 && *reader_size >= big) {
            warnings.push_back(
                "reader model '" + cfg.reader.endpoint.model_name +
                "' is not smaller than the journalist/editor model; the "
                "reader is meant to be the less capable role");
        }
    }
    return warnings;
}

namespace {

agents::AgentRole build_role(const RunConfig& cfg, const RoleConfig& rc,
                             agents::RoleKind kind) {
    llm::EndpointConfig endpoint = rc.endpoint;
    const std::string role = agents::role_kind_name(kind);
    if (auto v = env_value("NEWSROOM_" + upper(role) + "_API_KEY")) {
        endpoint.api_key = *v;
    } else if (auto g = env_value("NEWSROOM_API_KEY")) {
        endpoint.api_key = *g;
    } else if (auto named = env_value(rc.api_key_env)) {
        endpoint.api_key = *named;
    }
    if (rc.prompt_file.has_value()) {
        std::ifstream in(*rc.prompt_file, std::ios::binary);
        if (!in) {
            throw ConfigError("cannot open prompt file: " + *rc.prompt_file);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        return agents::make_role_from_template(kind, buf.str(), endpoint,
                                               rc.params);
    }
    return agents::make_role(kind, endpoint, rc.params, cfg.prompts_dir);
}

} // namespace

pipeline::RoleSet build_role_set(const RunConfig& cfg) {
    return pipeline::RoleSet{
        build_role(cfg, cfg.journalist, agents::RoleKind::journalist),
        build_role(cfg, cfg.reader, agents::RoleKind::reader),
        build_role(cfg, cfg.editor, agents::RoleKind::editor),
        build_role(cfg, cfg.revision, agents::RoleKind::revision),
    };
}

std::shared_ptr<llm::ChatBackend> build_backend(const RunConfig& cfg) {
    if (cfg.backend == "live") {
        return std::make_shared<llm::HttpBackend>();
    }
    if (cfg.backend.rfind("mock:", 0) == 0) {
        return std::make_shared<llm::ReplayBackend>(cfg.backend.substr(5));
    }
    throw ConfigError("backend must be 'live' or 'mock:<dir>', got '" +
                      cfg.backend + "'");
}

} // namespace newsroom::config
