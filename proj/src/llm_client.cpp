#include "newsroom/llm_client.hpp"

#include <chrono>
#include <condition_variable>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

namespace newsroom::llm {

using nlohmann::json;

std::string role_name(Role role) {
    switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    }
    return "user";
}

Role role_from_name(const std::string& name) {
    if (name == "system") return Role::system;
    if (name == "assistant") return Role::assistant;
    if (name == "user") return Role::user;
    throw MalformedResponse("unknown chat role: " + name);
}

json build_request_body(const std::string& model, const SamplingParams& params,
                        const std::vector<ChatMessage>& messages) {
    json msgs = json::array();
    for (const auto& m : messages) {
        msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
    }
    json body = {
        {"model", model},
        {"messages", std::move(msgs)},
        {"top_p", params.top_p},
        {"frequency_penalty", params.frequency_penalty},
        {"max_tokens", params.max_tokens},
    };
    if (params.temperature.has_value()) {
        body["temperature"] = *params.temperature;
    }
    if (params.send_repetition_penalty) {
        body["repetition_penalty"] = params.repetition_penalty;
    }
    return body;
}

ParsedRequest parse_request_body(const json& body) {
    ParsedRequest req;
    req.model = body.at("model").get<std::string>();
    req.params.top_p = body.at("top_p").get<double>();
    req.params.frequency_penalty = body.at("frequency_penalty").get<double>();
    req.params.max_tokens = body.at("max_tokens").get<int>();
    if (body.contains("temperature")) {
        req.params.temperature = body["temperature"].get<double>();
    }
    if (body.contains("repetition_penalty")) {
        req.params.repetition_penalty = body["repetition_penalty"].get<double>();
        req.params.send_repetition_penalty = true;
    }
    for (const auto& m : body.at("messages")) {
        req.messages.push_back({role_from_name(m.at("role").get<std::string>()),
                                m.at("content").get<std::string>()});
    }
    return req;
}

std::string parse_completion_response(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw MalformedResponse(std::string("response is not JSON: ") + e.what());
    }
    if (!j.contains("choices") || !j["choices"].is_array() ||
        j["choices"].empty()) {
        throw MalformedResponse("response has no choices");
    }
    const auto& choice = j["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
        throw MalformedResponse("first choice has no message content");
    }
    return choice["message"]["content"].get<std::string>();
}

// ----------------------------------------------------------------- HTTP

namespace {

struct SplitUrl {
    bool https = false;
    std::string host_port; // host[:port]
    std::string path_prefix;
};

SplitUrl split_base_url(const std::string& base_url) {
    SplitUrl out;
    std::string rest;
    if (base_url.rfind("https://", 0) == 0) {
        out.https = true;
        rest = base_url.substr(8);
    } else if (base_url.rfind("http://", 0) == 0) {
        rest = base_url.substr(7);
    } else {
        rest = base_url;
    }
    const auto slash = rest.find('/');
    if (slash == std::string::npos) {
        out.host_port = rest;
    } else {
        out.host_port = rest.substr(0, slash);
        out.path_prefix = rest.substr(slash);
        while (!out.path_prefix.empty() && out.path_prefix.back() == '/') {
            out.path_prefix.pop_back();
        }
    }
    if (out.host_port.empty()) {
        throw TransportError("invalid base_url: " + base_url);
    }
    return out;
}

} // namespace

// Bounds concurrent in-flight requests per host.
class HttpBackend::Gate {
public:
    explicit Gate(int cap) : available_(cap > 0 ? cap : 1) {}

    void acquire() {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return available_ > 0; });
        --available_;
    }
    void release() {
        {
            std::lock_guard lock(m_);
            ++available_;
        }
        cv_.notify_one();
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    int available_;
};

std::shared_ptr<HttpBackend::Gate> HttpBackend::gate_for(
    const std::string& base_url, int cap) {
    std::lock_guard lock(mutex_);
    auto it = gates_.find(base_url);
    if (it == gates_.end()) {
        it = gates_.emplace(base_url, std::make_shared<Gate>(cap)).first;
    }
    return it->second;
}

std::string HttpBackend::complete(const EndpointConfig& endpoint,
                                  const SamplingParams& params,
                                  const std::vector<ChatMessage>& messages,
                                  const CallTag&) {
    const SplitUrl url = split_base_url(endpoint.base_url);
    const std::string path = url.path_prefix + "/chat/completions";
    const std::string body =
        build_request_body(endpoint.model_name, params, messages).dump();

    httplib::Headers headers;
    if (endpoint.api_key.has_value() && !endpoint.api_key->empty()) {
        headers.emplace("Authorization", "Bearer " + *endpoint.api_key);
    }

    const auto gate = gate_for(endpoint.base_url, endpoint.connection_cap);
    gate->acquire();
    struct Release {
        Gate* g;
        ~Release() { g->release(); }
    } release{gate.get()};

    const auto timeout_ms =
        std::chrono::milliseconds(static_cast<long>(endpoint.timeout_s * 1000));
    httplib::Result res;
    if (url.https) {
        httplib::SSLClient cli(url.host_port);
        cli.set_connection_timeout(timeout_ms);
        cli.set_read_timeout(timeout_ms);
        cli.set_write_timeout(timeout_ms);
        res = cli.Post(path, headers, body, "application/json");
    } else {
        httplib::Client cli(url.host_port);
        cli.set_connection_timeout(timeout_ms);
        cli.set_read_timeout(timeout_ms);
        cli.set_write_timeout(timeout_ms);
        res = cli.Post(path, headers, body, "application/json");
    }

    if (!res) {
        const auto err = res.error();
        std::ostringstream msg;
        msg << endpoint.base_url << path << ": " << httplib::to_string(err);
        if (err == httplib::Error::ConnectionTimeout ||
            err == httplib::Error::Read || err == httplib::Error::Write) {
            throw Timeout(msg.str());
        }
        throw TransportError(msg.str());
    }
    if (res->status == 401 || res->status == 403) {
        throw AuthError("auth failed (" + std::to_string(res->status) + ") at " +
                        endpoint.base_url);
    }
    if (res->status < 200 || res->status >= 300) {
        throw TransportError("status " + std::to_string(res->status) + " from " +
                             endpoint.base_url + ": " +
                             res->body.substr(0, 200));
    }
    return parse_completion_response(res->body);
}

// ------------------------------------------------------------- Scripted

ScriptedBackend::ScriptedBackend(std::string canned_reply)
    : default_reply_(std::move(canned_reply)) {}

ScriptedBackend::ScriptedBackend(Handler handler)
    : handler_(std::move(handler)) {}

void ScriptedBackend::set_default_reply(std::string reply) {
    std::lock_guard lock(mutex_);
    default_reply_ = std::move(reply);
}

void ScriptedBackend::set_reply(const std::string& role, std::string reply) {
    std::lock_guard lock(mutex_);
    role_replies_[role] = std::move(reply);
}

void ScriptedBackend::set_reply(const std::string& role, int iteration,
                                std::string reply) {
    std::lock_guard lock(mutex_);
    step_replies_[{role, iteration}] = std::move(reply);
}

void ScriptedBackend::set_handler(Handler handler) {
    std::lock_guard lock(mutex_);
    handler_ = std::move(handler);
}

std::string ScriptedBackend::complete(const EndpointConfig& endpoint,
                                      const SamplingParams&,
                                      const std::vector<ChatMessage>& messages,
                                      const CallTag& tag) {
    Handler handler;
    {
        std::lock_guard lock(mutex_);
        log_.push_back({tag, endpoint.model_name, messages});
        const auto step = step_replies_.find({tag.role, tag.iteration});
        if (step != step_replies_.end()) {
            return step->second;
        }
        const auto role = role_replies_.find(tag.role);
        if (role != role_replies_.end()) {
            return role->second;
        }
        if (!handler_ && default_reply_.has_value()) {
            return *default_reply_;
        }
        handler = handler_;
    }
    if (handler) {
        return handler(tag, messages);
    }
    throw TransportError("scripted backend has no reply for role '" + tag.role +
                         "'");
}

std::vector<ScriptedBackend::CallRecord> ScriptedBackend::calls() const {
    std::lock_guard lock(mutex_);
    return log_;
}

std::size_t ScriptedBackend::call_count() const {
    std::lock_guard lock(mutex_);
    return log_.size();
}

std::size_t ScriptedBackend::call_count(const std::string& role) const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& r : log_) {
        if (r.tag.role == role) {
            ++n;
        }
    }
    return n;
}

// --------------------------------------------------------------- Replay

ReplayBackend::ReplayBackend(std::filesystem::path fixture_dir)
    : dir_(std::move(fixture_dir)) {
    if (!std::filesystem::is_directory(dir_)) {
        throw TransportError("replay fixture directory does not exist: " +
                             dir_.string());
    }
}

std::optional<std::string> ReplayBackend::from_trace(const CallTag& tag) {
    const auto path = dir_ / (tag.doc_id + ".trace.jsonl");
    {
        const auto cached = trace_cache_.find(tag.doc_id);
        if (cached != trace_cache_.end()) {
            const auto hit = cached->second.find({tag.role, tag.iteration});
            if (hit != cached->second.end()) {
                return hit->second;
            }
            return std::nullopt;
        }
    }
    if (!std::filesystem::exists(path)) {
        return std::nullopt;
    }
    std::map<std::pair<std::string, int>, std::string> steps;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception&) {
            continue;
        }
        if (rec.value("record", "") != "step") {
            continue;
        }
        const auto& raws = rec["raw_attempts"];
        if (!raws.is_array() || raws.empty()) {
            continue;
        }
        steps[{rec.value("step", ""), rec.value("iteration", 0)}] =
            raws.back().get<std::string>();
    }
    auto& slot = trace_cache_[tag.doc_id];
    slot = std::move(steps);
    const auto hit = slot.find({tag.role, tag.iteration});
    if (hit != slot.end()) {
        return hit->second;
    }
    return std::nullopt;
}

std::string ReplayBackend::complete(const EndpointConfig&,
                                    const SamplingParams&,
                                    const std::vector<ChatMessage>&,
                                    const CallTag& tag) {
    std::lock_guard lock(mutex_);
    if (auto hit = from_trace(tag)) {
        return *hit;
    }
    const std::string step_file = tag.role + "_" + std::to_string(tag.iteration) + ".md";
    const std::filesystem::path candidates[] = {
        dir_ / tag.doc_id / step_file,
        dir_ / step_file,
        dir_ / (tag.role + ".md"),
    };
    for (const auto& path : candidates) {
        const std::string key = path.string();
        const auto cached = file_cache_.find(key);
        if (cached != file_cache_.end()) {
            return cached->second;
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        return file_cache_.emplace(key, buf.str()).first->second;
    }
    throw TransportError("no replay fixture for doc='" + tag.doc_id +
                         "' role='" + tag.role + "' iteration=" +
                         std::to_string(tag.iteration) + " under " +
                         dir_.string());
}

// --------------------------------------------------------------- Client

ChatClient::ChatClient(std::shared_ptr<ChatBackend> backend)
    : backend_(std::move(backend)) {
    if (!backend_) {
        throw std::invalid_argument("ChatClient requires a backend");
    }
}

std::string ChatClient::complete(const EndpointConfig& endpoint,
                                 const SamplingParams& params,
                                 const std::vector<ChatMessage>& messages,
                                 const CallTag& tag) const {
    if (messages.empty() || messages.back().role != Role::user) {
        throw std::invalid_argument(
            "chat request must end with a user message");
    }
    for (const auto& m : messages) {
        if (m.role != Role::assistant && m.content.empty()) {
            throw std::invalid_argument("system/user message content empty");
        }
    }
    const int attempts = endpoint.max_retries + 1;
    int backoff_ms = endpoint.backoff_initial_ms;
    for (int attempt = 0;; ++attempt) {
        CallTag attempt_tag = tag;
        attempt_tag.attempt = attempt;
        try {
            return backend_->complete(endpoint, params, messages, attempt_tag);
        } catch (const Timeout&) {
            if (attempt + 1 >= attempts) {
                throw;
            }
        } catch (const TransportError&) {
            if (attempt + 1 >= attempts) {
                throw;
            }
        }
        if (backoff_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms = std::min(backoff_ms * 2, 10'000);
        }
    }
}

} // namespace newsroom::llm
