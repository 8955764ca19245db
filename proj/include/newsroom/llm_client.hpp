#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "newsroom/errors.hpp"

namespace newsroom::llm {

struct Timeout : Error {
    explicit Timeout(const std::string& msg) : Error("Timeout", msg) {}
};
struct TransportError : Error {
    explicit TransportError(const std::string& msg)
        : Error("TransportError", msg) {}
};
struct MalformedResponse : Error {
    explicit MalformedResponse(const std::string& msg)
        : Error("MalformedResponse", msg) {}
};
struct AuthError : Error {
    explicit AuthError(const std::string& msg) : Error("AuthError", msg) {}
};

struct EndpointConfig {
    std::string base_url;   // e.g. "http://127.0.0.1:8000/v1"
    std::string model_name;
    std::optional<std::string> api_key;
    double timeout_s = 120.0;
    int max_retries = 2;
    int backoff_initial_ms = 250; // doubles per retry
    int connection_cap = 4;       // concurrent in-flight requests per host

    bool operator==(const EndpointConfig&) const = default;
};

struct SamplingParams {
    double top_p = 0.4;
    double frequency_penalty = 1.0;
    // Non-standard serving extension; only serialized when enabled.
    double repetition_penalty = 1.0;
    bool send_repetition_penalty = false;
    int max_tokens = 4096;
    std::optional<double> temperature; // absent => server default applies

    bool operator==(const SamplingParams&) const = default;
};

enum class Role { system, user, assistant };

std::string role_name(Role role);
Role role_from_name(const std::string& name);

struct ChatMessage {
    Role role = Role::user;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

// Identifies one agent invocation within a run; HTTP ignores it, mock and
// replay backends key on it.
struct CallTag {
    std::string doc_id;
    std::string role;   // "journalist" | "reader" | "editor" | "revision"
    int iteration = 0;
    int attempt = 0;
};

// Wire body: model, messages, top_p, frequency_penalty, max_tokens,
// optional temperature, optional repetition_penalty. Absent optionals are
// omitted, never sent as null.
nlohmann::json build_request_body(const std::string& model,
                                  const SamplingParams& params,
                                  const std::vector<ChatMessage>& messages);

struct ParsedRequest {
    std::string model;
    SamplingParams params;
    std::vector<ChatMessage> messages;
};

ParsedRequest parse_request_body(const nlohmann::json& body);

// choices[0].message.content, verbatim. Throws MalformedResponse.
std::string parse_completion_response(const std::string& body);

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const EndpointConfig& endpoint,
                                 const SamplingParams& params,
                                 const std::vector<ChatMessage>& messages,
                                 const CallTag& tag) = 0;
};

// POSTs {base_url}/chat/completions with a Bearer header when an api_key is
// set. 401/403 map to AuthError, timeouts to Timeout, everything else
// non-2xx or unreachable to TransportError.
class HttpBackend : public ChatBackend {
public:
    std::string complete(const EndpointConfig& endpoint,
                         const SamplingParams& params,
                         const std::vector<ChatMessage>& messages,
                         const CallTag& tag) override;

private:
    class Gate;
    std::shared_ptr<Gate> gate_for(const std::string& base_url, int cap);

    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Gate>> gates_;
};

// Deterministic offline backend. Replies are produced by a handler
// function; convenience setters cover the common canned cases. Every call
// is logged (thread-safe) so tests can assert call patterns.
class ScriptedBackend : public ChatBackend {
public:
    using Handler = std::function<std::string(const CallTag&,
                                              const std::vector<ChatMessage>&)>;

    struct CallRecord {
        CallTag tag;
        std::string model;
        std::vector<ChatMessage> messages;
    };

    ScriptedBackend() = default;
    explicit ScriptedBackend(std::string canned_reply);
    explicit ScriptedBackend(Handler handler);

    void set_default_reply(std::string reply);
    void set_reply(const std::string& role, std::string reply);
    void set_reply(const std::string& role, int iteration, std::string reply);
    void set_handler(Handler handler);

    std::string complete(const EndpointConfig& endpoint,
                         const SamplingParams& params,
                         const std::vector<ChatMessage>& messages,
                         const CallTag& tag) override;

    std::vector<CallRecord> calls() const;
    std::size_t call_count() const;
    std::size_t call_count(const std::string& role) const;

private:
    mutable std::mutex mutex_;
    Handler handler_;
    std::optional<std::string> default_reply_;
    std::map<std::string, std::string> role_replies_;
    std::map<std::pair<std::string, int>, std::string> step_replies_;
    std::vector<CallRecord> log_;
};

// Transcript replay from a fixture directory. Lookup order for a call
// tagged (doc, role, iteration):
//   1. <dir>/<doc>.trace.jsonl            (recorded run; last raw attempt)
//   2. <dir>/<doc>/<role>_<iteration>.md
//   3. <dir>/<role>_<iteration>.md
//   4. <dir>/<role>.md
// A miss raises TransportError naming the missing fixture.
class ReplayBackend : public ChatBackend {
public:
    explicit ReplayBackend(std::filesystem::path fixture_dir);

    std::string complete(const EndpointConfig& endpoint,
                         const SamplingParams& params,
                         const std::vector<ChatMessage>& messages,
                         const CallTag& tag) override;

private:
    std::optional<std::string> from_trace(const CallTag& tag);

    std::filesystem::path dir_;
    std::mutex mutex_;
    std::map<std::string, std::map<std::pair<std::string, int>, std::string>>
        trace_cache_;
    std::map<std::string, std::string> file_cache_;
};

// Immutable retry wrapper around any backend: transport failures and
// timeouts are retried max_retries times with exponential backoff, so a
// failing backend sees exactly max_retries + 1 attempts.
class ChatClient {
public:
    explicit ChatClient(std::shared_ptr<ChatBackend> backend);

    std::string complete(const EndpointConfig& endpoint,
                         const SamplingParams& params,
                         const std::vector<ChatMessage>& messages,
                         const CallTag& tag = {}) const;

    ChatBackend& backend() const { return *backend_; }

private:
    std::shared_ptr<ChatBackend> backend_;
};

} // namespace newsroom::llm
