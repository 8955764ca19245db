#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "newsroom/errors.hpp"
#include "newsroom/llm_client.hpp"

namespace newsroom::agents {

struct MissingContext : Error {
    explicit MissingContext(const std::string& field)
        : Error("MissingContext", "missing context field: " + field),
          field(field) {}
    std::string field;
};

enum class RoleKind { journalist, reader, editor, revision };

std::string role_kind_name(RoleKind kind);

enum class ContextField { demonstration, paper_abstract, article, notes, advice };

struct RoleContext {
    std::optional<std::string> paper_abstract;
    std::optional<std::string> article;
    std::optional<std::string> notes;
    std::optional<std::string> advice;
    std::optional<std::string> demonstration; // one-shot example, journalist only
};

struct FieldSlot {
    ContextField field;
    bool required = true;
};

// One agent role: the verbatim system prompt plus the ordered user-message
// layout, bound to an endpoint and sampling parameters. Immutable once
// built; ablation variants are derived with without_field().
//
// The user message is the present context fields, each as a labeled block
// ("Paper summary:", "Previous article:", "Reader's notes:", "Advice:"),
// in layout order, separated by blank lines. A demonstration block, when
// present, precedes the paper abstract.
//
// A template file may carry a custom user layout: everything below a line
// reading exactly "---user---" is treated as a user-message template whose
// {field} placeholders are substituted from the context; each placeholder
// except {demonstration} becomes a required field.
struct AgentRole {
    RoleKind kind = RoleKind::journalist;
    std::string system_prompt;
    std::vector<FieldSlot> layout;
    std::optional<std::string> user_template; // custom layout, if any
    llm::EndpointConfig endpoint;
    llm::SamplingParams params;
};

// Loads <kind>.txt from prompts_dir and attaches the default layout.
AgentRole make_role(RoleKind kind, const llm::EndpointConfig& endpoint,
                    const llm::SamplingParams& params,
                    const std::filesystem::path& prompts_dir);

// Same, with the template text supplied directly.
AgentRole make_role_from_template(RoleKind kind, std::string template_text,
                                  const llm::EndpointConfig& endpoint,
                                  const llm::SamplingParams& params);

// Copy with one layout slot removed (e.g. the editor without reader notes).
AgentRole without_field(AgentRole role, ContextField field);

// Directory holding the shipped prompt/lexicon data: $NEWSROOM_DATA_DIR if
// set, otherwise the build-time source data directory.
std::filesystem::path default_data_dir();

std::vector<llm::ChatMessage> render_messages(const AgentRole& role,
                                              const RoleContext& ctx);

// Render + complete; returns the unparsed completion. Client errors are
// rethrown with the role kind attached to the message.
std::string invoke_role(const llm::ChatClient& client, const AgentRole& role,
                        const RoleContext& ctx, const llm::CallTag& tag = {});

} // namespace newsroom::agents
