#include "newsroom/agents.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace newsroom::agents {

namespace {

const std::optional<std::string>& field_value(const RoleContext& ctx,
                                              ContextField field) {
    switch (field) {
    case ContextField::demonstration: return ctx.demonstration;
    case ContextField::paper_abstract: return ctx.paper_abstract;
    case ContextField::article: return ctx.article;
    case ContextField::notes: return ctx.notes;
    case ContextField::advice: return ctx.advice;
    }
    return ctx.paper_abstract; // unreachable
}

std::string field_name(ContextField field) {
    switch (field) {
    case ContextField::demonstration: return "demonstration";
    case ContextField::paper_abstract: return "paper_abstract";
    case ContextField::article: return "article";
    case ContextField::notes: return "notes";
    case ContextField::advice: return "advice";
    }
    return "?";
}

std::string field_label(ContextField field, RoleKind kind) {
    switch (field) {
    case ContextField::demonstration: return "Demonstration:";
    case ContextField::paper_abstract: return "Paper summary:";
    case ContextField::article:
        return kind == RoleKind::reader ? "Article:" : "Previous article:";
    case ContextField::notes: return "Reader's notes:";
    case ContextField::advice: return "Advice:";
    }
    return "";
}

std::vector<FieldSlot> default_layout(RoleKind kind) {
    using F = ContextField;
    switch (kind) {
    case RoleKind::journalist:
        return {{F::demonstration, false}, {F::paper_abstract, true}};
    case RoleKind::reader:
        return {{F::article, true}};
    case RoleKind::editor:
        return {{F::paper_abstract, true}, {F::article, true}, {F::notes, true}};
    case RoleKind::revision:
        return {{F::paper_abstract, true}, {F::article, true}, {F::advice, true}};
    }
    return {};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("PromptFileError",
                    "cannot open prompt template: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

constexpr std::string_view kUserMarker = "---user---";

} // namespace

std::string role_kind_name(RoleKind kind) {
    switch (kind) {
    case RoleKind::journalist: return "journalist";
    case RoleKind::reader: return "reader";
    case RoleKind::editor: return "editor";
    case RoleKind::revision: return "revision";
    }
    return "?";
}

AgentRole make_role_from_template(RoleKind kind, std::string template_text,
                                  const llm::EndpointConfig& endpoint,
                                  const llm::SamplingParams& params) {
    AgentRole role;
    role.kind = kind;
    role.endpoint = endpoint;
    role.params = params;
    role.layout = default_layout(kind);

    // split off a custom user template when the marker is present
    std::size_t pos = 0;
    std::size_t marker = std::string::npos;
    std::size_t marker_end = 0;
    while (pos < template_text.size()) {
        auto nl = template_text.find('\n', pos);
        const auto line_end = nl == std::string::npos ? template_text.size() : nl;
        std::string_view line(template_text.data() + pos, line_end - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line == kUserMarker) {
            marker = pos;
            marker_end = nl == std::string::npos ? template_text.size() : nl + 1;
            break;
        }
        if (nl == std::string::npos) {
            break;
        }
        pos = nl + 1;
    }
    if (marker != std::string::npos) {
        role.user_template = template_text.substr(marker_end);
        role.system_prompt = template_text.substr(0, marker);
        while (!role.system_prompt.empty() &&
               (role.system_prompt.back() == '\n' ||
                role.system_prompt.back() == '\r')) {
            role.system_prompt.pop_back();
        }
    } else {
        role.system_prompt = std::move(template_text);
    }
    if (role.system_prompt.empty()) {
        throw Error("PromptFileError", "empty prompt template for role " +
                                           role_kind_name(kind));
    }
    return role;
}

AgentRole make_role(RoleKind kind, const llm::EndpointConfig& endpoint,
                    const llm::SamplingParams& params,
                    const std::filesystem::path& prompts_dir) {
    return make_role_from_template(
        kind, read_file(prompts_dir / (role_kind_name(kind) + ".txt")),
        endpoint, params);
}

AgentRole without_field(AgentRole role, ContextField field) {
    std::erase_if(role.layout,
                  [&](const FieldSlot& s) { return s.field == field; });
    return role;
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("NEWSROOM_DATA_DIR");
        env != nullptr && *env != '\0') {
        return env;
    }
#ifdef NEWSROOM_DATA_DIR
    return NEWSROOM_DATA_DIR;
#else
    return "data";
#endif
}

namespace {

std::string render_default_user(const AgentRole& role, const RoleContext& ctx) {
    std::string out;
    for (const auto& slot : role.layout) {
        const auto& value = field_value(ctx, slot.field);
        const bool present = value.has_value() && !value->empty();
        if (!present) {
            if (slot.required) {
                throw MissingContext(field_name(slot.field));
            }
            continue;
        }
        if (!out.empty()) {
            out += "\n\n";
        }
        out += field_label(slot.field, role.kind) + "\n" + *value;
    }
    if (out.empty()) {
        throw MissingContext("user message would be empty");
    }
    return out;
}

std::string render_custom_user(const AgentRole& role, const RoleContext& ctx) {
    static constexpr ContextField kFields[] = {
        ContextField::demonstration, ContextField::paper_abstract,
        ContextField::article, ContextField::notes, ContextField::advice};
    std::string out = *role.user_template;
    for (const auto field : kFields) {
        const std::string placeholder = "{" + field_name(field) + "}";
        std::size_t pos = out.find(placeholder);
        if (pos == std::string::npos) {
            continue;
        }
        const auto& value = field_value(ctx, field);
        const bool present = value.has_value() && !value->empty();
        if (!present && field != ContextField::demonstration) {
            throw MissingContext(field_name(field));
        }
        const std::string replacement = present ? *value : "";
        while (pos != std::string::npos) {
            out.replace(pos, placeholder.size(), replacement);
            pos = out.find(placeholder, pos + replacement.size());
        }
    }
    return out;
}

} // namespace

std::vector<llm::ChatMessage> render_messages(const AgentRole& role,
                                              const RoleContext& ctx) {
    const std::string user = role.user_template.has_value()
                                 ? render_custom_user(role, ctx)
                                 : render_default_user(role, ctx);
    return {
        {llm::Role::system, role.system_prompt},
        {llm::Role::user, user},
    };
}

std::string invoke_role(const llm::ChatClient& client, const AgentRole& role,
                        const RoleContext& ctx, const llm::CallTag& tag) {
    const auto messages = render_messages(role, ctx);
    llm::CallTag full_tag = tag;
    if (full_tag.role.empty()) {
        full_tag.role = role_kind_name(role.kind);
    }
    const std::string role_note = "role=" + role_kind_name(role.kind) + ": ";
    try {
        return client.complete(role.endpoint, role.params, messages, full_tag);
    } catch (const llm::Timeout& e) {
        throw llm::Timeout(role_note + e.what());
    } catch (const llm::TransportError& e) {
        throw llm::TransportError(role_note + e.what());
    } catch (const llm::MalformedResponse& e) {
        throw llm::MalformedResponse(role_note + e.what());
    } catch (const llm::AuthError& e) {
        throw llm::AuthError(role_note + e.what());
    }
}

} // namespace newsroom::agents
