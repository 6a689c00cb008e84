#include "pddlsim/llm_transport.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace pddlsim {

void ScriptedClient::push_text(std::string content, UsageStats usage) {
    ChatTurn turn;
    turn.content = std::move(content);
    turn.usage = usage;
    script_.push_back(std::move(turn));
}

void ScriptedClient::push_tool_call(std::string name, json arguments, UsageStats usage) {
    ChatTurn turn;
    turn.tool_calls.push_back(
        ToolInvocation{"call-" + std::to_string(script_.size()), std::move(name), std::move(arguments)});
    turn.usage = usage;
    script_.push_back(std::move(turn));
}

ChatTurn ScriptedClient::complete(const std::vector<ChatMessage>& messages,
                                  const std::vector<ToolDescriptor>*, std::optional<double>,
                                  std::chrono::steady_clock::time_point deadline) {
    if (messages.empty()) throw std::invalid_argument("messages must be nonempty");
    if (std::chrono::steady_clock::now() >= deadline)
        throw BudgetExceeded("scripted client called past the deadline");
    if (script_.empty())
        throw std::logic_error("scripted client exhausted: no response left for this call");
    ++calls_served_;
    if (script_.size() == 1 && loop_last_) return script_.front();
    ChatTurn turn = std::move(script_.front());
    script_.pop_front();
    return turn;
}

namespace {

long estimate_tokens(const std::string& text) {
    return static_cast<long>(text.size() / 4);
}

json messages_to_json(const std::vector<ChatMessage>& messages) {
    json arr = json::array();
    for (const auto& m : messages) {
        json msg{{"role", m.role}, {"content", m.content}};
        if (!m.tool_calls.empty()) {
            json calls = json::array();
            for (const auto& call : m.tool_calls)
                calls.push_back(json{{"id", call.id},
                                     {"type", "function"},
                                     {"function", json{{"name", call.name},
                                                       {"arguments", call.arguments.dump()}}}});
            msg["tool_calls"] = calls;
        }
        if (!m.tool_call_id.empty()) msg["tool_call_id"] = m.tool_call_id;
        arr.push_back(std::move(msg));
    }
    return arr;
}

} // namespace

HttpChatClient::HttpChatClient(Options options) : options_(std::move(options)) {
    const char* key = std::getenv(options_.api_key_env.c_str());
    if (!key || !*key)
        throw AuthError("environment variable " + options_.api_key_env + " is not set");
    api_key_ = key;
}

ChatTurn HttpChatClient::complete(const std::vector<ChatMessage>& messages,
                                  const std::vector<ToolDescriptor>* tools,
                                  std::optional<double> temperature,
                                  std::chrono::steady_clock::time_point deadline) {
    if (messages.empty()) throw std::invalid_argument("messages must be nonempty");

    json body{{"model", options_.model}, {"messages", messages_to_json(messages)}};
    if (temperature) body["temperature"] = *temperature;
    if (tools && !tools->empty()) {
        json tool_arr = json::array();
        for (const auto& tool : *tools)
            tool_arr.push_back(json{{"type", "function"},
                                    {"function", json{{"name", tool.name},
                                                      {"description", tool.description},
                                                      {"parameters", tool.input_schema}}}});
        body["tools"] = tool_arr;
    }
    const std::string payload = body.dump();

    auto backoff = std::chrono::milliseconds(500);
    for (int attempt = 0;; ++attempt) {
        if (std::chrono::steady_clock::now() >= deadline)
            throw BudgetExceeded("wall-clock budget exhausted before the call completed");

        httplib::Client client(options_.endpoint);
        client.set_read_timeout(120, 0);
        httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
        auto response = client.Post(options_.path, headers, payload, "application/json");

        if (response) {
            if (response->status == 401 || response->status == 403)
                throw AuthError("provider rejected credentials (HTTP " +
                                std::to_string(response->status) + ")");
            if (response->status == 200) {
                json parsed = json::parse(response->body, nullptr, false);
                if (!parsed.is_discarded() && parsed.contains("choices") &&
                    !parsed["choices"].empty()) {
                    const json& message = parsed["choices"][0]["message"];
                    ChatTurn turn;
                    if (message.contains("content") && message["content"].is_string())
                        turn.content = message["content"].get<std::string>();
                    if (message.contains("tool_calls")) {
                        for (const auto& call : message["tool_calls"]) {
                            ToolInvocation inv;
                            inv.id = call.value("id", "");
                            inv.name = call["function"].value("name", "");
                            std::string args = call["function"].value("arguments", "{}");
                            inv.arguments = json::parse(args, nullptr, false);
                            if (inv.arguments.is_discarded()) inv.arguments = json::object();
                            turn.tool_calls.push_back(std::move(inv));
                        }
                    }
                    if (parsed.contains("usage") && parsed["usage"].contains("prompt_tokens")) {
                        turn.usage.input_tokens = parsed["usage"]["prompt_tokens"].get<long>();
                        turn.usage.output_tokens =
                            parsed["usage"].value("completion_tokens", 0L);
                    } else {
                        turn.usage.input_tokens = estimate_tokens(payload);
                        turn.usage.output_tokens = estimate_tokens(turn.content);
                        turn.usage.estimated = true;
                    }
                    return turn;
                }
            }
        }

        if (attempt >= options_.max_retries)
            throw std::runtime_error("chat completion failed after " +
                                     std::to_string(attempt + 1) + " attempts");
        auto remaining = deadline - std::chrono::steady_clock::now();
        if (remaining <= backoff) throw BudgetExceeded("budget exhausted during retry backoff");
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
    }
}

} // namespace pddlsim
