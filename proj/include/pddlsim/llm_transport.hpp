#pragma once

#include "pddlsim/mcp_server.hpp"

#include <chrono>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace pddlsim {

struct UsageStats {
    long input_tokens = 0;
    long output_tokens = 0;
    bool estimated = false; // true when any contributing call lacked provider counts

    void add(const UsageStats& other) {
        input_tokens += other.input_tokens;
        output_tokens += other.output_tokens;
        estimated = estimated || other.estimated;
    }
};

struct ToolInvocation {
    std::string id;
    std::string name;
    json arguments;
};

struct ChatMessage {
    std::string role; // system | user | assistant | tool
    std::string content;
    std::vector<ToolInvocation> tool_calls; // assistant turns only
    std::string tool_call_id;               // tool turns only
};

struct ChatTurn {
    std::string content;
    std::vector<ToolInvocation> tool_calls;
    UsageStats usage;
};

class AuthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Provider-agnostic chat client. `deadline` bounds internal retries; a
// client must throw BudgetExceeded rather than return after it.
class ChatClient {
public:
    virtual ~ChatClient() = default;

    virtual ChatTurn complete(const std::vector<ChatMessage>& messages,
                              const std::vector<ToolDescriptor>* tools,
                              std::optional<double> temperature,
                              std::chrono::steady_clock::time_point deadline) = 0;
};

// Deterministic in-memory client for tests. Responses are served in order;
// running off the end throws (a test bug, never silence). With
// `loop_last = true` the final response repeats forever.
class ScriptedClient : public ChatClient {
public:
    ScriptedClient() = default;

    void push_text(std::string content, UsageStats usage = {100, 50, false});
    void push_tool_call(std::string name, json arguments, UsageStats usage = {100, 50, false});
    void set_loop_last(bool loop) { loop_last_ = loop; }

    std::size_t calls_served() const { return calls_served_; }

    ChatTurn complete(const std::vector<ChatMessage>& messages,
                      const std::vector<ToolDescriptor>* tools, std::optional<double> temperature,
                      std::chrono::steady_clock::time_point deadline) override;

private:
    std::deque<ChatTurn> script_;
    bool loop_last_ = false;
    std::size_t calls_served_ = 0;
};

// OpenAI-compatible chat-completions client over HTTPS. Token counts come
// from the provider's usage block; when absent, characters/4 with the
// estimated flag set. Transient failures retry with exponential backoff
// until the deadline.
class HttpChatClient : public ChatClient {
public:
    struct Options {
        std::string endpoint;            // e.g. "https://api.example.com"
        std::string path = "/v1/chat/completions";
        std::string model;
        std::string api_key_env = "LLM_API_KEY";
        int max_retries = 5;
    };

    explicit HttpChatClient(Options options);

    ChatTurn complete(const std::vector<ChatMessage>& messages,
                      const std::vector<ToolDescriptor>* tools, std::optional<double> temperature,
                      std::chrono::steady_clock::time_point deadline) override;

private:
    Options options_;
    std::string api_key_;
};

} // namespace pddlsim
