#pragma once

#include "pddlsim/sim_engine.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace pddlsim {

using json = nlohmann::json;

struct ToolDescriptor {
    std::string name;
    std::string description;
    json input_schema;
    json output_schema;
};

// The seven tools, in their canonical order.
const std::vector<ToolDescriptor>& describe_tools();

struct ToolResult {
    bool is_error = false;
    json payload; // structured result, or {error, message} when is_error
};

// Routes a tool call by name onto a session registry. Domain failures come
// back as in-band ToolResults, never as exceptions; only an unknown tool
// name throws (std::invalid_argument), since that is a protocol fault.
class ToolDispatcher {
public:
    explicit ToolDispatcher(SessionRegistry& registry) : registry_(registry) {}

    ToolResult call(const std::string& tool_name, const json& arguments);

private:
    std::string resolve_session(const json& arguments) const;

    SessionRegistry& registry_;
};

// Newline-delimited JSON-RPC 2.0 server speaking the MCP tool methods
// (`initialize`, `tools/list`, `tools/call`) over a stream pair.
class McpServer {
public:
    explicit McpServer(SessionRegistry& registry) : dispatcher_(registry) {}

    // Runs until the input stream closes.
    void serve(std::istream& in, std::ostream& out);

    // Handles one raw request line; returns the response line, or empty for
    // notifications.
    std::string handle_line(const std::string& line);

private:
    json handle_request(const json& request);

    ToolDispatcher dispatcher_;
};

} // namespace pddlsim
