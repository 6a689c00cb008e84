#include "pddlsim/mcp_server.hpp"

#include "pddlsim/errors.hpp"
#include "pddlsim/validator.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace pddlsim {
namespace {

json session_id_property() {
    return json{{"type", "string"},
                {"description", "Session to operate on. May be omitted when exactly one "
                                "session exists."}};
}

json string_array_schema(const std::string& description) {
    return json{{"type", "array"}, {"items", json{{"type", "string"}}}, {"description", description}};
}

std::vector<ToolDescriptor> build_tools() {
    std::vector<ToolDescriptor> tools;

    tools.push_back(ToolDescriptor{
        "initialise_session",
        "Load a PDDL domain and problem (text or file path) and start a fresh simulation "
        "session at the problem's initial state. Returns the session id and size counts.",
        json{{"type", "object"},
             {"properties",
              json{{"domain", json{{"type", "string"},
                                   {"description", "PDDL domain text, or a path to a domain file."}}},
                   {"problem", json{{"type", "string"},
                                    {"description", "PDDL problem text, or a path to a problem file."}}},
                   {"session_id", session_id_property()}}},
             {"required", json::array({"domain", "problem"})}},
        json{{"type", "object"},
             {"properties",
              json{{"session_id", json{{"type", "string"}}},
                   {"object_count", json{{"type", "integer"}}},
                   {"init_atom_count", json{{"type", "integer"}}},
                   {"goal_literal_count", json{{"type", "integer"}}},
                   {"ground_action_count", json{{"type", "integer"}}}}},
             {"required", json::array({"session_id", "object_count", "init_atom_count",
                                       "goal_literal_count", "ground_action_count"})}}});

    tools.push_back(ToolDescriptor{
        "query_current_state",
        "Return every ground atom currently true in the session (atoms not listed are "
        "false), plus whether the goal is already satisfied.",
        json{{"type", "object"},
             {"properties", json{{"session_id", session_id_property()}}}},
        json{{"type", "object"},
             {"properties",
              json{{"atoms", string_array_schema("True atoms, sorted, e.g. \"(clear a)\".")},
                   {"goal_reached", json{{"type", "boolean"}}}}},
             {"required", json::array({"atoms", "goal_reached"})}}});

    tools.push_back(ToolDescriptor{
        "query_applicable_actions",
        "List every ground action whose preconditions hold in the current state.",
        json{{"type", "object"},
             {"properties", json{{"session_id", session_id_property()}}}},
        json{{"type", "object"},
             {"properties",
              json{{"actions", string_array_schema("Applicable actions, sorted, e.g. \"(pick-up a)\".")}}},
             {"required", json::array({"actions"})}}});

    tools.push_back(ToolDescriptor{
        "execute_single_action",
        "Apply one ground action. If its preconditions hold the state advances; otherwise "
        "the state is unchanged, applied is false, and message names the unsatisfied "
        "preconditions.",
        json{{"type", "object"},
             {"properties",
              json{{"session_id", session_id_property()},
                   {"action", json{{"type", "string"},
                                   {"description", "Action signature, e.g. \"(stack a b)\"."}}}}},
             {"required", json::array({"action"})}},
        json{{"type", "object"},
             {"properties",
              json{{"applied", json{{"type", "boolean"}}},
                   {"state", string_array_schema("True atoms after the call.")},
                   {"goal_reached", json{{"type", "boolean"}}},
                   {"message", json{{"type", "string"}}}}},
             {"required", json::array({"applied", "state", "goal_reached", "message"})}}});

    tools.push_back(ToolDescriptor{
        "reset_to_initial_state",
        "Restore the session to the problem's initial state and clear the action history.",
        json{{"type", "object"},
             {"properties", json{{"session_id", session_id_property()}}}},
        json{{"type", "object"},
             {"properties",
              json{{"state", string_array_schema("True atoms after the reset.")},
                   {"goal_reached", json{{"type", "boolean"}}}}},
             {"required", json::array({"state", "goal_reached"})}}});

    tools.push_back(ToolDescriptor{
        "query_action_history",
        "Return the actions successfully executed in this session, in order. Rejected "
        "actions are not recorded.",
        json{{"type", "object"},
             {"properties", json{{"session_id", session_id_property()}}}},
        json{{"type", "object"},
             {"properties",
              json{{"history",
                    json{{"type", "array"},
                         {"items", json{{"type", "object"},
                                        {"properties",
                                         json{{"step", json{{"type", "integer"}}},
                                              {"action", json{{"type", "string"}}}}},
                                        {"required", json::array({"step", "action"})}}}}}}},
             {"required", json::array({"history"})}}});

    tools.push_back(ToolDescriptor{
        "validate_complete_plan",
        "Check a complete action sequence against the session's problem, without touching "
        "the session state. Reports the first failing step, final state, and goal status.",
        json{{"type", "object"},
             {"properties",
              json{{"session_id", session_id_property()},
                   {"plan", string_array_schema("Action signatures, one per entry.")}}},
             {"required", json::array({"plan"})}},
        json{{"type", "object"},
             {"properties",
              json{{"valid", json{{"type", "boolean"}}},
                   {"steps_applied", json{{"type", "integer"}}},
                   {"plan_length", json{{"type", "integer"}}},
                   {"goal_satisfied", json{{"type", "boolean"}}},
                   {"failing_step",
                    json{{"type", json::array({"object", "null"})},
                         {"properties",
                          json{{"index", json{{"type", "integer"}}},
                               {"action", json{{"type", "string"}}},
                               {"unsatisfied", string_array_schema("Preconditions not holding.")}}}}},
                   {"final_state", string_array_schema("True atoms after the applied prefix.")}}},
             {"required", json::array({"valid", "steps_applied", "plan_length", "goal_satisfied",
                                       "final_state"})}}});

    return tools;
}

json atoms_to_json(const std::vector<Atom>& atoms) {
    json arr = json::array();
    for (const auto& atom : atoms) arr.push_back(atom.str());
    return arr;
}

json state_to_json(const State& state) {
    return atoms_to_json({state.begin(), state.end()});
}

// Canonicalises an action signature coming off the wire: lowercase,
// single-spaced, parenthesised.
std::string normalise_signature(const std::string& raw) {
    std::string text = raw;
    if (text.find('(') == std::string::npos) text = "(" + text + ")";
    auto parsed = parse_plan(text);
    if (parsed.size() != 1) throw SyntaxError(1, 1, "a single action signature");
    return parsed.front();
}

const json& require_arg(const json& arguments, const char* name, json::value_t type) {
    auto it = arguments.find(name);
    if (it == arguments.end())
        throw std::invalid_argument(std::string("missing required argument '") + name + "'");
    if (it->type() != type &&
        !(type == json::value_t::string && it->is_string()))
        throw std::invalid_argument(std::string("argument '") + name + "' has the wrong type");
    return *it;
}

} // namespace

const std::vector<ToolDescriptor>& describe_tools() {
    static const std::vector<ToolDescriptor> tools = build_tools();
    return tools;
}

std::string ToolDispatcher::resolve_session(const json& arguments) const {
    if (arguments.contains("session_id")) {
        const json& id = arguments["session_id"];
        if (!id.is_string()) throw std::invalid_argument("session_id must be a string");
        return id.get<std::string>();
    }
    if (auto sole = registry_.sole_session_id()) return *sole;
    if (registry_.session_count() == 0)
        throw UnknownSessionError("(none: no session initialised)");
    throw std::invalid_argument("session_id is required when several sessions exist");
}

ToolResult ToolDispatcher::call(const std::string& tool_name, const json& arguments) {
    try {
        if (tool_name == "initialise_session") {
            const std::string domain = require_arg(arguments, "domain", json::value_t::string);
            const std::string problem = require_arg(arguments, "problem", json::value_t::string);
            std::optional<std::string> id;
            if (arguments.contains("session_id"))
                id = arguments["session_id"].get<std::string>();
            SessionSummary summary = registry_.initialise(domain, problem, id);
            return {false, json{{"session_id", summary.id},
                                {"object_count", summary.object_count},
                                {"init_atom_count", summary.init_atom_count},
                                {"goal_literal_count", summary.goal_literal_count},
                                {"ground_action_count", summary.ground_action_count}}};
        }
        if (tool_name == "query_current_state") {
            auto [atoms, goal] = registry_.query_current_state(resolve_session(arguments));
            return {false, json{{"atoms", atoms_to_json(atoms)}, {"goal_reached", goal}}};
        }
        if (tool_name == "query_applicable_actions") {
            auto actions = registry_.query_applicable_actions(resolve_session(arguments));
            return {false, json{{"actions", actions}}};
        }
        if (tool_name == "execute_single_action") {
            const std::string action =
                normalise_signature(require_arg(arguments, "action", json::value_t::string));
            StepResult step = registry_.execute_single_action(resolve_session(arguments), action);
            return {false, json{{"applied", step.applied},
                                {"state", state_to_json(step.state)},
                                {"goal_reached", step.goal_reached},
                                {"message", step.message}}};
        }
        if (tool_name == "reset_to_initial_state") {
            auto [atoms, goal] = registry_.reset_to_initial_state(resolve_session(arguments));
            return {false, json{{"state", atoms_to_json(atoms)}, {"goal_reached", goal}}};
        }
        if (tool_name == "query_action_history") {
            auto history = registry_.query_action_history(resolve_session(arguments));
            json items = json::array();
            for (const auto& [step, action] : history)
                items.push_back(json{{"step", step}, {"action", action}});
            return {false, json{{"history", items}}};
        }
        if (tool_name == "validate_complete_plan") {
            const json& plan_json = require_arg(arguments, "plan", json::value_t::array);
            std::vector<std::string> plan;
            for (const auto& entry : plan_json) {
                if (!entry.is_string())
                    throw std::invalid_argument("plan entries must be strings");
                plan.push_back(normalise_signature(entry.get<std::string>()));
            }
            const Session& session = registry_.session(resolve_session(arguments));
            ValidationReport report = validate_plan(session.problem(), session.grounded(), plan);
            json failing = nullptr;
            if (report.failing_step)
                failing = json{{"index", report.failing_step->index},
                               {"action", report.failing_step->signature},
                               {"unsatisfied", report.failing_step->unsatisfied}};
            return {false, json{{"valid", report.valid},
                                {"steps_applied", report.steps_applied},
                                {"plan_length", report.plan_length},
                                {"goal_satisfied", report.goal_satisfied},
                                {"failing_step", failing},
                                {"final_state", state_to_json(report.final_state)}}};
        }
        throw std::invalid_argument("unknown tool: " + tool_name);
    } catch (const PddlError& e) {
        return {true, json{{"error", e.code()}, {"message", e.what()}}};
    } catch (const std::invalid_argument&) {
        throw; // protocol-level; handled by the caller
    } catch (const std::exception& e) {
        return {true, json{{"error", "internal_error"}, {"message", e.what()}}};
    }
}

json McpServer::handle_request(const json& request) {
    json id = request.contains("id") ? request["id"] : json();
    auto error_response = [&](int code, const std::string& message) {
        return json{{"jsonrpc", "2.0"}, {"id", id}, {"error", json{{"code", code}, {"message", message}}}};
    };

    if (!request.is_object() || !request.contains("method") || !request["method"].is_string())
        return error_response(-32600, "invalid request");
    const std::string method = request["method"].get<std::string>();

    if (method == "initialize") {
        return json{{"jsonrpc", "2.0"},
                    {"id", id},
                    {"result",
                     json{{"protocolVersion", "2024-11-05"},
                          {"capabilities", json{{"tools", json::object()}}},
                          {"serverInfo", json{{"name", "pddlsim"}, {"version", "0.1.0"}}}}}};
    }
    if (method == "tools/list") {
        json tools = json::array();
        for (const auto& tool : describe_tools())
            tools.push_back(json{{"name", tool.name},
                                 {"description", tool.description},
                                 {"inputSchema", tool.input_schema},
                                 {"outputSchema", tool.output_schema}});
        return json{{"jsonrpc", "2.0"}, {"id", id}, {"result", json{{"tools", tools}}}};
    }
    if (method == "tools/call") {
        if (!request.contains("params") || !request["params"].is_object() ||
            !request["params"].contains("name") || !request["params"]["name"].is_string())
            return error_response(-32602, "tools/call requires params.name");
        const std::string name = request["params"]["name"].get<std::string>();
        json arguments = request["params"].value("arguments", json::object());
        if (!arguments.is_object()) return error_response(-32602, "params.arguments must be an object");
        try {
            ToolResult result = dispatcher_.call(name, arguments);
            json content = json::array(
                {json{{"type", "text"}, {"text", result.payload.dump()}}});
            return json{{"jsonrpc", "2.0"},
                        {"id", id},
                        {"result", json{{"content", content},
                                        {"structuredContent", result.payload},
                                        {"isError", result.is_error}}}};
        } catch (const std::invalid_argument& e) {
            return error_response(-32602, e.what());
        }
    }
    if (method.rfind("notifications/", 0) == 0) return json(); // acknowledged silently
    return error_response(-32601, "method not found: " + method);
}

std::string McpServer::handle_line(const std::string& line) {
    json request = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (request.is_discarded()) {
        json response{{"jsonrpc", "2.0"},
                      {"id", nullptr},
                      {"error", json{{"code", -32700}, {"message", "parse error"}}}};
        return response.dump();
    }
    const bool is_notification = !request.contains("id");
    json response = handle_request(request);
    if (is_notification || response.is_null()) return {};
    return response.dump();
}

void McpServer::serve(std::istream& in, std::ostream& out) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::string response = handle_line(line);
        if (!response.empty()) {
            out << response << "\n";
            out.flush();
        }
    }
}

} // namespace pddlsim
