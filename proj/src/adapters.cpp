#include "pddlsim/adapters.hpp"

#include "pddlsim/errors.hpp"
#include "pddlsim/sim_engine.hpp"
#include "pddlsim/validator.hpp"

#include <sys/types.h>
#include <sys/wait.h>

#include <csignal>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace pddlsim {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::solved: return "solved";
        case RunStatus::timeout: return "timeout";
        case RunStatus::early_exit: return "early_exit";
        case RunStatus::harness_error: return "harness_error";
    }
    return "unknown";
}

std::optional<RunStatus> run_status_from_string(const std::string& text) {
    if (text == "solved") return RunStatus::solved;
    if (text == "timeout") return RunStatus::timeout;
    if (text == "early_exit") return RunStatus::early_exit;
    if (text == "harness_error") return RunStatus::harness_error;
    return std::nullopt;
}

AdapterPrompts load_prompts(const std::string& directory) {
    auto read = [&](const char* name) {
        std::ifstream in(fs::path(directory) / name);
        if (!in) throw PddlError("io_error", std::string("cannot read prompt asset: ") + name);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    return AdapterPrompts{read("direct_system.txt"), read("agentic_system.txt")};
}

std::vector<std::string> extract_plan_from_text(const std::string& text) {
    // Prefer the last fenced block; the prompt asks for exactly one.
    std::string body;
    std::size_t fence = text.rfind("```");
    if (fence != std::string::npos) {
        std::size_t open = text.rfind("```", fence == 0 ? 0 : fence - 1);
        if (open != std::string::npos && open < fence) {
            std::size_t start = text.find('\n', open);
            if (start != std::string::npos && start < fence)
                body = text.substr(start + 1, fence - start - 1);
        }
    }
    if (body.empty()) body = text;

    std::vector<std::string> plan;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] != '(') continue;
        try {
            auto parsed = parse_plan(line);
            plan.insert(plan.end(), parsed.begin(), parsed.end());
        } catch (const SyntaxError&) {
            // prose containing parentheses; skip the line
        }
    }
    return plan;
}

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

Outcome solve_direct(ChatClient& client, const std::string& domain_text,
                     const std::string& problem_text, double budget_s,
                     const AdapterPrompts& prompts, double temperature) {
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(budget_s));

    Outcome outcome;
    Domain domain = parse_domain(domain_text);
    Problem problem = parse_problem(problem_text, domain);
    const std::vector<GroundAction> grounded = ground(domain, problem);

    const std::string user_prompt =
        "Solve this PDDL planning problem.\n\nDomain:\n" + domain_text + "\nProblem:\n" +
        problem_text +
        "\nReturn the complete plan as a fenced code block with exactly one action per line, "
        "each in the form (action-name arg1 ... argk), lowercase.";

    UsageStats usage;
    while (Clock::now() < deadline) {
        ++outcome.attempts;
        // Context is rebuilt from scratch every attempt: no failure feedback.
        std::vector<ChatMessage> messages{{"system", prompts.direct_system},
                                          {"user", user_prompt}};
        ChatTurn turn;
        try {
            turn = client.complete(messages, nullptr, temperature, deadline);
        } catch (const BudgetExceeded&) {
            break;
        }
        usage.add(turn.usage);

        std::vector<std::string> plan = extract_plan_from_text(turn.content);
        if (plan.empty()) continue;
        try {
            if (validate_plan(problem, grounded, plan).valid) {
                outcome.status = RunStatus::solved;
                outcome.plan = std::move(plan);
                break;
            }
        } catch (const UnknownActionError&) {
            // hallucinated action; the attempt simply fails
        }
    }

    outcome.wall_time_s = seconds_since(start);
    outcome.tokens_in = usage.input_tokens;
    outcome.tokens_out = usage.output_tokens;
    outcome.tokens_estimated = usage.estimated;
    return outcome;
}

Outcome solve_agentic(ChatClient& client, const std::string& domain_text,
                      const std::string& problem_text, double budget_s,
                      const AdapterPrompts& prompts) {
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(budget_s));

    Outcome outcome;
    outcome.attempts = 1;

    SessionRegistry registry;
    ToolDispatcher dispatcher(registry);
    SessionSummary summary;
    try {
        summary = registry.initialise(domain_text, problem_text);
    } catch (const PddlError& e) {
        outcome.status = RunStatus::harness_error;
        outcome.note = e.what();
        outcome.wall_time_s = seconds_since(start);
        return outcome;
    }

    std::set<std::string> tool_names;
    for (const auto& tool : describe_tools()) tool_names.insert(tool.name);

    std::vector<ChatMessage> messages{
        {"system", prompts.agentic_system},
        {"user", "A simulation session is already initialised (session_id \"" + summary.id +
                     "\") for the planning problem below. Use the tools to reach the goal, then "
                     "confirm with validate_complete_plan.\n\nDomain:\n" + domain_text +
                     "\nProblem:\n" + problem_text}};

    UsageStats usage;
    auto finish = [&](RunStatus status) {
        outcome.status = status;
        outcome.wall_time_s = seconds_since(start);
        outcome.tokens_in = usage.input_tokens;
        outcome.tokens_out = usage.output_tokens;
        outcome.tokens_estimated = usage.estimated;
        return outcome;
    };

    while (Clock::now() < deadline) {
        ChatTurn turn;
        try {
            turn = client.complete(messages, &describe_tools(), std::nullopt, deadline);
        } catch (const BudgetExceeded&) {
            return finish(RunStatus::timeout);
        }
        usage.add(turn.usage);

        if (turn.tool_calls.empty()) {
            if (turn.content.rfind(kUnsolvableSentinel, 0) == 0)
                return finish(RunStatus::early_exit);
            ChatMessage assistant{"assistant", turn.content};
            messages.push_back(assistant);
            messages.push_back({"user", "Continue with the tools, or reply starting with "
                                        "\"UNSOLVABLE:\" if you believe no plan exists."});
            continue;
        }

        ChatMessage assistant{"assistant", turn.content};
        assistant.tool_calls = turn.tool_calls;
        messages.push_back(assistant);

        for (const auto& call : turn.tool_calls) {
            json payload;
            if (!tool_names.count(call.name)) {
                payload = json{{"error", "unknown_tool"},
                               {"message", "no tool named '" + call.name +
                                               "'; available tools are listed in your context"}};
            } else {
                try {
                    json arguments = call.arguments.is_object() ? call.arguments : json::object();
                    ToolResult result = dispatcher.call(call.name, arguments);
                    payload = result.payload;
                    if (result.is_error) payload["is_error"] = true;
                    if (!result.is_error && call.name == "execute_single_action" &&
                        !payload.value("applied", true))
                        ++outcome.failed_action_attempts;
                    if (!result.is_error && call.name == "reset_to_initial_state")
                        ++outcome.attempts;

                    if (!result.is_error && call.name == "validate_complete_plan" &&
                        payload.value("valid", false)) {
                        // Recover the plan from the session history and
                        // re-validate it independently of the tool path.
                        std::vector<std::string> plan;
                        for (const auto& [step, sig] : registry.query_action_history(summary.id))
                            plan.push_back(sig);
                        const Session& session = registry.session(summary.id);
                        if (validate_plan(session.problem(), session.grounded(), plan).valid) {
                            outcome.plan = std::move(plan);
                            return finish(RunStatus::solved);
                        }
                        // Model validated a plan it never executed; accept
                        // the submitted plan since the validator passed it.
                        std::vector<std::string> submitted;
                        for (const auto& entry : call.arguments.value("plan", json::array()))
                            if (entry.is_string()) submitted.push_back(entry.get<std::string>());
                        outcome.plan = std::move(submitted);
                        outcome.note = "plan taken from validate_complete_plan arguments; "
                                       "session history did not reach the goal";
                        return finish(RunStatus::solved);
                    }
                } catch (const std::invalid_argument& e) {
                    payload = json{{"error", "invalid_arguments"}, {"message", e.what()}};
                }
            }
            ChatMessage tool_msg{"tool", payload.dump()};
            tool_msg.tool_call_id = call.id;
            messages.push_back(std::move(tool_msg));
        }
    }
    return finish(RunStatus::timeout);
}

Outcome solve_external(const std::string& command_template, const std::string& domain_path,
                       const std::string& problem_path, double budget_s) {
    const auto start = Clock::now();
    Outcome outcome;

    fs::path plan_out = fs::temp_directory_path() /
                        ("pddlsim-plan-" + std::to_string(::getpid()) + "-" +
                         std::to_string(Clock::now().time_since_epoch().count()));

    std::string command = command_template;
    auto replace_all = [&](const std::string& key, const std::string& value) {
        for (std::size_t pos = command.find(key); pos != std::string::npos;
             pos = command.find(key, pos + value.size()))
            command.replace(pos, key.size(), value);
    };
    replace_all("{domain}", domain_path);
    replace_all("{problem}", problem_path);
    replace_all("{plan_out}", plan_out.string());

    pid_t pid = ::fork();
    if (pid < 0) {
        outcome.status = RunStatus::harness_error;
        outcome.note = "fork failed";
        return outcome;
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
        ::_exit(127);
    }
    ::setpgid(pid, pid);

    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(budget_s));
    int wait_status = 0;
    bool exited = false;
    bool killed = false;
    for (;;) {
        pid_t done = ::waitpid(pid, &wait_status, WNOHANG);
        if (done == pid) {
            exited = true;
            break;
        }
        if (Clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &wait_status, 0);
            killed = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    outcome.wall_time_s = seconds_since(start);

    // Anytime planners write plan_out, plan_out.1, plan_out.2, ...; the
    // highest-numbered complete file is the final answer.
    fs::path chosen;
    int best_suffix = -1;
    std::error_code ec;
    if (fs::exists(plan_out, ec)) {
        chosen = plan_out;
        best_suffix = 0;
    }
    for (int i = 1; i <= 1000; ++i) {
        fs::path candidate = plan_out;
        candidate += "." + std::to_string(i);
        if (fs::exists(candidate, ec)) {
            chosen = candidate;
            best_suffix = i;
        } else if (best_suffix >= 1) {
            break;
        }
    }

    auto cleanup = [&]() {
        fs::remove(plan_out, ec);
        for (int i = 1; i <= best_suffix; ++i) {
            fs::path candidate = plan_out;
            candidate += "." + std::to_string(i);
            fs::remove(candidate, ec);
        }
    };

    if (chosen.empty()) {
        outcome.status = RunStatus::timeout;
        if (!killed && exited && WIFEXITED(wait_status) && WEXITSTATUS(wait_status) != 0)
            outcome.note = "planner exited with status " +
                           std::to_string(WEXITSTATUS(wait_status)) + " and no plan";
        cleanup();
        return outcome;
    }

    try {
        std::ifstream in(chosen);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::vector<std::string> plan = parse_plan(buf.str());

        Domain domain = parse_domain(load_source(domain_path));
        Problem problem = parse_problem(load_source(problem_path), domain);
        if (!validate_plan(domain, problem, plan).valid) {
            outcome.status = RunStatus::harness_error;
            outcome.note = "planner emitted a plan that fails validation: " + chosen.string();
        } else {
            outcome.status = RunStatus::solved;
            outcome.plan = std::move(plan);
        }
    } catch (const PddlError& e) {
        outcome.status = RunStatus::harness_error;
        outcome.note = std::string("planner output unusable: ") + e.what();
    }
    cleanup();
    return outcome;
}

} // namespace pddlsim
