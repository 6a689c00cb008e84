#pragma once

#include "pddlsim/llm_transport.hpp"
#include "pddlsim/pddl.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pddlsim {

enum class RunStatus { solved, timeout, early_exit, harness_error };

std::string to_string(RunStatus status);
std::optional<RunStatus> run_status_from_string(const std::string& text);

struct Outcome {
    RunStatus status = RunStatus::timeout;
    std::optional<std::vector<std::string>> plan;
    double wall_time_s = 0.0;
    long tokens_in = 0;
    long tokens_out = 0;
    bool tokens_estimated = false;
    int attempts = 0;
    int failed_action_attempts = 0; // agentic only
    std::string note;               // diagnostics, e.g. harness_error cause
};

struct AdapterPrompts {
    std::string direct_system;
    std::string agentic_system;
};

// Loads direct_system.txt / agentic_system.txt from a directory.
AdapterPrompts load_prompts(const std::string& directory);

// Sentinel an agentic model emits to declare the problem unsolvable.
inline constexpr const char* kUnsolvableSentinel = "UNSOLVABLE:";

// Generate-validate-retry with full context reset between attempts: prompt
// with domain+problem, parse the returned plan, validate; on failure
// re-prompt from scratch with no feedback.
Outcome solve_direct(ChatClient& client, const std::string& domain_text,
                     const std::string& problem_text, double budget_s,
                     const AdapterPrompts& prompts, double temperature = 0.2);

// Tool loop against the engine's seven tools: the model drives the session
// one call at a time, terminating on a confirmed validate_complete_plan,
// the unsolvable sentinel, or budget exhaustion. The final plan is read
// back from the action history and independently re-validated.
Outcome solve_agentic(ChatClient& client, const std::string& domain_text,
                      const std::string& problem_text, double budget_s,
                      const AdapterPrompts& prompts);

// External classical planner as a subprocess. `command_template` may use
// {domain}, {problem} and {plan_out} placeholders. When the planner emits
// numbered plan files (anytime behaviour), the highest-numbered complete
// one wins. Tokens are zero.
Outcome solve_external(const std::string& command_template, const std::string& domain_path,
                       const std::string& problem_path, double budget_s);

// Extracts a plan from free-form model output: prefers a fenced code block,
// otherwise collects every "(name args...)" line. Empty result means no
// plan found.
std::vector<std::string> extract_plan_from_text(const std::string& text);

} // namespace pddlsim
