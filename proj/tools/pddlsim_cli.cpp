#include "pddlsim/adapters.hpp"
#include "pddlsim/errors.hpp"
#include "pddlsim/harness.hpp"
#include "pddlsim/mcp_server.hpp"
#include "pddlsim/oracle.hpp"
#include "pddlsim/validator.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace pddlsim;

constexpr int kExitOk = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitUsage = 2;

// Plain key=value config with ${VAR} environment interpolation, so secrets
// stay out of checked-in files.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> config;
    if (path.empty()) return config;
    std::ifstream in(path);
    if (!in) throw PddlError("io_error", "cannot read config: " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw PddlError("io_error", "config line is not key=value: " + line);
        std::string key = line.substr(first, eq - first);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        std::string value = line.substr(eq + 1);
        auto vfirst = value.find_first_not_of(" \t");
        value = vfirst == std::string::npos ? "" : value.substr(vfirst);
        while (!value.empty() && (value.back() == ' ' || value.back() == '\t' || value.back() == '\r'))
            value.pop_back();

        for (auto open = value.find("${"); open != std::string::npos; open = value.find("${")) {
            auto close = value.find('}', open);
            if (close == std::string::npos)
                throw PddlError("io_error", "unterminated ${...} in config value: " + value);
            std::string var = value.substr(open + 2, close - open - 2);
            const char* resolved = std::getenv(var.c_str());
            value.replace(open, close - open + 1, resolved ? resolved : "");
        }
        config[key] = value;
    }
    return config;
}

void print_state(const State& state) {
    for (const auto& atom : state) std::cout << "  " << atom.str() << "\n";
}

int cmd_parse(const std::string& domain_path, const std::string& problem_path) {
    Domain domain = parse_domain(load_source(domain_path));
    std::cout << "domain " << domain.name << ": " << domain.predicates.size() << " predicates, "
              << domain.actions.size() << " actions, " << domain.types.size() << " types\n";
    if (!problem_path.empty()) {
        Problem problem = parse_problem(load_source(problem_path), domain);
        std::cout << "problem " << problem.name << ": " << problem.objects.size() << " objects, "
                  << problem.init.size() << " init atoms, " << problem.goal.size()
                  << " goal literals\n";
    }
    return kExitOk;
}

int cmd_ground(const std::string& domain_path, const std::string& problem_path, bool list) {
    Domain domain = parse_domain(load_source(domain_path));
    Problem problem = parse_problem(load_source(problem_path), domain);
    auto grounded = ground(domain, problem);
    std::cout << grounded.size() << " ground actions\n";
    if (list)
        for (const auto& ga : grounded) std::cout << ga.signature << "\n";
    return kExitOk;
}

int cmd_validate(const std::string& domain_path, const std::string& problem_path,
                 const std::string& plan_path) {
    Domain domain = parse_domain(load_source(domain_path));
    Problem problem = parse_problem(load_source(problem_path), domain);
    std::ifstream in(plan_path);
    if (!in) throw PddlError("io_error", "cannot read plan file: " + plan_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto plan = parse_plan(buf.str());

    ValidationReport report = validate_plan(domain, problem, plan);
    std::cout << "plan length: " << report.plan_length << "\n";
    std::cout << "steps applied: " << report.steps_applied << "\n";
    if (report.failing_step) {
        std::cout << "failing step " << report.failing_step->index << ": "
                  << report.failing_step->signature << "\n";
        for (const auto& lit : report.failing_step->unsatisfied)
            std::cout << "  unsatisfied: " << lit << "\n";
    }
    std::cout << "goal satisfied: " << (report.goal_satisfied ? "yes" : "no") << "\n";
    std::cout << (report.valid ? "VALID" : "INVALID") << "\n";
    return report.valid ? kExitOk : kExitDomainFailure;
}

int cmd_solve(const std::string& domain_path, const std::string& problem_path, bool greedy,
              std::size_t node_budget) {
    Domain domain = parse_domain(load_source(domain_path));
    Problem problem = parse_problem(load_source(problem_path), domain);
    SearchResult result = greedy ? solve_greedy(domain, problem, node_budget)
                                 : solve_optimal(domain, problem, node_budget);
    std::cerr << "nodes expanded: " << result.nodes_expanded << "\n";
    if (!result.plan) {
        std::cout << (result.exhausted ? "no plan within node budget" : "no plan exists") << "\n";
        return kExitDomainFailure;
    }
    std::cout << serialize_plan(*result.plan);
    return kExitOk;
}

AdapterFn make_adapter(const std::string& name,
                       const std::map<std::string, std::string>& config) {
    if (name == "oracle-optimal" || name == "oracle-greedy") {
        bool greedy = name == "oracle-greedy";
        return [greedy](const std::string& dom, const std::string& prob, double) {
            auto start = std::chrono::steady_clock::now();
            Outcome outcome;
            Domain domain = parse_domain(load_source(dom));
            Problem problem = parse_problem(load_source(prob), domain);
            SearchResult result =
                greedy ? solve_greedy(domain, problem) : solve_optimal(domain, problem);
            outcome.attempts = 1;
            if (result.plan) {
                outcome.status = RunStatus::solved;
                outcome.plan = result.plan;
            } else {
                outcome.status = RunStatus::timeout;
            }
            outcome.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return outcome;
        };
    }
    if (name.rfind("external:", 0) == 0) {
        std::string key = "planner." + name.substr(9);
        auto it = config.find(key);
        if (it == config.end())
            throw PddlError("io_error", "config key missing for adapter: " + key);
        std::string command = it->second;
        return [command](const std::string& dom, const std::string& prob, double budget) {
            return solve_external(command, dom, prob, budget);
        };
    }
    if (name == "direct-llm" || name == "agentic-llm") {
        HttpChatClient::Options options;
        auto get = [&](const char* key, const char* fallback) {
            auto it = config.find(key);
            return it != config.end() ? it->second : std::string(fallback);
        };
        options.endpoint = get("llm_endpoint", "");
        options.model = get("llm_model", "");
        options.api_key_env = get("llm_api_key_env", "LLM_API_KEY");
        if (options.endpoint.empty() || options.model.empty())
            throw PddlError("io_error", "llm_endpoint and llm_model must be set in the config");
        AdapterPrompts prompts = load_prompts(get("prompts_dir", "data/prompts"));
        bool agentic = name == "agentic-llm";
        return [options, prompts, agentic](const std::string& dom, const std::string& prob,
                                           double budget) {
            HttpChatClient client(options);
            std::string domain_text = load_source(dom);
            std::string problem_text = load_source(prob);
            return agentic ? solve_agentic(client, domain_text, problem_text, budget, prompts)
                           : solve_direct(client, domain_text, problem_text, budget, prompts);
        };
    }
    throw PddlError("io_error", "unknown adapter: " + name);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"STRIPS planning simulator, validator, MCP server and benchmark harness"};
    app.require_subcommand(1);

    std::string domain_path, problem_path, plan_path, manifest_path, log_path, config_path;
    std::string difficulty_key;
    std::vector<std::string> adapter_names, hard_ids;
    bool greedy = false, optimal = false, list_actions = false;
    double budget = 180.0;
    unsigned parallelism = 1;
    std::size_t node_budget = kDefaultNodeBudget;

    auto* parse_cmd = app.add_subcommand("parse", "Parse a domain (and optionally a problem)");
    parse_cmd->add_option("domain", domain_path)->required();
    parse_cmd->add_option("problem", problem_path);

    auto* ground_cmd = app.add_subcommand("ground", "Ground a domain/problem pair");
    ground_cmd->add_option("domain", domain_path)->required();
    ground_cmd->add_option("problem", problem_path)->required();
    ground_cmd->add_flag("--list", list_actions, "Print every ground action");

    auto* validate_cmd = app.add_subcommand("validate", "Validate a plan file");
    validate_cmd->add_option("domain", domain_path)->required();
    validate_cmd->add_option("problem", problem_path)->required();
    validate_cmd->add_option("plan", plan_path)->required();

    auto* solve_cmd = app.add_subcommand("solve", "Solve with the built-in search oracles");
    solve_cmd->add_option("domain", domain_path)->required();
    solve_cmd->add_option("problem", problem_path)->required();
    solve_cmd->add_flag("--optimal", optimal, "Breadth-first, shortest plan (default)");
    solve_cmd->add_flag("--greedy", greedy, "Greedy best-first, goal-count heuristic");
    solve_cmd->add_option("--node-budget", node_budget);

    auto* serve_cmd = app.add_subcommand("serve", "MCP server over stdin/stdout");

    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
    bench_cmd->add_option("manifest", manifest_path)->required();
    bench_cmd->add_option("--adapters", adapter_names, "e.g. oracle-optimal external:lama direct-llm")
        ->required();
    bench_cmd->add_option("--budget", budget, "Per-run wall-clock budget in seconds");
    bench_cmd->add_option("--parallelism", parallelism);
    bench_cmd->add_option("--log", log_path, "JSONL record log (resume-aware)");
    bench_cmd->add_option("--config", config_path, "key=value config file");

    auto* report_cmd = app.add_subcommand("report", "Compute metrics from a record log");
    report_cmd->add_option("log", log_path)->required();
    report_cmd->add_option("--difficulty-key", difficulty_key);
    report_cmd->add_option("--hard-set", hard_ids, "Instance ids for hard-case analysis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (parse_cmd->parsed()) return cmd_parse(domain_path, problem_path);
        if (ground_cmd->parsed()) return cmd_ground(domain_path, problem_path, list_actions);
        if (validate_cmd->parsed()) return cmd_validate(domain_path, problem_path, plan_path);
        if (solve_cmd->parsed()) {
            if (optimal && greedy) {
                std::cerr << "choose one of --optimal / --greedy\n";
                return kExitUsage;
            }
            return cmd_solve(domain_path, problem_path, greedy, node_budget);
        }
        if (serve_cmd->parsed()) {
            SessionRegistry registry;
            McpServer server(registry);
            server.serve(std::cin, std::cout);
            return kExitOk;
        }
        if (bench_cmd->parsed()) {
            if (budget <= 0) {
                std::cerr << "budget must be positive\n";
                return kExitUsage;
            }
            auto config = read_config(config_path);
            auto instances = read_manifest(manifest_path);
            std::vector<std::pair<std::string, AdapterFn>> adapters;
            for (const auto& name : adapter_names)
                adapters.emplace_back(name, make_adapter(name, config));
            if (log_path.empty()) log_path = "bench_log.jsonl";
            run_suite(instances, adapters, budget, parallelism, log_path);
            std::cout << "log written to " << log_path << "\n";
            return kExitOk;
        }
        if (report_cmd->parsed()) {
            auto records = read_record_log(log_path);
            SuiteReport report = compute_metrics(records, 10, difficulty_key);
            std::cout << render_report(report);
            if (!hard_ids.empty()) {
                std::set<std::string> hard(hard_ids.begin(), hard_ids.end());
                HardCaseReport hard_report = hard_case_analysis(records, hard);
                std::cout << "\nHard-case analysis (" << hard.size() << " instances)\n";
                for (const auto& [app, solved] : hard_report.solved) {
                    std::cout << app << " solved:";
                    for (const auto& inst : solved) std::cout << " " << inst;
                    std::cout << " | unique:";
                    for (const auto& inst : hard_report.unique.at(app)) std::cout << " " << inst;
                    std::cout << "\n";
                }
                std::cout << "common:";
                for (const auto& inst : hard_report.common) std::cout << " " << inst;
                std::cout << "\n";
            }
            return kExitOk;
        }
    } catch (const PddlError& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return e.code() == "io_error" ? kExitUsage : kExitDomainFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
