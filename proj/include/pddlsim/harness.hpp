#pragma once

#include "pddlsim/adapters.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pddlsim {

// One (instance, approach) outcome. JSONL field names are a wire contract:
// instance, approach, status, plan_length, wall_time_s, tokens_in,
// tokens_out, attempts, timestamp.
struct RunRecord {
    std::string instance;
    std::string approach;
    RunStatus status = RunStatus::timeout;
    std::optional<long> plan_length; // present iff status == solved
    double wall_time_s = 0.0;
    long tokens_in = 0;
    long tokens_out = 0;
    int attempts = 0;
    std::string timestamp;
    std::string note;

    json to_json() const;
    static RunRecord from_json(const json& j);
};

std::vector<RunRecord> read_record_log(const std::string& path);

struct FailureCounts {
    int solved = 0;
    int timeout = 0;
    int early_exit = 0;
    int harness_error = 0;
};

struct BlockStats {
    std::string label; // e.g. "0-10"
    std::size_t begin = 0, end = 0;             // instance index range
    std::map<std::string, int> solved_n;        // per approach
    std::map<std::string, double> mean_length;  // per approach, over its solved instances
};

struct SuiteReport {
    std::vector<std::string> instances;  // ordered as first seen
    std::vector<std::string> approaches; // ordered as first seen
    std::map<std::string, FailureCounts> failures;
    std::map<std::string, double> success_rate; // percent
    std::vector<BlockStats> blocks;             // over each approach's own solved set
    std::set<std::string> co_solved;            // solved by every approach
    std::vector<BlockStats> co_solved_blocks;   // means restricted to co_solved
    std::map<std::string, double> tokens_per_run;
    std::map<std::string, double> tokens_per_solution;
    std::string difficulty_key;
};

struct HardCaseReport {
    std::map<std::string, std::set<std::string>> solved;      // per approach, within hard set
    std::map<std::string, std::set<std::string>> unique;      // solved by this approach only
    std::set<std::string> common;                             // solved by every approach
};

using AdapterFn = std::function<Outcome(const std::string& domain_path,
                                        const std::string& problem_path, double budget_s)>;

// Runs every (instance, adapter) pair not already present in the log at
// `log_path`, appending one JSONL record per completed run. Instance order
// is preserved; dispatch may be concurrent up to `parallelism`. Returns the
// full record set (resumed + new).
std::vector<RunRecord> run_suite(
    const std::vector<std::pair<std::string, std::string>>& instances, // (domain, problem) paths
    const std::vector<std::pair<std::string, AdapterFn>>& adapters,
    double budget_s, unsigned parallelism, const std::string& log_path);

// Reads a suite manifest: one instance per line, "domain_path problem_path",
// blank lines and '#' comments skipped. Paths are relative to the manifest.
std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path);

// Instance name used in records: the problem file stem.
std::string instance_name(const std::string& problem_path);

// Aggregates a rectangular record grid into every suite metric. Rows with
// status harness_error are excluded (with a stderr warning); a missing
// (instance, approach) pair throws PddlError("non_rectangular_grid").
SuiteReport compute_metrics(const std::vector<RunRecord>& records, std::size_t block_size = 10,
                            const std::string& difficulty_key = "");

// Partition of `hard_set` by solver. `approaches` empty means all present.
HardCaseReport hard_case_analysis(const std::vector<RunRecord>& records,
                                  const std::set<std::string>& hard_set,
                                  const std::vector<std::string>& approaches = {});

// Plain-text tables; deterministic, one-decimal rates. Adds a Δ column to
// the per-block sections when the report compares exactly two approaches.
std::string render_report(const SuiteReport& report);

// Machine-readable companion to render_report.
json report_to_json(const SuiteReport& report);

} // namespace pddlsim
