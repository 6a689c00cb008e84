#include "pddlsim/harness.hpp"

#include "pddlsim/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace pddlsim {

namespace fs = std::filesystem;

namespace {

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt1(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", value);
    return buf;
}

} // namespace

json RunRecord::to_json() const {
    json j{{"instance", instance},
           {"approach", approach},
           {"status", to_string(status)},
           {"wall_time_s", wall_time_s},
           {"tokens_in", tokens_in},
           {"tokens_out", tokens_out},
           {"attempts", attempts},
           {"timestamp", timestamp}};
    if (plan_length) j["plan_length"] = *plan_length;
    if (!note.empty()) j["note"] = note;
    return j;
}

RunRecord RunRecord::from_json(const json& j) {
    RunRecord r;
    r.instance = j.at("instance").get<std::string>();
    r.approach = j.at("approach").get<std::string>();
    auto status = run_status_from_string(j.at("status").get<std::string>());
    if (!status) throw PddlError("bad_record", "unknown status: " + j["status"].dump());
    r.status = *status;
    if (j.contains("plan_length") && !j["plan_length"].is_null())
        r.plan_length = j["plan_length"].get<long>();
    r.wall_time_s = j.value("wall_time_s", 0.0);
    r.tokens_in = j.value("tokens_in", 0L);
    r.tokens_out = j.value("tokens_out", 0L);
    r.attempts = j.value("attempts", 0);
    r.timestamp = j.value("timestamp", "");
    r.note = j.value("note", "");
    return r;
}

std::vector<RunRecord> read_record_log(const std::string& path) {
    std::vector<RunRecord> records;
    std::ifstream in(path);
    if (!in) return records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw PddlError("bad_record", "unparsable record line: " + line);
        records.push_back(RunRecord::from_json(j));
    }
    return records;
}

std::string instance_name(const std::string& problem_path) {
    return fs::path(problem_path).stem().string();
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PddlError("io_error", "cannot read manifest: " + path);
    fs::path base = fs::path(path).parent_path();
    std::vector<std::pair<std::string, std::string>> instances;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string domain, problem;
        if (!(fields >> domain >> problem))
            throw PddlError("io_error", "manifest line needs two paths: " + line);
        auto resolve = [&](const std::string& p) {
            fs::path fp(p);
            return fp.is_absolute() ? fp.string() : (base / fp).string();
        };
        instances.emplace_back(resolve(domain), resolve(problem));
    }
    return instances;
}

std::vector<RunRecord> run_suite(
    const std::vector<std::pair<std::string, std::string>>& instances,
    const std::vector<std::pair<std::string, AdapterFn>>& adapters, double budget_s,
    unsigned parallelism, const std::string& log_path) {
    if (instances.empty()) throw PddlError("bad_suite", "instance list is empty");
    if (adapters.empty()) throw PddlError("bad_suite", "adapter list is empty");

    std::vector<RunRecord> records = read_record_log(log_path);
    std::set<std::pair<std::string, std::string>> done;
    for (const auto& r : records) done.insert({r.instance, r.approach});

    struct Task {
        const std::pair<std::string, std::string>* instance;
        const std::pair<std::string, AdapterFn>* adapter;
        std::string name;
    };
    std::vector<Task> tasks;
    for (const auto& inst : instances) {
        std::string name = instance_name(inst.second);
        for (const auto& adapter : adapters)
            if (!done.count({name, adapter.first}))
                tasks.push_back(Task{&inst, &adapter, name});
    }

    std::ofstream log(log_path, std::ios::app);
    if (!log) throw PddlError("io_error", "cannot open log for append: " + log_path);
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& task = tasks[i];

            RunRecord record;
            record.instance = task.name;
            record.approach = task.adapter->first;
            record.timestamp = now_iso8601();
            try {
                Outcome outcome =
                    task.adapter->second(task.instance->first, task.instance->second, budget_s);
                record.status = outcome.status;
                if (outcome.status == RunStatus::solved && outcome.plan)
                    record.plan_length = static_cast<long>(outcome.plan->size());
                record.wall_time_s = outcome.wall_time_s;
                record.tokens_in = outcome.tokens_in;
                record.tokens_out = outcome.tokens_out;
                record.attempts = outcome.attempts;
                record.note = outcome.note;
            } catch (const std::exception& e) {
                record.status = RunStatus::harness_error;
                record.note = e.what();
            }

            std::lock_guard lock(log_mutex);
            log << record.to_json().dump() << "\n";
            log.flush();
            records.push_back(std::move(record));
        }
    };

    unsigned n_workers = std::max(1u, std::min<unsigned>(parallelism, tasks.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

SuiteReport compute_metrics(const std::vector<RunRecord>& records, std::size_t block_size,
                            const std::string& difficulty_key) {
    SuiteReport report;

    std::vector<RunRecord> usable;
    for (const auto& r : records) {
        if (r.status == RunStatus::harness_error) {
            std::cerr << "warning: excluding harness_error record (" << r.instance << ", "
                      << r.approach << "): " << r.note << "\n";
            continue;
        }
        usable.push_back(r);
    }
    if (usable.empty()) return report;

    std::set<std::string> seen_instances, seen_approaches;
    for (const auto& r : usable) {
        if (seen_instances.insert(r.instance).second) report.instances.push_back(r.instance);
        if (seen_approaches.insert(r.approach).second) report.approaches.push_back(r.approach);
    }

    std::map<std::pair<std::string, std::string>, const RunRecord*> grid;
    for (const auto& r : usable) grid[{r.instance, r.approach}] = &r;
    std::string missing;
    for (const auto& inst : report.instances)
        for (const auto& app : report.approaches)
            if (!grid.count({inst, app})) missing += " (" + inst + ", " + app + ")";
    if (!missing.empty())
        throw PddlError("non_rectangular_grid", "missing records:" + missing);

    const double total = static_cast<double>(report.instances.size());
    for (const auto& app : report.approaches) {
        FailureCounts counts;
        long tokens = 0;
        for (const auto& inst : report.instances) {
            const RunRecord& r = *grid[{inst, app}];
            switch (r.status) {
                case RunStatus::solved: ++counts.solved; break;
                case RunStatus::timeout: ++counts.timeout; break;
                case RunStatus::early_exit: ++counts.early_exit; break;
                case RunStatus::harness_error: ++counts.harness_error; break;
            }
            tokens += r.tokens_in + r.tokens_out;
        }
        report.failures[app] = counts;
        report.success_rate[app] = 100.0 * counts.solved / total;
        report.tokens_per_run[app] = tokens / total;
        report.tokens_per_solution[app] =
            counts.solved ? tokens / static_cast<double>(counts.solved) : 0.0;
    }

    for (const auto& inst : report.instances) {
        bool all = true;
        for (const auto& app : report.approaches)
            if (grid[{inst, app}]->status != RunStatus::solved) {
                all = false;
                break;
            }
        if (all) report.co_solved.insert(inst);
    }

    auto build_blocks = [&](bool co_only) {
        std::vector<BlockStats> blocks;
        for (std::size_t begin = 0; begin < report.instances.size(); begin += block_size) {
            std::size_t end = std::min(begin + block_size, report.instances.size());
            BlockStats block;
            block.begin = begin;
            block.end = end;
            block.label = std::to_string(begin) + "-" + std::to_string(end);
            for (const auto& app : report.approaches) {
                int n = 0;
                double sum = 0;
                for (std::size_t i = begin; i < end; ++i) {
                    const std::string& inst = report.instances[i];
                    if (co_only && !report.co_solved.count(inst)) continue;
                    const RunRecord& r = *grid[{inst, app}];
                    if (r.status != RunStatus::solved || !r.plan_length) continue;
                    ++n;
                    sum += static_cast<double>(*r.plan_length);
                }
                block.solved_n[app] = n;
                block.mean_length[app] = n ? sum / n : 0.0;
            }
            blocks.push_back(std::move(block));
        }
        return blocks;
    };
    report.blocks = build_blocks(false);
    report.co_solved_blocks = build_blocks(true);

    report.difficulty_key =
        !difficulty_key.empty() ? difficulty_key : report.approaches.front();
    return report;
}

HardCaseReport hard_case_analysis(const std::vector<RunRecord>& records,
                                  const std::set<std::string>& hard_set,
                                  const std::vector<std::string>& approaches) {
    std::set<std::string> known;
    for (const auto& r : records) known.insert(r.instance);
    for (const auto& inst : hard_set)
        if (!known.count(inst)) throw PddlError("unknown_instance", "unknown instance: " + inst);

    std::vector<std::string> apps = approaches;
    if (apps.empty()) {
        std::set<std::string> seen;
        for (const auto& r : records)
            if (seen.insert(r.approach).second) apps.push_back(r.approach);
    }

    HardCaseReport report;
    for (const auto& app : apps) report.solved[app] = {};
    for (const auto& r : records)
        if (report.solved.count(r.approach) && r.status == RunStatus::solved &&
            hard_set.count(r.instance))
            report.solved[r.approach].insert(r.instance);

    for (const auto& app : apps) {
        std::set<std::string> unique = report.solved[app];
        for (const auto& other : apps) {
            if (other == app) continue;
            for (const auto& inst : report.solved[other]) unique.erase(inst);
        }
        report.unique[app] = std::move(unique);
    }

    bool first = true;
    for (const auto& app : apps) {
        if (first) {
            report.common = report.solved[app];
            first = false;
        } else {
            std::set<std::string> kept;
            std::set_intersection(report.common.begin(), report.common.end(),
                                  report.solved[app].begin(), report.solved[app].end(),
                                  std::inserter(kept, kept.begin()));
            report.common = std::move(kept);
        }
    }
    return report;
}

namespace {

std::string display_name(const std::string& approach) {
    if (approach == "fd-lama-first") return "FD lama-first";
    if (approach == "fd-seq-sat-lama-2011") return "FD seq-sat-lama-2011";
    if (approach == "direct-llm") return "Direct LLM";
    if (approach == "agentic-llm") return "Agentic LLM";
    if (approach == "oracle-optimal") return "Oracle (optimal)";
    if (approach == "oracle-greedy") return "Oracle (greedy)";
    return approach;
}

void render_block_table(std::ostringstream& out, const SuiteReport& report,
                        const std::vector<BlockStats>& blocks, const char* title) {
    out << title << "\n";
    out << "Block      n";
    for (const auto& app : report.approaches) out << "  " << display_name(app);
    const bool pairwise = report.approaches.size() == 2;
    if (pairwise) out << "  Delta";
    out << "\n";
    for (const auto& block : blocks) {
        int n = 0;
        for (const auto& [app, count] : block.solved_n) n = std::max(n, count);
        if (n == 0) continue;
        out << block.label;
        for (std::size_t pad = block.label.size(); pad < 9; ++pad) out << ' ';
        out << "  " << n;
        std::vector<double> means;
        for (const auto& app : report.approaches) {
            double mean = block.mean_length.at(app);
            means.push_back(mean);
            out << "  " << (block.solved_n.at(app) ? fmt1(mean) : "---");
        }
        if (pairwise) {
            if (block.solved_n.at(report.approaches[0]) && block.solved_n.at(report.approaches[1]))
                out << "  " << fmt1(means[0] - means[1]);
            else
                out << "  ---";
        }
        out << "\n";
    }
}

} // namespace

std::string render_report(const SuiteReport& report) {
    std::ostringstream out;
    out << "Success rates and failure modes\n";
    out << "Approach  Solved  Timeout  Early exit\n";
    if (report.instances.empty()) return out.str();

    for (const auto& app : report.approaches) {
        const FailureCounts& counts = report.failures.at(app);
        out << display_name(app) << "  " << counts.solved << " ("
            << fmt1(report.success_rate.at(app)) << "%)  " << counts.timeout << "  "
            << counts.early_exit << "\n";
    }
    out << "\n";

    render_block_table(out, report, report.blocks, "Mean plan length by difficulty block");
    out << "\n";
    render_block_table(out, report, report.co_solved_blocks,
                       "Mean plan length on co-solved instances");
    out << "\nCo-solved instances: " << report.co_solved.size() << "\n";

    out << "\nToken cost\n";
    out << "Approach  Tokens/run  Tokens/solution\n";
    for (const auto& app : report.approaches)
        out << display_name(app) << "  " << fmt1(report.tokens_per_run.at(app)) << "  "
            << fmt1(report.tokens_per_solution.at(app)) << "\n";
    out << "\nDifficulty proxy: " << display_name(report.difficulty_key) << " plan length\n";
    return out.str();
}

json report_to_json(const SuiteReport& report) {
    json j;
    j["instances"] = report.instances;
    j["approaches"] = report.approaches;
    j["co_solved"] = report.co_solved;
    j["difficulty_key"] = report.difficulty_key;
    for (const auto& app : report.approaches) {
        const FailureCounts& counts = report.failures.at(app);
        j["by_approach"][app] = json{{"solved", counts.solved},
                                     {"timeout", counts.timeout},
                                     {"early_exit", counts.early_exit},
                                     {"success_rate", report.success_rate.at(app)},
                                     {"tokens_per_run", report.tokens_per_run.at(app)},
                                     {"tokens_per_solution", report.tokens_per_solution.at(app)}};
    }
    auto blocks_json = [&](const std::vector<BlockStats>& blocks) {
        json arr = json::array();
        for (const auto& block : blocks) {
            json b{{"label", block.label}};
            for (const auto& app : report.approaches)
                b["approaches"][app] = json{{"n", block.solved_n.at(app)},
                                            {"mean_plan_length", block.mean_length.at(app)}};
            arr.push_back(std::move(b));
        }
        return arr;
    };
    j["blocks"] = blocks_json(report.blocks);
    j["co_solved_blocks"] = blocks_json(report.co_solved_blocks);
    return j;
}

} // namespace pddlsim
