#pragma once

#include "pddlsim/grounding.hpp"
#include "pddlsim/pddl.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pddlsim {

// Set of ground atoms under the closed-world assumption; iteration order is
// the lexicographic atom order.
using State = std::set<Atom>;

bool goal_satisfied(const State& state, const std::vector<Literal>& goal);
bool applicable(const State& state, const GroundAction& action);

// Preconditions of `action` not holding in `state`, as literal text
// ("(holding a)" or "(not (clear b))").
std::vector<std::string> unsatisfied_preconditions(const State& state, const GroundAction& action);

// STRIPS transition: deletes first, then adds.
State apply(const State& state, const GroundAction& action);

struct StepResult {
    bool applied = false;
    State state;
    bool goal_reached = false;
    std::string message;
};

struct SessionSummary {
    std::string id;
    std::size_t object_count = 0;
    std::size_t init_atom_count = 0;
    std::size_t goal_literal_count = 0;
    std::size_t ground_action_count = 0;
};

// One live simulation instance. Mutating entry points are initialise,
// execute and reset; everything else is a read-only query.
class Session {
public:
    Session(std::string id, Domain domain, Problem problem);

    const std::string& id() const { return id_; }
    const Domain& domain() const { return domain_; }
    const Problem& problem() const { return problem_; }
    const std::vector<GroundAction>& grounded() const { return grounded_; }
    const State& current() const { return current_; }
    bool goal_reached() const { return goal_reached_; }
    const std::vector<std::pair<int, std::string>>& history() const { return history_; }
    int failed_attempts() const { return failed_attempts_; }

    SessionSummary summary() const;
    std::vector<std::string> applicable_actions() const;
    StepResult execute(const std::string& signature);
    void reset();

    // Lookup by canonical signature; throws UnknownActionError.
    const GroundAction& find_action(const std::string& signature) const;

    // Replays history from init and checks it reproduces the current state.
    bool replay_consistent() const;

private:
    std::string id_;
    Domain domain_;
    Problem problem_;
    std::vector<GroundAction> grounded_;
    std::map<std::string, std::size_t> by_signature_;
    State current_;
    bool goal_reached_ = false;
    std::vector<std::pair<int, std::string>> history_;
    int failed_attempts_ = 0;
};

// In-memory session registry. All access is serialised through one lock,
// which gives each session the required per-session total order.
class SessionRegistry {
public:
    // `domain_source` / `problem_source` are PDDL text, or a path when the
    // string contains no '('. Re-initialising an existing id replaces it.
    SessionSummary initialise(const std::string& domain_source, const std::string& problem_source,
                              std::optional<std::string> session_id = std::nullopt);

    std::pair<std::vector<Atom>, bool> query_current_state(const std::string& session_id) const;
    std::vector<std::string> query_applicable_actions(const std::string& session_id) const;
    StepResult execute_single_action(const std::string& session_id, const std::string& signature);
    std::pair<std::vector<Atom>, bool> reset_to_initial_state(const std::string& session_id);
    std::vector<std::pair<int, std::string>> query_action_history(const std::string& session_id) const;

    // Session the ops default to when exactly one exists; nullopt otherwise.
    std::optional<std::string> sole_session_id() const;
    std::size_t session_count() const;

    const Session& session(const std::string& session_id) const;

private:
    const Session& find(const std::string& session_id) const;
    Session& find(const std::string& session_id);

    mutable std::recursive_mutex mutex_;
    std::map<std::string, Session> sessions_;
    int next_id_ = 1;
};

// Resolves a text-or-path source: returns `source` unchanged when it looks
// like PDDL text (contains '('), otherwise reads the file at that path.
std::string load_source(const std::string& source);

} // namespace pddlsim
